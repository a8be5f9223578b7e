#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "graphon/matrix.hpp"

namespace graphon {

class Coupling;

inline constexpr double kWeightTolerance = 1e-12;

/// Symmetric step kernel on [0,1]^2: block i occupies an interval of length
/// weights[i], laid out left to right in index order.
///
/// Zero-weight blocks are kept so that block indices stay stable; every
/// integral and supremum in the library ignores them.
class StepGraphon {
 public:
  /// Validates weights (nonnegative, sum 1 within 1e-12, renormalized) and
  /// values (exactly symmetric, inside [0,1]). Throws graphon::Error.
  StepGraphon(std::vector<double> weights, Matrix values);

  static StepGraphon constant(double c);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const Matrix& values() const noexcept { return values_; }
  std::size_t blocks() const noexcept { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  double value(std::size_t i, std::size_t j) const { return values_(i, j); }

  /// Cumulative block boundaries 0 = b_0 <= b_1 <= ... <= b_k = 1.
  std::vector<double> boundaries() const;

  /// Pointwise evaluation; a point on a block boundary belongs to the block
  /// on its right, and x = 1 to the last positive-weight block.
  double operator()(double x, double y) const;

  bool operator==(const StepGraphon&) const = default;

 private:
  std::vector<double> weights_;
  Matrix values_;
};

/// Same layout as StepGraphon with values in [-1,1]; the input of cut_norm.
class SignedStepKernel {
 public:
  SignedStepKernel(std::vector<double> weights, Matrix values);

  /// U - W for two graphons on identical weights.
  static SignedStepKernel difference(const StepGraphon& u, const StepGraphon& w);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const Matrix& values() const noexcept { return values_; }
  std::size_t blocks() const noexcept { return weights_.size(); }

  bool operator==(const SignedStepKernel&) const = default;

 private:
  std::vector<double> weights_;
  Matrix values_;
};

/// Fractional assignment r(i, l) >= 0 of source block i's mass to target
/// part l. Row sums are the source masses, column sums the part masses.
class PartitionSpec {
 public:
  explicit PartitionSpec(Matrix assignment);

  static PartitionSpec identity(std::span<const double> weights);
  static PartitionSpec trivial(std::span<const double> weights);
  /// Parts are the intervals between consecutive `cuts` (which must start
  /// at 0 and end at 1); block masses are split by positional overlap.
  static PartitionSpec positional(std::span<const double> weights, std::span<const double> cuts);
  /// The 2^depth equal dyadic intervals, as a positional partition.
  static PartitionSpec dyadic(std::span<const double> weights, int depth);

  const Matrix& assignment() const noexcept { return assignment_; }
  std::size_t sources() const noexcept { return assignment_.rows(); }
  std::size_t parts() const noexcept { return assignment_.cols(); }
  std::vector<double> source_masses() const { return assignment_.row_sums(); }
  std::vector<double> part_masses() const { return assignment_.col_sums(); }

  /// Throws PartitionMismatch unless the row sums equal `weights`.
  void check_source(std::span<const double> weights) const;

 private:
  Matrix assignment_;
};

/// Piecewise-constant function on [0,1] with values in [0,1].
class StepFunction1D {
 public:
  StepFunction1D(std::vector<double> breakpoints, std::vector<double> values);

  static StepFunction1D constant(double c);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(double x) const;
  double integral() const;

  bool operator==(const StepFunction1D&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

StepGraphon make_step_graphon(std::vector<double> weights, const std::vector<std::vector<double>>& values);

double edge_density(const StepGraphon& w);

StepFunction1D degree_function(const StepGraphon& w);

/// Sum over block pairs of a_i a_j f(W_ij).
double int_f(const StepGraphon& w, const std::function<double(double)>& f);

/// Blockwise averaging over the target parts of `p`. Parts of zero mass get
/// value 0.
StepGraphon stepping(const StepGraphon& w, const PartitionSpec& p);

/// Overlay of `u` and `w` on the pair blocks (i, j) with mass c(i, j),
/// ordered row-major. The first result carries u's values, the second w's.
std::pair<StepGraphon, StepGraphon> common_refinement(const StepGraphon& u, const StepGraphon& w,
                                                      const Coupling& c);

/// Block index of each of the n equal cells of [0,1]. Throws
/// ResolutionIncompatible unless every weight is a multiple of 1/n.
std::vector<std::size_t> grid_cells(const StepGraphon& w, std::size_t n);

/// w refined to n equal cells.
StepGraphon refine_to_grid(const StepGraphon& w, std::size_t n);

/// The version on n equal cells whose cell t carries source cell perm[t].
StepGraphon grid_version(const StepGraphon& w, std::size_t n, std::span<const std::size_t> perm);

/// The version realizing the interlacing map x -> floor(2 n x)/(2 n) + x on
/// [0,1/2] and x -> (floor(2 n x) - 2 n + 1)/(2 n) + x on [1/2,1]: cells of
/// width 1/(2n) from the left half go to even slots, right half to odd.
/// `resolution` (default 2n, must be a multiple of 2n) is the grid that w is
/// refined to first.
StepGraphon interlace_version(const StepGraphon& w, std::size_t n, std::size_t resolution = 0);

/// Pieces (part l, block i) of mass j(i, l), stacked left to right by part
/// and then by block index; empty pieces are omitted.
StepGraphon reorder_by_ordered_partition(const StepGraphon& w, const PartitionSpec& j);

/// Right-hand side of the four-term identity
///   W~(psi x, psi y) s(x) s(y) + W~(psi x, phi y) s(x)(1 - s(y))
///   + W~(phi x, psi y)(1 - s(x)) s(y) + W~(phi x, phi y)(1 - s(x))(1 - s(y)),
/// psi(x) = int_0^x s and phi(x) = psi(1) + int_0^x (1 - s), evaluated at the
/// midpoints of an n x n grid. Throws ResolutionIncompatible unless every
/// breakpoint of the right-hand side lies on that grid.
StepGraphon cohen_reconstruct(const StepGraphon& tilde_w, const StepFunction1D& s, std::size_t n);

/// Exact integral of w over [x0,x1] x [y0,y1].
double rectangle_integral(const StepGraphon& w, double x0, double x1, double y0, double y1);

/// Length of [lo, hi) covered by each block.
std::vector<double> interval_overlaps(std::span<const double> weights, double lo, double hi);

}  // namespace graphon
