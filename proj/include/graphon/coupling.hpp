#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphon/matrix.hpp"

namespace graphon {

class Rng;

inline constexpr double kMarginalTolerance = 1e-9;

/// Nonnegative matrix with prescribed row and column sums. Used both as the
/// overlay of two step graphons and as a flatness witness.
class Coupling {
 public:
  Coupling() = default;
  /// Validates entries >= 0 and both marginals within 1e-9.
  Coupling(Matrix matrix, std::vector<double> row_marginal, std::vector<double> col_marginal);

  /// Marginals taken from the matrix itself.
  static Coupling from_matrix(Matrix matrix);
  static Coupling product(std::span<const double> rows, std::span<const double> cols);
  /// Positional overlay of two interval layouts (northwest-corner rule).
  static Coupling northwest_corner(std::span<const double> rows, std::span<const double> cols);
  static Coupling diagonal(std::span<const double> masses);

  const Matrix& matrix() const noexcept { return matrix_; }
  const std::vector<double>& row_marginal() const noexcept { return row_marginal_; }
  const std::vector<double>& col_marginal() const noexcept { return col_marginal_; }

  Coupling transposed() const;

  bool operator==(const Coupling&) const = default;

 private:
  Matrix matrix_;
  std::vector<double> row_marginal_;
  std::vector<double> col_marginal_;
};

/// Northwest-corner vertex of the transport polytope after visiting rows
/// and columns in the given orders.
Matrix northwest_corner(std::span<const double> rows, std::span<const double> cols,
                        std::span<const std::size_t> row_order, std::span<const std::size_t> col_order);

struct ScalingResult {
  Matrix matrix;
  double residual = 0.0;
  int iterations = 0;
};

/// Alternating row/column scaling of a positive start matrix onto the two
/// marginals. Throws ScalingDiverged (with the residual) if the residual is
/// still above `tol` after `max_iters` sweeps.
ScalingResult scale_to_marginals(Matrix start, std::span<const double> rows, std::span<const double> cols,
                                 double tol = 1e-10, int max_iters = 500);

/// Seeded random point of the transport polytope, scaled from a positive
/// start that mixes random vertices with the product coupling.
Matrix random_transport_point(std::span<const double> rows, std::span<const double> cols, Rng& rng);

/// Minimizes <cost, C> over the transport polytope (LP vertex).
Matrix min_cost_transport(const Matrix& cost, std::span<const double> rows, std::span<const double> cols);

}  // namespace graphon
