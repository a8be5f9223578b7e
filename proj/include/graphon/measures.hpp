#pragma once

#include <functional>
#include <gmpxx.h>
#include <string>
#include <vector>

#include "graphon/core.hpp"
#include "graphon/coupling.hpp"

namespace graphon {

inline constexpr double kAtomMergeTolerance = 1e-12;

/// Finite measure on [0,1] with finitely many atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Sorts atoms and merges those closer than 1e-12. Masses must be > 0.
  DiscreteMeasure(std::vector<double> atoms, std::vector<double> masses);

  static DiscreteMeasure dirac(double x, double mass = 1.0);

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total() const noexcept { return total_; }
  double integral(const std::function<double(double)>& f) const;

  /// Same atoms and masses within `tol`.
  bool approx_equal(const DiscreteMeasure& other, double tol = 1e-9) const;

  bool operator==(const DiscreteMeasure&) const = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> masses_;
  double total_ = 0.0;
};

DiscreteMeasure range_frequencies(const StepGraphon& w);
DiscreteMeasure degree_frequencies(const StepGraphon& w);
DiscreteMeasure add_measures(const DiscreteMeasure& a, const DiscreteMeasure& b);

struct FlatnessWitness {
  bool feasible = false;
  /// Empty (0 x 0) when infeasible.
  Coupling coupling;
  double residual = 0.0;
  std::string reason;
};

/// Largest violation of the marginal, barycenter and sign constraints.
double flatness_residual(const DiscreteMeasure& l1, const DiscreteMeasure& l2, const Matrix& psi);

/// Decides whether l1 is at least as flat as l2. The LP minimizes the
/// transported distance, so equal measures yield the diagonal witness.
FlatnessWitness check_flatter(const DiscreteMeasure& l1, const DiscreteMeasure& l2, double tol = 1e-9,
                              bool exact_rational = false);

/// Measure with exact rational atoms and masses.
struct RationalMeasure {
  std::vector<mpq_class> atoms;
  std::vector<mpq_class> masses;
};

/// Exact-arithmetic variant: feasibility is decided without tolerances.
FlatnessWitness check_flatter_exact(const RationalMeasure& l1, const RationalMeasure& l2);

RationalMeasure to_rational(const DiscreteMeasure& m);

/// Xi = P1 diag(1/q) P2 with zero-mass middle atoms dropped.
Coupling compose_couplings(const Coupling& p1, const Coupling& p2, const DiscreteMeasure& mid);

struct ConvexFunction {
  std::string name;
  std::function<double(double)> f;
};

/// x^2, |x - 1/4|, |x - 1/2|, |x - 3/4|, exp(x).
std::vector<ConvexFunction> default_convex_family();

struct ConvexOrderEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

struct ConvexOrderReport {
  std::vector<ConvexOrderEntry> entries;
  int violations = 0;
};

ConvexOrderReport convex_order_test(const DiscreteMeasure& l1, const DiscreteMeasure& l2,
                                    const std::vector<ConvexFunction>& family = default_convex_family());

}  // namespace graphon
