#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "graphon/core.hpp"
#include "graphon/coupling.hpp"
#include "graphon/errors.hpp"

namespace graphon {

inline constexpr std::size_t kMaxExactBlocks = 24;

enum class CutNormMode { Exact, Heuristic };

struct CutNormResult {
  double value = 0.0;
  /// 0/1 selections over the input blocks.
  std::vector<int> witness_s;
  std::vector<int> witness_t;
  CutNormMode mode = CutNormMode::Exact;
};

/// Exact mode enumerates all s in {0,1}^k (k counted after dropping zero
/// blocks and merging identical rows) with a greedy t. Heuristic mode runs
/// `restarts` seeded alternating maximizations.
CutNormResult cut_norm(const SignedStepKernel& y, CutNormMode mode, std::uint64_t seed = 0, int restarts = 32);

/// Exact when small enough, heuristic otherwise.
CutNormResult cut_norm_auto(const SignedStepKernel& y, std::uint64_t seed = 0);

/// Cut norm of the difference of the two overlays under `c`.
double cut_norm_distance(const StepGraphon& u, const StepGraphon& w, const Coupling& c);

/// Blockwise L1 distance on the overlay under `c`.
double l1_distance(const StepGraphon& u, const StepGraphon& w, const Coupling& c);

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 200;
  double tol = 1e-9;
};

struct CutDistanceResult {
  double value = 0.0;
  Coupling coupling;
  /// False when the overlay was too large for exact cut-norm evaluation.
  bool certified = true;
  /// True when the equal-mass permutation sweep ran.
  bool swept = false;
};

/// Upper bound on the cut distance over overlay couplings.
CutDistanceResult cut_distance(const StepGraphon& u, const StepGraphon& w, const OptimizerConfig& config = {},
                               std::uint64_t seed = 0);

/// Number of dyadic intervals of levels 0..depth, 2^(depth+1) - 1.
std::size_t dyadic_count(int depth);

/// Integrals of w over A_n x A_k for the breadth-first dyadic intervals,
/// row-major in (n, k).
std::vector<double> weak_star_signature(const StepGraphon& w, int depth);

/// Sum of 2^-(n+k) |x - y| over signature coordinates.
double signature_distance(std::span<const double> x, std::span<const double> y, int depth);

double weak_star_distance(const StepGraphon& u, const StepGraphon& w, int depth);

/// Max of the two directed sup-inf distances.
template <class A, class B, class Dist>
double hausdorff_distance(const std::vector<A>& a, const std::vector<B>& b, Dist&& d) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "Hausdorff distance of an empty set");
  double result = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) best = std::min(best, static_cast<double>(d(x, y)));
    result = std::max(result, best);
  }
  for (const auto& y : b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a) best = std::min(best, static_cast<double>(d(x, y)));
    result = std::max(result, best);
  }
  return result;
}

}  // namespace graphon
