#include "graphon/order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphon/canonical.hpp"
#include "graphon/errors.hpp"
#include "graphon/measures.hpp"
#include "graphon/metrics.hpp"
#include "graphon/rng.hpp"

namespace graphon {

bool OrderVerdict::failed(const std::string& name) const {
  return std::any_of(conditions.begin(), conditions.end(),
                     [&](const ConditionResult& c) { return c.name == name && !c.passed; });
}

namespace {

ConditionResult flatness_condition(const char* name, const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const FlatnessWitness w = check_flatter(a, b);
  ConditionResult c{name, w.feasible, w.reason};
  if (w.feasible) c.detail += ", residual " + std::to_string(w.residual);
  return c;
}

}  // namespace

OrderVerdict preceq_necessary(const StepGraphon& u, const StepGraphon& w) {
  OrderVerdict v;
  const double du = edge_density(u);
  const double dw = edge_density(w);
  v.conditions.push_back({kDensityCondition, std::abs(du - dw) <= 1e-9,
                          "densities " + std::to_string(du) + " and " + std::to_string(dw)});
  v.conditions.push_back(flatness_condition(kRangeCondition, range_frequencies(u), range_frequencies(w)));
  v.conditions.push_back(flatness_condition(kDegreeCondition, degree_frequencies(u), degree_frequencies(w)));
  const bool all = std::all_of(v.conditions.begin(), v.conditions.end(), [](const auto& c) { return c.passed; });
  v.status = all ? VerdictStatus::Consistent : VerdictStatus::Refuted;
  return v;
}

std::string_view to_string(Extremality e) {
  switch (e) {
    case Extremality::Minimal: return "minimal";
    case Extremality::Maximal: return "maximal";
    case Extremality::Neither: return "neither";
    case Extremality::Both: return "both";
  }
  return "neither";
}

Extremality classify_extremal(const StepGraphon& w, double tol) {
  double lo = 1.0, hi = 0.0;
  bool zero_one = true;
  for (std::size_t i = 0; i < w.blocks(); ++i) {
    if (w.weight(i) <= 0.0) continue;
    for (std::size_t j = 0; j < w.blocks(); ++j) {
      if (w.weight(j) <= 0.0) continue;
      const double v = w.value(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (v > tol && v < 1.0 - tol) zero_one = false;
    }
  }
  const bool minimal = hi - lo <= tol;
  if (minimal && zero_one) return Extremality::Both;
  if (minimal) return Extremality::Minimal;
  if (zero_one) return Extremality::Maximal;
  return Extremality::Neither;
}

StepGraphon strictify(const StepGraphon& w, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1/2]");
  const std::size_t k = w.blocks();
  auto interior = [&](double v) { return v >= eps && v <= 1.0 - eps; };
  bool any = false;
  for (std::size_t i = 0; i < k && !any; ++i)
    for (std::size_t j = 0; j < k && !any; ++j)
      any = w.weight(i) > 0.0 && w.weight(j) > 0.0 && interior(w.value(i, j));
  if (!any) throw Error(ErrorKind::NoInteriorValues, "no positive-mass value lies in [eps, 1 - eps]");

  std::vector<double> weights(2 * k);
  Matrix values(2 * k, 2 * k);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < k; ++i) weights[c * k + i] = w.weight(i) / 2.0;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          double v = w.value(i, j);
          if (interior(v)) v += c == d ? eps : -eps;
          values(c * k + i, d * k + j) = std::clamp(v, 0.0, 1.0);
        }
  return StepGraphon(std::move(weights), std::move(values));
}

EnvelopeSample sample_envelope(const StepGraphon& w, std::size_t resolution, std::size_t count, int depth,
                               std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "count must be at least 1");
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be at least 1");
  const StepGraphon canon = canonical_form(refine_to_grid(w, resolution)).graphon;
  const StepGraphon grid = refine_to_grid(canon, resolution);

  EnvelopeSample sample;
  sample.resolution = resolution;
  sample.depth = depth;
  std::vector<std::size_t> perm(resolution);
  for (std::size_t s = 0; s < count; ++s) {
    Rng rng = Rng::derive(seed, s);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = resolution; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    sample.signatures.push_back(weak_star_signature(grid_version(grid, resolution, perm), depth));
  }
  for (std::size_t n = 1; 2 * n <= resolution; ++n)
    if (resolution % (2 * n) == 0) {
      sample.signatures.push_back(weak_star_signature(interlace_version(grid, n, resolution), depth));
    }
  for (int d = 0; d <= depth; ++d) {
    const PartitionSpec p = PartitionSpec::dyadic(canon.weights(), d);
    sample.signatures.push_back(weak_star_signature(stepping(canon, p), depth));
  }
  return sample;
}

double chi_estimate(const StepGraphon& u, const StepGraphon& w, std::size_t resolution, std::size_t count, int depth,
                    std::uint64_t seed) {
  const EnvelopeSample su = sample_envelope(u, resolution, count, depth, seed);
  const EnvelopeSample sw = sample_envelope(w, resolution, count, depth, seed);
  return hausdorff_distance(su.signatures, sw.signatures, [depth](const auto& x, const auto& y) {
    return signature_distance(x, y, depth);
  });
}

}  // namespace graphon
