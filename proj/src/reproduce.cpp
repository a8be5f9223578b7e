#include "graphon/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "graphon/core.hpp"
#include "graphon/coupling.hpp"
#include "graphon/errors.hpp"
#include "graphon/measures.hpp"
#include "graphon/metrics.hpp"
#include "graphon/multiway.hpp"
#include "graphon/named.hpp"
#include "graphon/rng.hpp"

namespace graphon {

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

std::string fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

// |measured - expected| <= tolerance.
Check near(std::string name, double measured, double expected, double tolerance) {
  Check c{std::move(name), measured, expected, tolerance, std::abs(measured - expected) <= tolerance, ""};
  if (!c.passed) c.note = "off by " + fmt("%.6g", std::abs(measured - expected));
  return c;
}

// measured <= bound + slack.
Check at_most(std::string name, double measured, double bound, double slack) {
  Check c{std::move(name), measured, bound, slack, measured <= bound + slack, ""};
  if (!c.passed) c.note = "exceeds bound by " + fmt("%.6g", measured - bound);
  return c;
}

Check flag(std::string name, bool ok, std::string note = {}) {
  return Check{std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, ok, std::move(note)};
}

StepGraphon random_grid_graphon(std::size_t n, Rng& rng) {
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) v(i, j) = v(j, i) = rng.uniform();
  return StepGraphon(std::vector<double>(n, 1.0 / static_cast<double>(n)), std::move(v));
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

ScenarioReport chessboard() {
  ScenarioReport r;
  const StepGraphon bip = bipartite_graphon();
  const StepGraphon half = StepGraphon::constant(0.5);
  double previous = 0.0;
  for (std::size_t n = 1; n <= 64; n *= 2) {
    const double d = weak_star_distance(interlace_version(bip, n), half, 6);
    r.lines.push_back("n=" + std::to_string(n) + " d_w*=" + fmt("%.6e", d));
    if (n > 1) {
      Check c{"decrease at n=" + std::to_string(n), d, previous, 0.0, d < previous, ""};
      if (!c.passed) c.note = "not below the previous level";
      r.checks.push_back(std::move(c));
    }
    previous = d;
  }
  r.checks.push_back(at_most("final distance below 0.01", previous, 0.01, 0.0));
  return r;
}

ScenarioReport counterexample(std::optional<double> eps) {
  ScenarioReport r;
  std::vector<double> values;
  if (eps) {
    check_family_eps(*eps);
    values.push_back(*eps);
  } else {
    values = {std::ldexp(1.0, -4), std::ldexp(1.0, -6), std::ldexp(1.0, -8)};
  }
  double previous_gap = INFINITY;
  for (double e : values) {
    const std::string tag = "eps=" + fmt("%g", e);
    const double strip = u2_strip_integral(e);
    r.lines.push_back(tag + " strip=" + fmt("%.10f", strip) + " ratio=" + fmt("%.6f", strip / e) +
                      " predicted 1.5");
    r.checks.push_back(near("strip integral " + tag, strip, 1.5 * e, 8.0 * e * e));
    const double gap = std::abs(strip / e - 1.5);
    if (std::isfinite(previous_gap)) {
      Check c{"strip ratio approaches 1.5 " + tag, gap, previous_gap, 0.0, gap < previous_gap, ""};
      if (!c.passed) c.note = "ratio moved away from 1.5";
      r.checks.push_back(std::move(c));
    }
    previous_gap = gap;

    const double sup = column_supremum(e);
    r.lines.push_back(tag + " column supremum/eps=" + fmt("%.6f", sup / e) + " predicted 1.25");
    r.checks.push_back(near("column supremum " + tag, sup / e, 1.25, 10.0 * e));

    const StepGraphon w2 = w2_graphon(e);
    const std::vector<double> cuts{0.0, 0.25 - e / 2, 0.25 + e / 2, 0.5, 0.75 - e / 2, 0.75 + e / 2, 1.0};
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const double raster = rectangle_integral(w2, cuts[i], cuts[i + 1], cuts[j], cuts[j + 1]);
        const double exact = w2_exact_integral(e, cuts[i], cuts[i + 1], cuts[j], cuts[j + 1]);
        worst = std::max(worst, std::abs(raster - exact));
      }
    r.lines.push_back(tag + " W2 raster vs exact geometry, worst rectangle gap " + fmt("%.3e", worst));
    r.checks.push_back(at_most("W2 raster agreement " + tag, worst, 4.0 * e * e, 0.0));
  }
  return r;
}

ScenarioReport flatness() {
  ScenarioReport r;
  const DiscreteMeasure dirac = DiscreteMeasure::dirac(0.5);
  const DiscreteMeasure split({0.0, 1.0}, {0.5, 0.5});
  const FlatnessWitness forward = check_flatter(dirac, split);
  const FlatnessWitness backward = check_flatter(split, dirac);
  r.lines.push_back("dirac(1/2) vs {0,1}: " + std::string(forward.feasible ? "feasible" : "infeasible") +
                    ", residual " + fmt("%.3e", forward.residual));
  r.lines.push_back("{0,1} vs dirac(1/2): " + std::string(backward.feasible ? "feasible" : "infeasible") +
                    (backward.reason.empty() ? "" : " (" + backward.reason + ")"));
  r.checks.push_back(flag("dirac(1/2) flatter than {0,1}", forward.feasible));
  if (forward.feasible) r.checks.push_back(at_most("witness residual", forward.residual, 1e-9, 0.0));
  r.checks.push_back(flag("{0,1} not flatter than dirac(1/2)", !backward.feasible));
  return r;
}

ScenarioReport chains(std::uint64_t seed) {
  ScenarioReport r;
  Rng rng = Rng::derive(seed, 0);
  const StepGraphon w = random_grid_graphon(64, rng);
  double previous_l1 = INFINITY, previous_cut = INFINITY;
  for (int n = 0; n <= 6; ++n) {
    const StepGraphon wn = stepping(w, PartitionSpec::dyadic(w.weights(), n));
    const double l1 = l1_distance(wn, w, Coupling::northwest_corner(wn.weights(), w.weights()));
    const CutDistanceResult cut = cut_distance(wn, w, {}, seed);
    r.lines.push_back("n=" + std::to_string(n) + " l1=" + fmt("%.6e", l1) + " cut<=" + fmt("%.6e", cut.value) +
                      (cut.certified ? "" : " (heuristic)"));
    if (n > 0) {
      r.checks.push_back(at_most("l1 non-increasing at n=" + std::to_string(n), l1, previous_l1, 0.0));
      r.checks.push_back(at_most("cut distance non-increasing at n=" + std::to_string(n), cut.value, previous_cut, 2e-6));
    }
    previous_l1 = l1;
    previous_cut = cut.value;
  }
  r.checks.push_back(at_most("l1 vanishes at full depth", previous_l1, 0.0, 1e-12));
  return r;
}

ScenarioReport multiway(std::uint64_t seed) {
  ScenarioReport r;
  Rng rng = Rng::derive(seed, 0);
  const StepGraphon w = random_grid_graphon(8, rng);
  const StepGraphon v = grid_version(w, 8, random_permutation(8, rng));
  const std::vector<double> a{0.5, 0.5};
  MultiwaySampling deterministic;
  deterministic.random_points = false;
  const double version_gap = multiway_hausdorff(sample_multiway_set(w, a, 0, seed, deterministic),
                                                sample_multiway_set(v, a, 0, seed, deterministic));
  r.lines.push_back("random W vs a grid version: hausdorff " + fmt("%.3e", version_gap));
  r.checks.push_back(at_most("version invariance", version_gap, 0.0, 1e-9));

  const double constant_gap = multiway_hausdorff(sample_multiway_set(StepGraphon::constant(0.0), a, 4, seed),
                                                 sample_multiway_set(StepGraphon::constant(1.0), a, 4, seed));
  r.lines.push_back("constant 0 vs constant 1: hausdorff " + fmt("%.17g", constant_gap));
  r.checks.push_back(near("constants 0 and 1", constant_gap, 1.0, 1e-12));
  return r;
}

}  // namespace

ScenarioReport reproduce(const std::string& which, std::optional<double> eps, std::uint64_t seed) {
  ScenarioReport r;
  if (which == "chessboard") {
    r = chessboard();
  } else if (which == "counterexample") {
    r = counterexample(eps);
  } else if (which == "flatness") {
    r = flatness();
  } else if (which == "chains") {
    r = chains(seed);
  } else if (which == "multiway") {
    r = multiway(seed);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + which + "'");
  }
  r.which = which;
  return r;
}

}  // namespace graphon
