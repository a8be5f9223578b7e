#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "graphon/core.hpp"
#include "graphon/measures.hpp"
#include "graphon/rng.hpp"

namespace graphon::test {

inline std::vector<double> random_weights(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < k; ++i) rest -= w[i];
  w.back() = rest;
  return w;
}

inline Matrix random_symmetric(Rng& rng, std::size_t k, double lo = 0.0, double hi = 1.0) {
  Matrix v(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) v(i, j) = v(j, i) = rng.uniform(lo, hi);
  return v;
}

inline StepGraphon random_graphon(Rng& rng, std::size_t k) { return {random_weights(rng, k), random_symmetric(rng, k)}; }

inline StepGraphon random_grid(Rng& rng, std::size_t n) {
  return {std::vector<double>(n, 1.0 / static_cast<double>(n)), random_symmetric(rng, n)};
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

// Random fractional assignment of the blocks of `weights` to q parts.
inline PartitionSpec random_partition(Rng& rng, const std::vector<double>& weights, std::size_t q) {
  Matrix a(weights.size(), q);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::vector<double> share(q);
    double total = 0.0;
    for (auto& x : share) total += (x = rng.coin() ? rng.uniform() : 0.0);
    if (total == 0.0) {
      share[rng.below(q)] = 1.0;
      total = 1.0;
    }
    for (std::size_t l = 0; l < q; ++l) a(i, l) = weights[i] * share[l] / total;
  }
  return PartitionSpec(std::move(a));
}

// Monte Carlo estimate of the integral of w with n uniform points.
inline double monte_carlo_density(const StepGraphon& w, Rng& rng, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += w(rng.uniform(), rng.uniform());
  return total / static_cast<double>(n);
}

inline DiscreteMeasure random_measure(Rng& rng, std::size_t atoms) {
  std::vector<double> x(atoms), m(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    x[i] = rng.uniform();
    m[i] = rng.uniform(0.05, 1.0);
  }
  double total = 0.0;
  for (double v : m) total += v;
  for (double& v : m) v /= total;
  return {x, m};
}

// A measure that is at least as flat as `c`: each atom of c spreads its mass
// over up to `parts` groups, and every group collapses to its barycenter.
inline DiscreteMeasure flatter_measure(Rng& rng, const DiscreteMeasure& c, std::size_t parts) {
  std::vector<double> mass(parts, 0.0), moment(parts, 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    std::vector<double> share(parts);
    double total = 0.0;
    for (auto& v : share) total += (v = rng.coin() ? rng.uniform() : 0.0);
    if (total == 0.0) {
      share[rng.below(parts)] = 1.0;
      total = 1.0;
    }
    for (std::size_t i = 0; i < parts; ++i) {
      const double piece = c.masses()[j] * share[i] / total;
      mass[i] += piece;
      moment[i] += piece * c.atoms()[j];
    }
  }
  std::vector<double> x, m;
  for (std::size_t i = 0; i < parts; ++i)
    if (mass[i] > 0.0) {
      x.push_back(std::clamp(moment[i] / mass[i], 0.0, 1.0));
      m.push_back(mass[i]);
    }
  return {x, m};
}

}  // namespace graphon::test
