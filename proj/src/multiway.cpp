#include "graphon/multiway.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphon/canonical.hpp"
#include "graphon/coupling.hpp"
#include "graphon/errors.hpp"
#include "graphon/metrics.hpp"
#include "graphon/rng.hpp"

namespace graphon {

Matrix multiway_matrix(const StepGraphon& w, const PartitionSpec& r) {
  if (r.sources() != w.blocks()) {
    throw Error(ErrorKind::MarginalMismatch, "assignment rows do not match the block count");
  }
  const auto rows = r.source_masses();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::abs(rows[i] - w.weight(i)) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, "assignment row " + std::to_string(i) + " does not match the weight");
    }
  const Matrix& a = r.assignment();
  const std::size_t k = w.blocks();
  const std::size_t q = r.parts();
  Matrix t(k, q);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double v = w.value(i, j);
      if (v == 0.0) continue;
      for (std::size_t m = 0; m < q; ++m) t(i, m) += v * a(j, m);
    }
  Matrix out(q, q);
  for (std::size_t l = 0; l < q; ++l)
    for (std::size_t m = l; m < q; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += a(i, l) * t(i, m);
      out(l, m) = s;
      out(m, l) = s;
    }
  return out;
}

namespace {

bool next_order(std::vector<std::size_t>& v) { return std::next_permutation(v.begin(), v.end()); }

std::size_t factorial_capped(std::size_t n, std::size_t cap) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= i;
    if (f > cap) return cap + 1;
  }
  return f;
}

// Rescales rows exactly onto `rows` after column-final scaling.
Matrix fix_rows(Matrix m, std::span<const double> rows) {
  const auto sums = m.row_sums();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double f = sums[i] > 0.0 ? rows[i] / sums[i] : 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= f;
  }
  return m;
}

// Vertex ascent on +/- M(l, m) through linearized transport steps.
Matrix greedy_extreme(const StepGraphon& g, std::span<const double> a, std::size_t l, std::size_t m, bool maximize) {
  const std::size_t k = g.blocks();
  const std::size_t q = a.size();
  std::vector<double> deg(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) deg[i] += g.weight(j) * g.value(i, j);
  std::vector<std::size_t> rows(k), cols(q);
  std::iota(rows.begin(), rows.end(), 0);
  std::stable_sort(rows.begin(), rows.end(),
                   [&](std::size_t x, std::size_t y) { return maximize ? deg[x] > deg[y] : deg[x] < deg[y]; });
  cols[0] = l;
  std::size_t fill = 1;
  if (m != l) cols[fill++] = m;
  for (std::size_t c = 0; c < q; ++c)
    if (c != l && c != m) cols[fill++] = c;
  Matrix r = northwest_corner(g.weights(), a, rows, cols);
  const double sign = maximize ? 1.0 : -1.0;
  auto objective = [&](const Matrix& x) { return sign * multiway_matrix(g, PartitionSpec(x))(l, m); };
  double current = objective(r);
  for (int iter = 0; iter < 20; ++iter) {
    Matrix cost(k, q);
    for (std::size_t i = 0; i < k; ++i) {
      double to_l = 0.0, to_m = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        to_l += g.value(i, j) * r(j, l);
        to_m += g.value(i, j) * r(j, m);
      }
      cost(i, l) -= sign * to_m;
      cost(i, m) -= sign * to_l;
    }
    Matrix next = min_cost_transport(cost, g.weights(), a);
    const double value = objective(next);
    if (!(value > current + 1e-15)) break;
    current = value;
    r = std::move(next);
  }
  return r;
}

}  // namespace

MultiwayMatrixSet sample_multiway_set(const StepGraphon& w, const std::vector<double>& a, std::size_t count,
                                      std::uint64_t seed, const MultiwaySampling& sampling) {
  if (count < 1 && sampling.random_points) throw Error(ErrorKind::InvalidArgument, "count must be at least 1");
  if (a.empty()) throw Error(ErrorKind::InvalidArgument, "part masses are empty");
  double total = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw Error(ErrorKind::WeightsNotNormalized, "part masses must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) throw Error(ErrorKind::WeightsNotNormalized, "part masses must sum to 1");

  const CanonicalForm form = canonical_form(w);
  const StepGraphon& g = form.graphon;
  const std::size_t k = g.blocks();
  const std::size_t q = a.size();

  MultiwayMatrixSet set;
  set.a = a;
  auto add = [&](Matrix r) {
    PartitionSpec spec(fix_rows(std::move(r), g.weights()));
    Matrix m = multiway_matrix(g, spec);
    for (const auto& existing : set.matrices)
      if (l1_difference(existing, m) <= 1e-9) return;
    set.matrices.push_back(std::move(m));
    set.provenance.push_back(lift_assignment(w, form, spec));
  };

  if (sampling.vertices) {
    const std::size_t fk = factorial_capped(k, sampling.vertex_limit);
    const std::size_t fq = factorial_capped(q, sampling.vertex_limit);
    if (fk * fq <= sampling.vertex_limit) {
      std::vector<std::size_t> rows(k);
      std::iota(rows.begin(), rows.end(), 0);
      do {
        std::vector<std::size_t> cols(q);
        std::iota(cols.begin(), cols.end(), 0);
        do {
          add(northwest_corner(g.weights(), a, rows, cols));
        } while (next_order(cols));
      } while (next_order(rows));
    }
  }
  if (sampling.greedy) {
    for (std::size_t l = 0; l < q; ++l)
      for (std::size_t m = l; m < q; ++m)
        for (bool maximize : {true, false}) add(greedy_extreme(g, a, l, m, maximize));
  }
  if (sampling.random_points) {
    for (std::size_t s = 0; s < count; ++s) {
      Rng rng = Rng::derive(seed, s);
      add(random_transport_point(g.weights(), a, rng));
    }
  }
  return set;
}

double multiway_hausdorff(const MultiwayMatrixSet& su, const MultiwayMatrixSet& sw) {
  if (su.a.size() != sw.a.size()) throw Error(ErrorKind::DimensionMismatch, "sets use different part counts");
  return hausdorff_distance(su.matrices, sw.matrices, [](const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "matrices differ in shape");
    }
    return l1_difference(x, y);
  });
}

}  // namespace graphon
