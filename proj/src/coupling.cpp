#include "graphon/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "graphon/errors.hpp"
#include "graphon/rng.hpp"

namespace graphon {

namespace {

void check_marginal(std::span<const double> expected, const std::vector<double>& actual, const char* side) {
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (!(expected[i] >= 0.0)) {
      throw Error(ErrorKind::MarginalMismatch, std::string(side) + " marginal " + std::to_string(i) + " is negative");
    }
    if (std::abs(actual[i] - expected[i]) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, std::string(side) + " sum " + std::to_string(i) + " is " +
                                                   std::to_string(actual[i]) + ", expected " +
                                                   std::to_string(expected[i]));
    }
  }
}

std::vector<std::size_t> iota_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

Coupling::Coupling(Matrix matrix, std::vector<double> row_marginal, std::vector<double> col_marginal)
    : matrix_(std::move(matrix)), row_marginal_(std::move(row_marginal)), col_marginal_(std::move(col_marginal)) {
  if (matrix_.rows() != row_marginal_.size() || matrix_.cols() != col_marginal_.size()) {
    throw Error(ErrorKind::MarginalMismatch, "coupling shape does not match its marginals");
  }
  for (std::size_t i = 0; i < matrix_.rows(); ++i)
    for (std::size_t j = 0; j < matrix_.cols(); ++j)
      if (!(matrix_(i, j) >= 0.0)) {
        throw Error(ErrorKind::MarginalMismatch,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is negative");
      }
  check_marginal(row_marginal_, matrix_.row_sums(), "row");
  check_marginal(col_marginal_, matrix_.col_sums(), "column");
}

Coupling Coupling::from_matrix(Matrix matrix) {
  auto rows = matrix.row_sums();
  auto cols = matrix.col_sums();
  return Coupling(std::move(matrix), std::move(rows), std::move(cols));
}

Coupling Coupling::product(std::span<const double> rows, std::span<const double> cols) {
  Matrix m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = rows[i] * cols[j];
  return Coupling(std::move(m), {rows.begin(), rows.end()}, {cols.begin(), cols.end()});
}

Coupling Coupling::northwest_corner(std::span<const double> rows, std::span<const double> cols) {
  const auto ro = iota_order(rows.size());
  const auto co = iota_order(cols.size());
  return Coupling(graphon::northwest_corner(rows, cols, ro, co), {rows.begin(), rows.end()},
                  {cols.begin(), cols.end()});
}

Coupling Coupling::diagonal(std::span<const double> masses) {
  Matrix m(masses.size(), masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) m(i, i) = masses[i];
  return Coupling(std::move(m), {masses.begin(), masses.end()}, {masses.begin(), masses.end()});
}

Coupling Coupling::transposed() const { return Coupling(matrix_.transposed(), col_marginal_, row_marginal_); }

Matrix northwest_corner(std::span<const double> rows, std::span<const double> cols,
                        std::span<const std::size_t> row_order, std::span<const std::size_t> col_order) {
  Matrix m(rows.size(), cols.size());
  if (rows.empty() || cols.empty()) return m;
  std::vector<double> r(rows.begin(), rows.end());
  std::vector<double> c(cols.begin(), cols.end());
  std::size_t a = 0, b = 0;
  while (a < row_order.size() && b < col_order.size()) {
    const std::size_t i = row_order[a];
    const std::size_t j = col_order[b];
    const double x = std::min(r[i], c[j]);
    m(i, j) += x;
    r[i] -= x;
    c[j] -= x;
    if (a + 1 == row_order.size() && b + 1 == col_order.size()) {
      m(i, j) += std::max(0.0, std::min(r[i], c[j]));
      break;
    }
    if ((r[i] <= c[j] && a + 1 < row_order.size()) || b + 1 == col_order.size()) {
      ++a;
    } else {
      ++b;
    }
  }
  return m;
}

ScalingResult scale_to_marginals(Matrix start, std::span<const double> rows, std::span<const double> cols,
                                 double tol, int max_iters) {
  if (start.rows() != rows.size() || start.cols() != cols.size()) {
    throw Error(ErrorKind::DimensionMismatch, "start matrix shape does not match the marginals");
  }
  ScalingResult result{std::move(start), 0.0, 0};
  Matrix& m = result.matrix;
  auto residual = [&] {
    double worst = 0.0;
    const auto rs = m.row_sums();
    const auto cs = m.col_sums();
    for (std::size_t i = 0; i < rows.size(); ++i) worst = std::max(worst, std::abs(rs[i] - rows[i]));
    for (std::size_t j = 0; j < cols.size(); ++j) worst = std::max(worst, std::abs(cs[j] - cols[j]));
    return worst;
  };
  for (int iter = 1; iter <= max_iters; ++iter) {
    const auto rs = m.row_sums();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double f = rs[i] > 0.0 ? rows[i] / rs[i] : 0.0;
      for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) *= f;
    }
    const auto cs = m.col_sums();
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double f = cs[j] > 0.0 ? cols[j] / cs[j] : 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) m(i, j) *= f;
    }
    result.iterations = iter;
    result.residual = residual();
    if (result.residual < tol) return result;
  }
  throw Error(ErrorKind::ScalingDiverged, "marginal scaling stopped at residual " + std::to_string(result.residual));
}

Matrix random_transport_point(std::span<const double> rows, std::span<const double> cols, Rng& rng) {
  // Positive start: a few random vertices mixed with the product coupling.
  auto shuffled = [&](std::size_t n) {
    auto order = iota_order(n);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    return order;
  };
  const std::size_t count = 1 + rng.below(3);
  const double product = rng.uniform(0.05, 1.0);
  Matrix start(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) start(i, j) = product * rows[i] * cols[j];
  std::vector<double> mix(count);
  double total = 0.0;
  for (auto& t : mix) total += (t = -std::log1p(-rng.uniform()) + 1e-12);
  for (double t : mix) {
    const Matrix v = graphon::northwest_corner(rows, cols, shuffled(rows.size()), shuffled(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) start(i, j) += (1.0 - product) * t / total * v(i, j);
  }
  return scale_to_marginals(std::move(start), rows, cols).matrix;
}

Matrix min_cost_transport(const Matrix& cost, std::span<const double> rows, std::span<const double> cols) {
  const std::size_t m = rows.size();
  const std::size_t n = cols.size();
  if (cost.rows() != m || cost.cols() != n) throw Error(ErrorKind::DimensionMismatch, "cost shape mismatch");
  if (m == 0 || n == 0) return Matrix(m, n);

  // Transportation simplex on a spanning-tree basis of m + n - 1 cells.
  Matrix x = graphon::northwest_corner(rows, cols, iota_order(m), iota_order(n));
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  {
    std::size_t i = 0, j = 0;
    std::vector<double> r(rows.begin(), rows.end()), c(cols.begin(), cols.end());
    for (;;) {
      basis.emplace_back(i, j);
      const double q = std::min(r[i], c[j]);
      r[i] -= q;
      c[j] -= q;
      if (i + 1 == m && j + 1 == n) break;
      if ((r[i] <= c[j] && i + 1 < m) || j + 1 == n) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  const std::size_t nodes = m + n;
  std::vector<double> u(m), v(n);
  std::vector<std::vector<std::size_t>> adj(nodes);
  std::vector<std::size_t> parent_edge(nodes), parent(nodes), depth(nodes);
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  const std::size_t max_iters = 50 * nodes * nodes + 1000;

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    for (auto& a : adj) a.clear();
    for (std::size_t e = 0; e < basis.size(); ++e) {
      adj[basis[e].first].push_back(e);
      adj[m + basis[e].second].push_back(e);
    }
    // Potentials by a traversal rooted at row 0.
    std::fill(parent.begin(), parent.end(), none);
    std::vector<std::size_t> stack{0};
    parent[0] = 0;
    depth[0] = 0;
    u[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t e : adj[node]) {
        const auto [bi, bj] = basis[e];
        const std::size_t other = node < m ? m + bj : bi;
        if (parent[other] != none) continue;
        parent[other] = node;
        parent_edge[other] = e;
        depth[other] = depth[node] + 1;
        if (other >= m) {
          v[bj] = cost(bi, bj) - u[bi];
        } else {
          u[bi] = cost(bi, bj) - v[bj];
        }
        stack.push_back(other);
      }
    }

    double best = -1e-12;
    std::size_t ei = m, ej = n;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double d = cost(i, j) - u[i] - v[j];
        if (d < best) {
          best = d;
          ei = i;
          ej = j;
        }
      }
    if (ei == m) return x;

    // Tree path between row ei and column ej.
    std::vector<std::size_t> from_row, from_col;
    std::size_t a = ei, b = m + ej;
    while (depth[a] > depth[b]) {
      from_row.push_back(parent_edge[a]);
      a = parent[a];
    }
    while (depth[b] > depth[a]) {
      from_col.push_back(parent_edge[b]);
      b = parent[b];
    }
    while (a != b) {
      from_row.push_back(parent_edge[a]);
      a = parent[a];
      from_col.push_back(parent_edge[b]);
      b = parent[b];
    }
    std::vector<std::size_t> path = from_row;
    path.insert(path.end(), from_col.rbegin(), from_col.rend());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = none;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto [bi, bj] = basis[path[k]];
      if (x(bi, bj) < theta) {
        theta = x(bi, bj);
        leaving = k;
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto [bi, bj] = basis[path[k]];
      x(bi, bj) += k % 2 == 0 ? -theta : theta;
      if (x(bi, bj) < 0.0) x(bi, bj) = 0.0;
    }
    x(ei, ej) += theta;
    const std::size_t out = path[leaving];
    x(basis[out].first, basis[out].second) = 0.0;
    basis[out] = {ei, ej};
  }
  throw Error(ErrorKind::SolverFailure, "transport simplex did not converge");
}

}  // namespace graphon
