#include <cmath>

#include "graphon/metrics.hpp"

namespace graphon {

std::size_t dyadic_count(int depth) {
  if (depth < 0 || depth > 20) throw Error(ErrorKind::InvalidArgument, "depth must lie in [0, 20]");
  return (std::size_t{1} << (depth + 1)) - 1;
}

namespace {

// Overlap of each breadth-first dyadic interval with each block.
Matrix dyadic_overlaps(std::span<const double> weights, int depth) {
  const std::size_t m = dyadic_count(depth);
  Matrix o(m, weights.size());
  std::size_t index = 0;
  for (int level = 0; level <= depth; ++level) {
    const std::size_t count = std::size_t{1} << level;
    const double len = std::ldexp(1.0, -level);
    for (std::size_t j = 0; j < count; ++j, ++index) {
      const auto row = interval_overlaps(weights, static_cast<double>(j) * len, static_cast<double>(j + 1) * len);
      for (std::size_t b = 0; b < row.size(); ++b) o(index, b) = row[b];
    }
  }
  return o;
}

}  // namespace

std::vector<double> weak_star_signature(const StepGraphon& w, int depth) {
  const Matrix o = dyadic_overlaps(w.weights(), depth);
  const std::size_t m = o.rows();
  const std::size_t k = w.blocks();
  // ov(n, i) = sum_j W(i, j) o(n, j)
  Matrix ov(m, k);
  for (std::size_t n = 0; n < m; ++n)
    for (std::size_t i = 0; i < k; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += w.value(i, j) * o(n, j);
      ov(n, i) = s;
    }
  std::vector<double> sig(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += o(a, i) * ov(b, i);
      sig[a * m + b] = s;
    }
  return sig;
}

double signature_distance(std::span<const double> x, std::span<const double> y, int depth) {
  const std::size_t m = dyadic_count(depth);
  if (x.size() != m * m || y.size() != m * m) {
    throw Error(ErrorKind::DimensionMismatch, "signature length does not match the depth");
  }
  double total = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double d = std::abs(x[a * m + b] - y[a * m + b]);
      if (d != 0.0) total += std::ldexp(d, -static_cast<int>(a + b + 2));
    }
  return total;
}

double weak_star_distance(const StepGraphon& u, const StepGraphon& w, int depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be at least 1");
  return signature_distance(weak_star_signature(u, depth), weak_star_signature(w, depth), depth);
}

}  // namespace graphon
