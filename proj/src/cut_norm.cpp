#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "graphon/metrics.hpp"
#include "graphon/rng.hpp"
#include "kernel_detail.hpp"

namespace graphon {

namespace detail {

namespace {

constexpr std::size_t kNone = kNoBlockIndex;

Matrix scaled(const Kernel& k) {
  const std::size_t n = k.weights.size();
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = k.weights[i] * k.weights[j] * k.y(i, j);
  return b;
}

}  // namespace

Kernel reduce_kernel(std::span<const double> weights, const Matrix& y) {
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) positive.push_back(i);
  Kernel k;
  k.index_of.assign(weights.size(), kNone);
  std::vector<std::size_t> reps;
  for (std::size_t i : positive) {
    std::size_t found = kNone;
    for (std::size_t c = 0; c < reps.size() && found == kNone; ++c) {
      bool same = true;
      for (std::size_t l : positive)
        if (y(i, l) != y(reps[c], l)) {
          same = false;
          break;
        }
      if (same) found = c;
    }
    if (found == kNone) {
      found = reps.size();
      reps.push_back(i);
      k.weights.push_back(0.0);
    }
    k.index_of[i] = found;
    k.weights[found] += weights[i];
  }
  k.y = Matrix(reps.size(), reps.size());
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b) k.y(a, b) = y(reps[a], reps[b]);
  return k;
}

double selection_value(const Kernel& k, const std::vector<int>& s, const std::vector<int>& t) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]) continue;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t[j]) total += k.weights[i] * k.weights[j] * k.y(i, j);
  }
  return total;
}

Selection exact_selection(const Kernel& k) {
  const std::size_t n = k.weights.size();
  const Matrix b = scaled(k);
  std::vector<double> col(n, 0.0);
  double best = 0.0;
  std::uint64_t best_code = 0;
  int best_sign = 1;
  std::uint64_t code = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int bit = std::countr_zero(step);
    code ^= std::uint64_t{1} << bit;
    const bool added = (code >> bit) & 1U;
    const auto row = b.row(static_cast<std::size_t>(bit));
    if (added) {
      for (std::size_t j = 0; j < n; ++j) col[j] += row[j];
    } else {
      for (std::size_t j = 0; j < n; ++j) col[j] -= row[j];
    }
    double pos = 0.0, neg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (col[j] > 0.0) {
        pos += col[j];
      } else {
        neg -= col[j];
      }
    }
    if (neg > best) {
      best = neg;
      best_code = code;
      best_sign = -1;
    }
    if (pos > best) {
      best = pos;
      best_code = code;
      best_sign = 1;
    }
  }
  Selection sel;
  sel.sign = best_sign;
  sel.s.assign(n, 0);
  sel.t.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) sel.s[i] = static_cast<int>((best_code >> i) & 1U);
  for (std::size_t j = 0; j < n; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (sel.s[i]) c += b(i, j);
    sel.t[j] = best_sign * c > 0.0 ? 1 : 0;
  }
  sel.value = std::abs(selection_value(k, sel.s, sel.t));
  return sel;
}

Selection heuristic_selection(const Kernel& k, std::uint64_t seed, int restarts) {
  const std::size_t n = k.weights.size();
  const Matrix b = scaled(k);
  Rng rng(seed);
  Selection best;
  best.s.assign(n, 0);
  best.t.assign(n, 0);
  std::vector<int> s(n), t(n);
  std::vector<double> acc(n);
  for (int r = 0; r < restarts; ++r) {
    const int sign = r % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) s[i] = rng.coin() ? 1 : 0;
    double previous = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 1000; ++iter) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (s[i])
          for (std::size_t j = 0; j < n; ++j) acc[j] += b(i, j);
      for (std::size_t j = 0; j < n; ++j) t[j] = sign * acc[j] > 0.0 ? 1 : 0;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (t[j]) acc[i] += b(i, j);
      double value = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = sign * acc[i] > 0.0 ? 1 : 0;
        if (s[i]) value += sign * acc[i];
      }
      if (value <= previous + 1e-15) break;
      previous = value;
    }
    const double value = std::abs(selection_value(k, s, t));
    if (value > best.value) {
      best.value = value;
      best.s = s;
      best.t = t;
      best.sign = sign;
    }
  }
  return best;
}

}  // namespace detail

namespace {

CutNormResult expand(const SignedStepKernel& y, const detail::Kernel& k, const detail::Selection& sel,
                     CutNormMode mode) {
  CutNormResult result;
  result.mode = mode;
  result.witness_s.assign(y.blocks(), 0);
  result.witness_t.assign(y.blocks(), 0);
  for (std::size_t i = 0; i < y.blocks(); ++i) {
    const std::size_t c = k.index_of[i];
    if (c == detail::kNoBlockIndex) continue;
    result.witness_s[i] = sel.s[c];
    result.witness_t[i] = sel.t[c];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.blocks(); ++i) {
    if (!result.witness_s[i]) continue;
    for (std::size_t j = 0; j < y.blocks(); ++j)
      if (result.witness_t[j]) total += y.weights()[i] * y.weights()[j] * y.values()(i, j);
  }
  result.value = std::abs(total);
  return result;
}

}  // namespace

CutNormResult cut_norm(const SignedStepKernel& y, CutNormMode mode, std::uint64_t seed, int restarts) {
  const detail::Kernel k = detail::reduce_kernel(y.weights(), y.values());
  if (mode == CutNormMode::Exact) {
    if (k.weights.size() > kMaxExactBlocks) {
      throw Error(ErrorKind::TooManyBlocksForExact, std::to_string(k.weights.size()) + " distinct blocks exceed " +
                                                         std::to_string(kMaxExactBlocks));
    }
    return expand(y, k, detail::exact_selection(k), mode);
  }
  if (restarts < 1) throw Error(ErrorKind::InvalidArgument, "restarts must be positive");
  return expand(y, k, detail::heuristic_selection(k, seed, restarts), mode);
}

CutNormResult cut_norm_auto(const SignedStepKernel& y, std::uint64_t seed) {
  const detail::Kernel k = detail::reduce_kernel(y.weights(), y.values());
  if (k.weights.size() <= kMaxExactBlocks) return expand(y, k, detail::exact_selection(k), CutNormMode::Exact);
  return expand(y, k, detail::heuristic_selection(k, seed, 32), CutNormMode::Heuristic);
}

}  // namespace graphon
