#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "graphon/metrics.hpp"
#include "graphon/rng.hpp"
#include "kernel_detail.hpp"

namespace graphon {

namespace {

constexpr std::size_t kSearchExactLimit = 16;
constexpr std::size_t kSweepMaxCells = 8;
constexpr std::size_t kProductLimit = 64;
constexpr int kLocalStarts = 3;

// A graphon with zero blocks dropped and identical rows merged.
struct Side {
  std::vector<double> weights;
  Matrix values;
  std::vector<std::size_t> class_of;
};

Side reduce_side(const StepGraphon& g) {
  detail::Kernel k = detail::reduce_kernel(g.weights(), g.values());
  return {std::move(k.weights), std::move(k.y), std::move(k.index_of)};
}

struct Evaluation {
  double value = 0.0;
  bool exact = true;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  detail::Kernel kernel;
  detail::Selection selection;
};

Evaluation evaluate(const Matrix& uv, const Matrix& wv, const Matrix& c, std::size_t exact_limit,
                    std::uint64_t seed, int restarts) {
  Evaluation e;
  std::vector<double> mass;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (c(i, j) > 0.0) {
        e.pairs.emplace_back(i, j);
        mass.push_back(c(i, j));
      }
  const std::size_t p = e.pairs.size();
  Matrix y(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b)
      y(a, b) = uv(e.pairs[a].first, e.pairs[b].first) - wv(e.pairs[a].second, e.pairs[b].second);
  e.kernel = detail::reduce_kernel(mass, y);
  e.exact = e.kernel.weights.size() <= exact_limit;
  e.selection = e.exact ? detail::exact_selection(e.kernel) : detail::heuristic_selection(e.kernel, seed, restarts);
  e.value = e.selection.value;
  return e;
}

Evaluation search_eval(const Side& u, const Side& w, const Matrix& c, std::uint64_t seed) {
  return evaluate(u.values, w.values, c, kSearchExactLimit, seed, 16);
}

std::vector<double> degrees(const Side& s) {
  std::vector<double> d(s.weights.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) d[i] += s.weights[j] * s.values(i, j);
  return d;
}

std::vector<std::size_t> order_by(const std::vector<double>& key, bool ascending) {
  std::vector<std::size_t> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ascending ? key[a] < key[b] : key[a] > key[b];
  });
  return order;
}

std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

std::optional<std::size_t> common_grid(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t n = 1; n <= kSweepMaxCells; ++n) {
    const double dn = static_cast<double>(n);
    auto fits = [&](const std::vector<double>& ws) {
      return std::all_of(ws.begin(), ws.end(), [&](double x) {
        return std::abs(x - std::round(x * dn) / dn) <= kWeightTolerance;
      });
    };
    if (fits(a) && fits(b)) return n;
  }
  return std::nullopt;
}

std::vector<std::size_t> cells_of(const std::vector<double>& ws, std::size_t n) {
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < ws.size(); ++i)
    cells.insert(cells.end(), static_cast<std::size_t>(std::round(ws[i] * static_cast<double>(n))), i);
  return cells;
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  Matrix coupling;
};

// Exhaustive sweep over cell matchings on a common equal-mass grid.
std::optional<Best> permutation_sweep(const Side& u, const Side& w, double tol) {
  const auto n = common_grid(u.weights, w.weights);
  if (!n) return std::nullopt;
  const auto cu = cells_of(u.weights, *n);
  auto cw = cells_of(w.weights, *n);
  if (cu.size() != *n || cw.size() != *n) return std::nullopt;
  Best best;
  const double cell = 1.0 / static_cast<double>(*n);
  do {
    Matrix c(u.weights.size(), w.weights.size());
    for (std::size_t t = 0; t < *n; ++t) c(cu[t], cw[t]) += cell;
    const Evaluation e = evaluate(u.values, w.values, c, kMaxExactBlocks, 0, 1);
    if (e.value < best.value) {
      best.value = e.value;
      best.coupling = c;
      if (best.value <= tol) break;
    }
  } while (std::next_permutation(cw.begin(), cw.end()));
  return best;
}

// Linearize at the current witness, move toward the best transport vertex.
Best local_search(const Side& u, const Side& w, Matrix start, const OptimizerConfig& config, std::uint64_t seed) {
  Best cur{search_eval(u, w, start, seed).value, std::move(start)};
  const std::size_t ka = u.weights.size();
  const std::size_t kb = w.weights.size();
  for (int iter = 0; iter < config.max_iters && cur.value > config.tol; ++iter) {
    const Evaluation e = search_eval(u, w, cur.coupling, seed);
    const double sigma = e.selection.sign;
    Matrix s(ka, kb, -1.0), t(ka, kb, -1.0);
    for (std::size_t p = 0; p < e.pairs.size(); ++p) {
      const std::size_t r = e.kernel.index_of[p];
      s(e.pairs[p].first, e.pairs[p].second) = e.selection.s[r];
      t(e.pairs[p].first, e.pairs[p].second) = e.selection.t[r];
    }
    // alpha/beta: masses of the witness sets projected on each side.
    std::vector<double> alpha_t(ka, 0.0), beta_t(kb, 0.0), alpha_s(ka, 0.0), beta_s(kb, 0.0);
    for (std::size_t i = 0; i < ka; ++i)
      for (std::size_t j = 0; j < kb; ++j) {
        const double m = cur.coupling(i, j);
        if (m <= 0.0) continue;
        if (t(i, j) > 0.0) {
          alpha_t[i] += m;
          beta_t[j] += m;
        }
        if (s(i, j) > 0.0) {
          alpha_s[i] += m;
          beta_s[j] += m;
        }
      }
    std::vector<double> ua_t(ka, 0.0), ua_s(ka, 0.0), wb_t(kb, 0.0), wb_s(kb, 0.0);
    for (std::size_t i = 0; i < ka; ++i)
      for (std::size_t l = 0; l < ka; ++l) {
        ua_t[i] += u.values(i, l) * alpha_t[l];
        ua_s[i] += u.values(i, l) * alpha_s[l];
      }
    for (std::size_t j = 0; j < kb; ++j)
      for (std::size_t l = 0; l < kb; ++l) {
        wb_t[j] += w.values(j, l) * beta_t[l];
        wb_s[j] += w.values(j, l) * beta_s[l];
      }
    Matrix grad(ka, kb);
    for (std::size_t i = 0; i < ka; ++i)
      for (std::size_t j = 0; j < kb; ++j) {
        const double row = ua_t[i] - wb_t[j];
        const double col = ua_s[i] - wb_s[j];
        const double si = s(i, j) >= 0.0 ? s(i, j) : (sigma * row > 0.0 ? 1.0 : 0.0);
        const double ti = t(i, j) >= 0.0 ? t(i, j) : (sigma * col > 0.0 ? 1.0 : 0.0);
        grad(i, j) = sigma * (si * row + ti * col);
      }
    const Matrix target = min_cost_transport(grad, u.weights, w.weights);
    Best step;
    for (double lambda = 1.0; lambda >= 1.0 / 64.0; lambda /= 2.0) {
      Matrix mix(ka, kb);
      for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < kb; ++j)
          mix(i, j) = (1.0 - lambda) * cur.coupling(i, j) + lambda * target(i, j);
      const double v = search_eval(u, w, mix, seed).value;
      if (v < step.value) {
        step.value = v;
        step.coupling = std::move(mix);
      }
    }
    if (!(step.value < cur.value - config.tol)) break;
    cur = std::move(step);
  }
  return cur;
}

bool precedes(const StepGraphon& a, const StepGraphon& b) {
  if (a.blocks() != b.blocks()) return a.blocks() < b.blocks();
  if (a.weights() != b.weights()) return a.weights() < b.weights();
  const auto da = a.values().data();
  const auto db = b.values().data();
  return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end());
}

Matrix expand_coupling(const StepGraphon& u, const Side& su, const StepGraphon& w, const Side& sw, const Matrix& c) {
  Matrix out(u.blocks(), w.blocks());
  for (std::size_t i = 0; i < u.blocks(); ++i) {
    const std::size_t a = su.class_of[i];
    if (a == detail::kNoBlockIndex) continue;
    for (std::size_t j = 0; j < w.blocks(); ++j) {
      const std::size_t b = sw.class_of[j];
      if (b == detail::kNoBlockIndex) continue;
      out(i, j) = c(a, b) * (u.weight(i) / su.weights[a]) * (w.weight(j) / sw.weights[b]);
    }
  }
  return out;
}

CutDistanceResult ordered_cut_distance(const StepGraphon& u, const StepGraphon& w, const OptimizerConfig& config,
                                       std::uint64_t seed) {
  const Side su = reduce_side(u);
  const Side sw = reduce_side(w);
  CutDistanceResult result;

  std::vector<Best> candidates;
  if (auto sweep = permutation_sweep(su, sw, config.tol)) {
    result.swept = true;
    candidates.push_back(std::move(*sweep));
  }

  const bool done = !candidates.empty() && candidates.front().value <= config.tol;
  if (!done) {
    std::vector<Matrix> starts;
    starts.push_back(northwest_corner(su.weights, sw.weights, order_by(std::vector<double>(su.weights.size()), true),
                                      order_by(std::vector<double>(sw.weights.size()), true)));
    const auto du = degrees(su);
    const auto dw = degrees(sw);
    for (bool asc : {true, false})
      starts.push_back(northwest_corner(su.weights, sw.weights, order_by(du, asc), order_by(dw, asc)));
    if (su.weights.size() * sw.weights.size() <= kProductLimit)
      starts.push_back(Coupling::product(su.weights, sw.weights).matrix());
    for (int r = 0; r < config.restarts; ++r) {
      Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(r));
      const auto ro = shuffled(su.weights.size(), rng);
      const auto co = shuffled(sw.weights.size(), rng);
      starts.push_back(northwest_corner(su.weights, sw.weights, ro, co));
    }
    std::vector<Best> scored;
    for (auto& s : starts) {
      const double v = search_eval(su, sw, s, seed).value;
      scored.push_back({v, std::move(s)});
    }
    for (const auto& c : candidates) scored.push_back(c);
    std::stable_sort(scored.begin(), scored.end(), [](const Best& a, const Best& b) { return a.value < b.value; });
    const std::size_t runs = std::min<std::size_t>(kLocalStarts, scored.size());
    for (std::size_t r = 0; r < runs; ++r) {
      candidates.push_back(scored[r]);
      candidates.push_back(local_search(su, sw, scored[r].coupling, config, seed + r));
    }
  }

  const Best* best = &candidates.front();
  for (const auto& c : candidates)
    if (c.value < best->value) best = &c;

  const Evaluation final_eval = evaluate(su.values, sw.values, best->coupling, kMaxExactBlocks, seed, 32);
  result.value = final_eval.value;
  result.certified = final_eval.exact;
  result.coupling = Coupling(expand_coupling(u, su, w, sw, best->coupling), u.weights(), w.weights());
  return result;
}

void check_couples(const StepGraphon& u, const StepGraphon& w, const Coupling& c) {
  if (c.matrix().rows() != u.blocks() || c.matrix().cols() != w.blocks()) {
    throw Error(ErrorKind::MarginalMismatch, "coupling shape does not match the block counts");
  }
  for (std::size_t i = 0; i < u.blocks(); ++i)
    if (std::abs(c.row_marginal()[i] - u.weight(i)) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, "row marginal " + std::to_string(i) + " differs from the weight");
    }
  for (std::size_t j = 0; j < w.blocks(); ++j)
    if (std::abs(c.col_marginal()[j] - w.weight(j)) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, "column marginal " + std::to_string(j) + " differs from the weight");
    }
}

}  // namespace

double cut_norm_distance(const StepGraphon& u, const StepGraphon& w, const Coupling& c) {
  check_couples(u, w, c);
  return evaluate(u.values(), w.values(), c.matrix(), kMaxExactBlocks, 0, 32).value;
}

double l1_distance(const StepGraphon& u, const StepGraphon& w, const Coupling& c) {
  check_couples(u, w, c);
  const Matrix& m = c.matrix();
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) <= 0.0) continue;
      for (std::size_t k = 0; k < m.rows(); ++k)
        for (std::size_t l = 0; l < m.cols(); ++l)
          if (m(k, l) > 0.0) total += m(i, j) * m(k, l) * std::abs(u.value(i, k) - w.value(j, l));
    }
  return total;
}

CutDistanceResult cut_distance(const StepGraphon& u, const StepGraphon& w, const OptimizerConfig& config,
                               std::uint64_t seed) {
  if (config.restarts < 0 || config.max_iters < 0 || !(config.tol >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "optimizer config must be nonnegative");
  }
  if (precedes(w, u)) {
    CutDistanceResult r = ordered_cut_distance(w, u, config, seed);
    r.coupling = r.coupling.transposed();
    return r;
  }
  return ordered_cut_distance(u, w, config, seed);
}

}  // namespace graphon
