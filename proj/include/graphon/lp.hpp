#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace graphon::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class T>
struct Result {
  Status status = Status::Infeasible;
  std::vector<T> x;
  T objective{};
  /// Phase-one optimum: total artificial mass left over.
  T infeasibility{};
};

template <class T>
struct Tolerances {
  T pivot{};        // entries with |a| <= pivot are treated as zero
  T reduced_cost{};  // entering threshold
  T feasibility{};   // phase-one optimum above this means infeasible
};

namespace detail {

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

/// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's
/// rule for good after a run of degenerate pivots.
template <class T>
class Tableau {
 public:
  Tableau(const std::vector<std::vector<T>>& a, const std::vector<T>& b, std::size_t n, const Tolerances<T>& tol)
      : m_(b.size()),
        n_(n),
        width_(n + b.size() + 1),
        tol_(tol),
        cells_(m_ * width_),
        objective_(width_),
        basis_(m_),
        active_(m_, true) {
    for (std::size_t r = 0; r < m_; ++r) {
      const bool flip = b[r] < T(0);
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = flip ? T(-a[r][j]) : a[r][j];
      at(r, n_ + r) = T(1);
      at(r, width_ - 1) = flip ? T(-b[r]) : b[r];
      basis_[r] = n_ + r;
    }
  }

  /// Phase one; returns the leftover artificial mass.
  T phase_one(std::size_t max_pivots, bool& hit_limit) {
    std::vector<T> cost(width_ - 1, T(0));
    for (std::size_t r = 0; r < m_; ++r) cost[n_ + r] = T(1);
    hit_limit = !optimize(cost, width_ - 1, max_pivots);
    T total(0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] >= n_) total += at(r, width_ - 1);
    return total;
  }

  /// Pivot zero-level artificials out of the basis; rows with no usable
  /// entry are redundant and frozen.
  void expel_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      std::size_t best = n_;
      T best_mag(0);
      for (std::size_t j = 0; j < n_; ++j) {
        const T mag = abs_value(at(r, j));
        if (mag > tol_.pivot && mag > best_mag) {
          best = j;
          best_mag = mag;
        }
      }
      if (best < n_) {
        pivot(r, best);
      } else {
        active_[r] = false;
      }
    }
  }

  /// Phase two over the structural columns only. Returns false on the pivot
  /// limit; sets `unbounded` if a ray was found.
  bool phase_two(const std::vector<T>& c, std::size_t max_pivots, bool& unbounded) {
    std::vector<T> cost(width_ - 1, T(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];
    return optimize(cost, n_, max_pivots, &unbounded);
  }

  std::vector<T> solution() const {
    std::vector<T> x(n_, T(0));
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = at(r, width_ - 1);
    return x;
  }

 private:
  static constexpr std::size_t kDegenerateRun = 50;

  T& at(std::size_t r, std::size_t j) { return cells_[r * width_ + j]; }
  const T& at(std::size_t r, std::size_t j) const { return cells_[r * width_ + j]; }

  void pivot(std::size_t row, std::size_t col) {
    const T p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j)
      if (at(row, j) != T(0)) at(row, j) /= p;
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < width_; ++j)
      if (at(row, j) != T(0)) nonzero.push_back(j);
    auto eliminate = [&](T* line) {
      const T f = line[col];
      if (f == T(0)) return;
      for (std::size_t j : nonzero) line[j] -= f * at(row, j);
      line[col] = T(0);
    };
    for (std::size_t r = 0; r < m_; ++r)
      if (r != row) eliminate(&at(r, 0));
    eliminate(objective_.data());
    for (std::size_t r = 0; r < m_; ++r)
      if (at(r, width_ - 1) < T(0)) at(r, width_ - 1) = T(0);
    basis_[row] = col;
  }

  void price(const std::vector<T>& cost) {
    for (std::size_t j = 0; j + 1 < width_; ++j) objective_[j] = cost[j];
    objective_[width_ - 1] = T(0);
    for (std::size_t r = 0; r < m_; ++r) {
      const T cb = cost[basis_[r]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (at(r, j) != T(0)) objective_[j] -= cb * at(r, j);
    }
  }

  // Columns [0, candidates) may enter. Returns false on the pivot limit.
  bool optimize(const std::vector<T>& cost, std::size_t candidates, std::size_t max_pivots,
                bool* unbounded = nullptr) {
    price(cost);
    std::size_t degenerate = 0;
    bool bland = false;
    for (std::size_t iter = 0; iter < max_pivots; ++iter) {
      bland = bland || degenerate >= kDegenerateRun;
      std::size_t entering = candidates;
      T most(-tol_.reduced_cost);
      for (std::size_t j = 0; j < candidates; ++j) {
        if (objective_[j] < most) {
          entering = j;
          if (bland) break;
          most = objective_[j];
        }
      }
      if (entering == candidates) return true;

      // Harris ratio test: among rows within the relaxed bound, take the
      // largest pivot, or the lowest basis index under Bland's rule.
      T bound{};
      bool bounded = false;
      for (std::size_t r = 0; r < m_; ++r) {
        if (!active_[r]) continue;
        const T a = at(r, entering);
        if (a <= tol_.pivot) continue;
        const T relaxed = T(at(r, width_ - 1) + tol_.pivot) / a;
        if (!bounded || relaxed < bound) bound = relaxed;
        bounded = true;
      }
      std::size_t leaving = m_;
      T best_ratio{};
      for (std::size_t r = 0; bounded && r < m_; ++r) {
        if (!active_[r]) continue;
        const T a = at(r, entering);
        if (a <= tol_.pivot) continue;
        const T rhs = at(r, width_ - 1);
        const T ratio = rhs > T(0) ? T(rhs / a) : T(0);
        if (ratio > bound) continue;
        if (leaving == m_ || (bland ? basis_[r] < basis_[leaving] : a > at(leaving, entering))) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving == m_) {
        if (unbounded) *unbounded = true;
        return true;
      }
      degenerate = best_ratio <= tol_.pivot ? degenerate + 1 : 0;
      pivot(leaving, entering);
    }
    return false;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  Tolerances<T> tol_;
  std::vector<T> cells_;
  std::vector<T> objective_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

}  // namespace detail

/// min c.x subject to A x = b, x >= 0.
template <class T>
Result<T> solve(const std::vector<std::vector<T>>& a, const std::vector<T>& b, const std::vector<T>& c,
                const Tolerances<T>& tol, std::size_t max_pivots = 200000) {
  Result<T> result;
  detail::Tableau<T> tableau(a, b, c.size(), tol);
  bool hit_limit = false;
  result.infeasibility = tableau.phase_one(max_pivots, hit_limit);
  if (hit_limit) {
    result.status = Status::IterationLimit;
    return result;
  }
  if (result.infeasibility > tol.feasibility) {
    result.status = Status::Infeasible;
    return result;
  }
  tableau.expel_artificials();
  bool unbounded = false;
  if (!tableau.phase_two(c, max_pivots, unbounded)) {
    result.status = Status::IterationLimit;
    return result;
  }
  if (unbounded) {
    result.status = Status::Unbounded;
    return result;
  }
  result.x = tableau.solution();
  result.objective = T(0);
  for (std::size_t j = 0; j < c.size(); ++j) result.objective += c[j] * result.x[j];
  result.status = Status::Optimal;
  return result;
}

}  // namespace graphon::lp
