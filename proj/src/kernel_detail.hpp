#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphon/matrix.hpp"

namespace graphon::detail {

inline constexpr std::size_t kNoBlockIndex = static_cast<std::size_t>(-1);

/// Positive-weight, twin-free form of a signed kernel.
struct Kernel {
  std::vector<double> weights;
  Matrix y;
  /// Reduced index of each input block (npos for zero weight).
  std::vector<std::size_t> index_of;
};

Kernel reduce_kernel(std::span<const double> weights, const Matrix& y);

struct Selection {
  double value = 0.0;
  std::vector<int> s;
  std::vector<int> t;
  /// +1 if s^T B t is the positive side, -1 otherwise.
  int sign = 1;
};

/// Exact maximum of |s^T B t| over 0/1 vectors, B(i,j) = a_i a_j y(i,j).
Selection exact_selection(const Kernel& k);

/// Best of seeded alternating maximizations.
Selection heuristic_selection(const Kernel& k, std::uint64_t seed, int restarts);

double selection_value(const Kernel& k, const std::vector<int>& s, const std::vector<int>& t);

}  // namespace graphon::detail
