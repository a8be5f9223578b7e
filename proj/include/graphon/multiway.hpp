#pragma once

#include <cstdint>
#include <vector>

#include "graphon/core.hpp"

namespace graphon {

struct MultiwayMatrixSet {
  std::vector<double> a;
  std::vector<Matrix> matrices;
  /// The assignment of the input graphon's blocks behind each matrix.
  std::vector<PartitionSpec> provenance;
};

/// M(l, m) = sum over i, j of R(i, l) R(j, m) W(i, j).
Matrix multiway_matrix(const StepGraphon& w, const PartitionSpec& r);

struct MultiwaySampling {
  bool random_points = true;
  bool vertices = true;
  bool greedy = true;
  /// Vertex enumeration runs only when q! k! stays below this.
  std::size_t vertex_limit = 10000;
};

MultiwayMatrixSet sample_multiway_set(const StepGraphon& w, const std::vector<double>& a, std::size_t count,
                                      std::uint64_t seed, const MultiwaySampling& sampling = {});

double multiway_hausdorff(const MultiwayMatrixSet& su, const MultiwayMatrixSet& sw);

}  // namespace graphon
