#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "graphon/core.hpp"

namespace graphon {

inline constexpr std::size_t kNoBlock = std::numeric_limits<std::size_t>::max();

struct CanonicalForm {
  /// Twin-free graphon with positive weights, blocks in canonical order.
  StepGraphon graphon;
  /// Canonical block of each input block (kNoBlock for zero weight).
  std::vector<std::size_t> block_of;
};

/// Merges blocks with identical rows and orders the result by colour
/// refinement with an exhaustive tie search. Two grid versions of one
/// graphon get the same canonical graphon.
CanonicalForm canonical_form(const StepGraphon& w);

/// Lifts an assignment of the canonical blocks back onto the input blocks,
/// splitting merged rows in proportion to the input weights.
PartitionSpec lift_assignment(const StepGraphon& w, const CanonicalForm& form, const PartitionSpec& canonical);

}  // namespace graphon
