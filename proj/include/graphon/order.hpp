#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphon/core.hpp"

namespace graphon {

enum class VerdictStatus { Refuted, Consistent };

struct ConditionResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct OrderVerdict {
  VerdictStatus status = VerdictStatus::Consistent;
  std::vector<ConditionResult> conditions;

  bool consistent() const noexcept { return status == VerdictStatus::Consistent; }
  /// True if the named condition ran and failed.
  bool failed(const std::string& name) const;
};

inline constexpr const char* kDensityCondition = "density";
inline constexpr const char* kRangeCondition = "range-frequency flatness";
inline constexpr const char* kDegreeCondition = "degree-frequency flatness";

/// Necessary conditions for u to precede w. Never confirms the relation.
OrderVerdict preceq_necessary(const StepGraphon& u, const StepGraphon& w);

enum class Extremality { Minimal, Maximal, Neither, Both };

std::string_view to_string(Extremality e);

Extremality classify_extremal(const StepGraphon& w, double tol = 1e-12);

/// Doubled block structure (copy-major, weights a_i / 2) with +eps on the
/// diagonal quadrants and -eps off them wherever eps <= W <= 1 - eps.
StepGraphon strictify(const StepGraphon& w, double eps);

struct EnvelopeSample {
  std::size_t resolution = 0;
  int depth = 0;
  std::vector<std::vector<double>> signatures;

  bool operator==(const EnvelopeSample&) const = default;
};

/// Signatures of `count` random grid versions, all interlacings with
/// 2n | resolution and the dyadic steppings of depth 0..depth, all taken
/// from the canonical form of w.
EnvelopeSample sample_envelope(const StepGraphon& w, std::size_t resolution, std::size_t count, int depth,
                               std::uint64_t seed);

/// Hausdorff distance between the two sampled signature clouds.
double chi_estimate(const StepGraphon& u, const StepGraphon& w, std::size_t resolution, std::size_t count, int depth,
                    std::uint64_t seed);

}  // namespace graphon
