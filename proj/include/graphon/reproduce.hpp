#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphon {

struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string note;
};

struct ScenarioReport {
  std::string which;
  std::vector<Check> checks;
  std::vector<std::string> lines;

  bool passed() const;
};

/// which in {chessboard, counterexample, flatness, chains, multiway}.
ScenarioReport reproduce(const std::string& which, std::optional<double> eps, std::uint64_t seed);

}  // namespace graphon
