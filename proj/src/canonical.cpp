#include "graphon/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

struct Reduced {
  std::vector<double> weights;
  Matrix values;
  std::vector<std::size_t> block_of;
};

// Drop zero-weight blocks and merge blocks whose rows agree exactly.
Reduced merge_twins(const StepGraphon& w) {
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < w.blocks(); ++i)
    if (w.weight(i) > 0.0) positive.push_back(i);

  Reduced r;
  r.block_of.assign(w.blocks(), kNoBlock);
  std::vector<std::size_t> reps;
  for (std::size_t i : positive) {
    std::size_t found = kNoBlock;
    for (std::size_t c = 0; c < reps.size() && found == kNoBlock; ++c) {
      bool same = true;
      for (std::size_t l : positive) {
        if (w.value(i, l) != w.value(reps[c], l)) {
          same = false;
          break;
        }
      }
      if (same) found = c;
    }
    if (found == kNoBlock) {
      found = reps.size();
      reps.push_back(i);
      r.weights.push_back(0.0);
    }
    r.block_of[i] = found;
    r.weights[found] += w.weight(i);
  }
  r.values = Matrix(reps.size(), reps.size());
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b) r.values(a, b) = w.value(reps[a], reps[b]);
  return r;
}

using Cells = std::vector<std::vector<std::size_t>>;

// Equitable refinement of an ordered partition. Cells are split by the
// sorted (cell, value) profile of each member; the order of the new cells
// depends only on the profiles.
Cells refine(const Reduced& r, Cells cells) {
  const std::size_t k = r.weights.size();
  for (;;) {
    std::vector<std::size_t> cell_of(k);
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (std::size_t i : cells[c]) cell_of[i] = c;
    Cells next;
    for (const auto& cell : cells) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      using Profile = std::vector<std::pair<std::size_t, double>>;
      std::map<Profile, std::vector<std::size_t>> groups;
      for (std::size_t i : cell) {
        Profile p;
        p.reserve(k);
        for (std::size_t l = 0; l < k; ++l) p.emplace_back(cell_of[l], r.values(i, l));
        std::sort(p.begin(), p.end());
        groups[p].push_back(i);
      }
      for (auto& [profile, members] : groups) next.push_back(std::move(members));
    }
    if (next.size() == cells.size()) return next;
    cells = std::move(next);
  }
}

struct Candidate {
  std::vector<double> weights;
  std::vector<double> values;
  std::vector<std::size_t> order;
};

Candidate make_candidate(const Reduced& r, const Cells& cells) {
  Candidate c;
  for (const auto& cell : cells) c.order.push_back(cell.front());
  for (std::size_t a : c.order) c.weights.push_back(r.weights[a]);
  for (std::size_t a : c.order)
    for (std::size_t b : c.order) c.values.push_back(r.values(a, b));
  return c;
}

bool less(const Candidate& a, const Candidate& b) {
  return std::tie(a.weights, a.values) < std::tie(b.weights, b.values);
}

class Search {
 public:
  explicit Search(const Reduced& r) : r_(r) {}

  void run(const Cells& cells) {
    if (leaves_ >= kLeafLimit && best_) return;
    Cells stable = refine(r_, cells);
    std::size_t split = stable.size();
    for (std::size_t c = 0; c < stable.size(); ++c)
      if (stable[c].size() > 1) {
        split = c;
        break;
      }
    if (split == stable.size()) {
      ++leaves_;
      Candidate cand = make_candidate(r_, stable);
      if (!best_ || less(cand, *best_)) best_ = std::move(cand);
      return;
    }
    for (std::size_t member : stable[split]) {
      Cells next;
      next.reserve(stable.size() + 1);
      for (std::size_t c = 0; c < split; ++c) next.push_back(stable[c]);
      next.push_back({member});
      std::vector<std::size_t> rest;
      for (std::size_t x : stable[split])
        if (x != member) rest.push_back(x);
      next.push_back(std::move(rest));
      for (std::size_t c = split + 1; c < stable.size(); ++c) next.push_back(stable[c]);
      run(next);
      if (leaves_ >= kLeafLimit) return;
    }
  }

  const Candidate& best() const { return *best_; }

 private:
  static constexpr std::size_t kLeafLimit = 4096;
  const Reduced& r_;
  std::optional<Candidate> best_;
  std::size_t leaves_ = 0;
};

}  // namespace

CanonicalForm canonical_form(const StepGraphon& w) {
  const Reduced r = merge_twins(w);
  const std::size_t k = r.weights.size();

  // Initial cells: equal weights, ordered by weight.
  std::map<double, std::vector<std::size_t>> by_weight;
  for (std::size_t i = 0; i < k; ++i) by_weight[r.weights[i]].push_back(i);
  Cells cells;
  for (auto& [weight, members] : by_weight) cells.push_back(std::move(members));

  Search search(r);
  search.run(cells);
  const Candidate& best = search.best();

  std::vector<std::size_t> position(k);
  for (std::size_t p = 0; p < k; ++p) position[best.order[p]] = p;
  Matrix values(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) values(a, b) = best.values[a * k + b];

  CanonicalForm form{StepGraphon(best.weights, std::move(values)), {}};
  form.block_of.resize(w.blocks(), kNoBlock);
  for (std::size_t i = 0; i < w.blocks(); ++i)
    if (r.block_of[i] != kNoBlock) form.block_of[i] = position[r.block_of[i]];
  return form;
}

PartitionSpec lift_assignment(const StepGraphon& w, const CanonicalForm& form, const PartitionSpec& canonical) {
  canonical.check_source(form.graphon.weights());
  const std::size_t q = canonical.parts();
  Matrix lifted(w.blocks(), q);
  for (std::size_t i = 0; i < w.blocks(); ++i) {
    const std::size_t c = form.block_of[i];
    if (c == kNoBlock) continue;
    const double share = w.weight(i) / form.graphon.weight(c);
    for (std::size_t l = 0; l < q; ++l) lifted(i, l) = canonical.assignment()(c, l) * share;
  }
  return PartitionSpec(std::move(lifted));
}

}  // namespace graphon
