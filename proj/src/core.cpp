#include "graphon/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphon/coupling.hpp"
#include "graphon/errors.hpp"

namespace graphon {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

std::string pair_idx(std::size_t i, std::size_t j) { return "(" + idx(i) + ", " + idx(j) + ")"; }

std::vector<double> normalized_weights(std::vector<double> weights) {
  if (weights.empty()) throw Error(ErrorKind::WeightsNotNormalized, "no blocks");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorKind::WeightsNotNormalized, "weight " + idx(i) + " is negative or not finite");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw Error(ErrorKind::WeightsNotNormalized, "weights sum to " + std::to_string(total));
  }
  // Sums already at 1 up to rounding are left alone.
  if (std::abs(total - 1.0) > 4e-16 * static_cast<double>(weights.size())) {
    for (double& w : weights) w /= total;
  }
  return weights;
}

void validate_values(const Matrix& values, std::size_t k, double lo) {
  if (values.rows() != k || values.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "value matrix must be " + idx(k) + " x " + idx(k));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = values(i, j);
      if (!(v >= lo && v <= 1.0)) throw Error(ErrorKind::ValueOutOfRange, "value " + pair_idx(i, j) + " out of range");
      if (v != values(j, i)) throw Error(ErrorKind::AsymmetricValues, "values " + pair_idx(i, j) + " not symmetric");
    }
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::vector<double> cumulative(std::span<const double> weights) {
  std::vector<double> b(weights.size() + 1, 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) b[i + 1] = b[i] + weights[i];
  b.back() = 1.0;
  return b;
}

// Block containing x; ties go right, x >= 1 goes to the last positive block.
std::size_t block_at(std::span<const double> weights, const std::vector<double>& bounds, double x) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    if (x < bounds[i + 1]) return i;
  }
  return last;
}

// Weights summing to 1 up to rounding; renormalize so validation passes.
std::vector<double> renormalize(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

StepGraphon::StepGraphon(std::vector<double> weights, Matrix values)
    : weights_(normalized_weights(std::move(weights))), values_(std::move(values)) {
  validate_values(values_, weights_.size(), 0.0);
}

StepGraphon StepGraphon::constant(double c) { return StepGraphon({1.0}, Matrix(1, 1, c)); }

std::vector<double> StepGraphon::boundaries() const { return cumulative(weights_); }

double StepGraphon::operator()(double x, double y) const {
  const auto b = boundaries();
  return values_(block_at(weights_, b, x), block_at(weights_, b, y));
}

SignedStepKernel::SignedStepKernel(std::vector<double> weights, Matrix values)
    : weights_(normalized_weights(std::move(weights))), values_(std::move(values)) {
  validate_values(values_, weights_.size(), -1.0);
}

SignedStepKernel SignedStepKernel::difference(const StepGraphon& u, const StepGraphon& w) {
  if (u.weights() != w.weights()) {
    throw Error(ErrorKind::PartitionMismatch, "difference needs identical block weights");
  }
  const std::size_t k = u.blocks();
  Matrix d(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) d(i, j) = u.value(i, j) - w.value(i, j);
  return SignedStepKernel(u.weights(), std::move(d));
}

PartitionSpec::PartitionSpec(Matrix assignment) : assignment_(std::move(assignment)) {
  if (assignment_.rows() == 0 || assignment_.cols() == 0) {
    throw Error(ErrorKind::PartitionMismatch, "empty assignment");
  }
  for (std::size_t i = 0; i < assignment_.rows(); ++i)
    for (std::size_t l = 0; l < assignment_.cols(); ++l)
      if (!(assignment_(i, l) >= 0.0)) {
        throw Error(ErrorKind::PartitionMismatch, "assignment entry " + pair_idx(i, l) + " is negative");
      }
}

PartitionSpec PartitionSpec::identity(std::span<const double> weights) {
  Matrix m(weights.size(), weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) m(i, i) = weights[i];
  return PartitionSpec(std::move(m));
}

PartitionSpec PartitionSpec::trivial(std::span<const double> weights) {
  Matrix m(weights.size(), 1);
  for (std::size_t i = 0; i < weights.size(); ++i) m(i, 0) = weights[i];
  return PartitionSpec(std::move(m));
}

PartitionSpec PartitionSpec::positional(std::span<const double> weights, std::span<const double> cuts) {
  if (cuts.size() < 2 || cuts.front() != 0.0 || cuts.back() != 1.0) {
    throw Error(ErrorKind::InvalidArgument, "cuts must run from 0 to 1");
  }
  for (std::size_t l = 0; l + 1 < cuts.size(); ++l) {
    if (cuts[l + 1] < cuts[l]) throw Error(ErrorKind::InvalidArgument, "cuts must be nondecreasing");
  }
  const auto b = cumulative(weights);
  Matrix m(weights.size(), cuts.size() - 1);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    double assigned = 0.0;
    std::size_t last = 0;
    for (std::size_t l = 0; l + 1 < cuts.size(); ++l) {
      const double overlap = std::min(b[i + 1], cuts[l + 1]) - std::max(b[i], cuts[l]);
      if (overlap > 0.0) {
        m(i, l) = overlap;
        assigned += overlap;
        last = l;
      }
    }
    // Absorb rounding so row sums reproduce the weights.
    m(i, last) += weights[i] - assigned;
    if (m(i, last) < 0.0) m(i, last) = 0.0;
  }
  return PartitionSpec(std::move(m));
}

PartitionSpec PartitionSpec::dyadic(std::span<const double> weights, int depth) {
  if (depth < 0 || depth > 30) throw Error(ErrorKind::InvalidArgument, "dyadic depth out of range");
  const std::size_t parts = std::size_t{1} << depth;
  std::vector<double> cuts(parts + 1);
  for (std::size_t l = 0; l <= parts; ++l) cuts[l] = static_cast<double>(l) / static_cast<double>(parts);
  return positional(weights, cuts);
}

void PartitionSpec::check_source(std::span<const double> weights) const {
  if (weights.size() != sources()) {
    throw Error(ErrorKind::PartitionMismatch,
                "assignment has " + idx(sources()) + " source rows, graphon has " + idx(weights.size()) + " blocks");
  }
  const auto sums = source_masses();
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (std::abs(sums[i] - weights[i]) > kWeightTolerance) {
      throw Error(ErrorKind::PartitionMismatch, "row " + idx(i) + " does not sum to the block weight");
    }
  }
}

StepFunction1D::StepFunction1D(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2 || breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw Error(ErrorKind::InvalidArgument, "breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i + 1] > breakpoints_[i])) {
      throw Error(ErrorKind::InvalidArgument, "breakpoint " + idx(i + 1) + " not strictly increasing");
    }
  }
  if (values_.size() + 1 != breakpoints_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need one value per interval");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      throw Error(ErrorKind::ValueOutOfRange, "value " + idx(i) + " out of range");
    }
  }
}

StepFunction1D StepFunction1D::constant(double c) { return StepFunction1D({0.0, 1.0}, {c}); }

double StepFunction1D::operator()(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breakpoints_.begin() - 1, 0));
  return values_[std::min(i, values_.size() - 1)];
}

double StepFunction1D::integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) total += values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
  return total;
}

StepGraphon make_step_graphon(std::vector<double> weights, const std::vector<std::vector<double>>& values) {
  return StepGraphon(std::move(weights), Matrix::from_rows(values));
}

double edge_density(const StepGraphon& w) {
  return int_f(w, [](double v) { return v; });
}

StepFunction1D degree_function(const StepGraphon& w) {
  std::vector<double> breakpoints{0.0};
  std::vector<double> values;
  double position = 0.0;
  for (std::size_t i = 0; i < w.blocks(); ++i) {
    if (w.weight(i) <= 0.0) continue;
    double deg = 0.0;
    for (std::size_t j = 0; j < w.blocks(); ++j) deg += w.weight(j) * w.value(i, j);
    position += w.weight(i);
    breakpoints.push_back(position);
    values.push_back(clamp01(deg));
  }
  breakpoints.back() = 1.0;
  return StepFunction1D(std::move(breakpoints), std::move(values));
}

double int_f(const StepGraphon& w, const std::function<double(double)>& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < w.blocks(); ++i) {
    if (w.weight(i) <= 0.0) continue;
    for (std::size_t j = 0; j < w.blocks(); ++j) {
      if (w.weight(j) <= 0.0) continue;
      total += w.weight(i) * w.weight(j) * f(w.value(i, j));
    }
  }
  return total;
}

StepGraphon stepping(const StepGraphon& w, const PartitionSpec& p) {
  p.check_source(w.weights());
  const Matrix& r = p.assignment();
  const std::size_t k = w.blocks();
  const std::size_t q = p.parts();
  const auto b = p.part_masses();
  // T = W r, then value(l, m) = (r^T T)(l, m) / (b_l b_m).
  Matrix t(k, q);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double wij = w.value(i, j);
      if (wij == 0.0) continue;
      for (std::size_t m = 0; m < q; ++m) t(i, m) += wij * r(j, m);
    }
  Matrix values(q, q);
  for (std::size_t l = 0; l < q; ++l) {
    if (b[l] <= 0.0) continue;
    for (std::size_t m = l; m < q; ++m) {
      if (b[m] <= 0.0) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += r(i, l) * t(i, m);
      const double v = clamp01(s / (b[l] * b[m]));
      values(l, m) = v;
      values(m, l) = v;
    }
  }
  return StepGraphon(renormalize(b), std::move(values));
}

std::pair<StepGraphon, StepGraphon> common_refinement(const StepGraphon& u, const StepGraphon& w, const Coupling& c) {
  const Matrix& m = c.matrix();
  if (m.rows() != u.blocks() || m.cols() != w.blocks()) {
    throw Error(ErrorKind::MarginalMismatch, "coupling shape does not match the block counts");
  }
  const auto rows = m.row_sums();
  const auto cols = m.col_sums();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::abs(rows[i] - u.weight(i)) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, "row " + idx(i) + " does not match the first graphon");
    }
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (std::abs(cols[j] - w.weight(j)) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, "column " + idx(j) + " does not match the second graphon");
    }
  const std::size_t n = m.rows() * m.cols();
  std::vector<double> weights(m.data().begin(), m.data().end());
  Matrix uv(n, n), wv(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      uv(p, q) = u.value(p / m.cols(), q / m.cols());
      wv(p, q) = w.value(p % m.cols(), q % m.cols());
    }
  weights = renormalize(std::move(weights));
  return {StepGraphon(weights, std::move(uv)), StepGraphon(weights, std::move(wv))};
}

std::vector<std::size_t> grid_cells(const StepGraphon& w, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::ResolutionIncompatible, "resolution must be positive");
  std::vector<std::size_t> cells;
  cells.reserve(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < w.blocks(); ++i) {
    const double count = std::round(w.weight(i) * dn);
    if (std::abs(w.weight(i) - count / dn) > kWeightTolerance) {
      throw Error(ErrorKind::ResolutionIncompatible, "weight " + idx(i) + " is not a multiple of 1/" + idx(n));
    }
    cells.insert(cells.end(), static_cast<std::size_t>(count), i);
  }
  if (cells.size() != n) throw Error(ErrorKind::ResolutionIncompatible, "cell counts do not add up to " + idx(n));
  return cells;
}

namespace {

StepGraphon from_cell_sources(const StepGraphon& w, const std::vector<std::size_t>& block_of_cell) {
  const std::size_t n = block_of_cell.size();
  Matrix v(n, n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) v(s, t) = w.value(block_of_cell[s], block_of_cell[t]);
  return StepGraphon(std::vector<double>(n, 1.0 / static_cast<double>(n)), std::move(v));
}

}  // namespace

StepGraphon refine_to_grid(const StepGraphon& w, std::size_t n) { return from_cell_sources(w, grid_cells(w, n)); }

StepGraphon grid_version(const StepGraphon& w, std::size_t n, std::span<const std::size_t> perm) {
  const auto cells = grid_cells(w, n);
  if (perm.size() != n) throw Error(ErrorKind::DimensionMismatch, "permutation must have " + idx(n) + " entries");
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> source(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (perm[t] >= n || seen[perm[t]]) throw Error(ErrorKind::InvalidArgument, "not a permutation");
    seen[perm[t]] = true;
    source[t] = cells[perm[t]];
  }
  return from_cell_sources(w, source);
}

StepGraphon interlace_version(const StepGraphon& w, std::size_t n, std::size_t resolution) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "interlacing level must be positive");
  const std::size_t slots = 2 * n;
  if (resolution == 0) resolution = slots;
  if (resolution % slots != 0) {
    throw Error(ErrorKind::ResolutionIncompatible, "resolution must be a multiple of " + idx(slots));
  }
  const auto cells = grid_cells(w, resolution);
  const std::size_t per_slot = resolution / slots;
  std::vector<std::size_t> source(resolution);
  for (std::size_t t = 0; t < resolution; ++t) {
    const std::size_t slot = t / per_slot;
    const std::size_t from = slot % 2 == 0 ? slot / 2 : n + (slot - 1) / 2;
    source[t] = cells[from * per_slot + t % per_slot];
  }
  return from_cell_sources(w, source);
}

StepGraphon reorder_by_ordered_partition(const StepGraphon& w, const PartitionSpec& j) {
  j.check_source(w.weights());
  std::vector<double> weights;
  std::vector<std::size_t> block;
  for (std::size_t l = 0; l < j.parts(); ++l)
    for (std::size_t i = 0; i < j.sources(); ++i)
      if (j.assignment()(i, l) > 0.0) {
        weights.push_back(j.assignment()(i, l));
        block.push_back(i);
      }
  if (weights.empty()) throw Error(ErrorKind::PartitionMismatch, "assignment carries no mass");
  Matrix v(block.size(), block.size());
  for (std::size_t s = 0; s < block.size(); ++s)
    for (std::size_t t = 0; t < block.size(); ++t) v(s, t) = w.value(block[s], block[t]);
  return StepGraphon(renormalize(std::move(weights)), std::move(v));
}

StepGraphon cohen_reconstruct(const StepGraphon& tilde_w, const StepFunction1D& s, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::ResolutionIncompatible, "resolution must be positive");
  const auto& bp = s.breakpoints();
  const auto& sv = s.values();
  const std::size_t r = sv.size();
  std::vector<double> psi_at(r + 1, 0.0);
  for (std::size_t k = 0; k < r; ++k) psi_at[k + 1] = psi_at[k] + sv[k] * (bp[k + 1] - bp[k]);
  const double psi_one = psi_at[r];
  auto phi_at = [&](std::size_t k) { return psi_one + bp[k] - psi_at[k]; };

  const double dn = static_cast<double>(n);
  auto on_grid = [&](double x) { return std::abs(x - std::round(x * dn) / dn) <= 1e-12; };
  for (double x : bp)
    if (!on_grid(x)) throw Error(ErrorKind::ResolutionIncompatible, "breakpoint of s is off the grid");

  const auto bounds = tilde_w.boundaries();
  for (std::size_t b = 1; b + 1 < bounds.size(); ++b) {
    const double beta = bounds[b];
    if (beta <= 0.0 || beta >= 1.0) continue;
    for (std::size_t k = 0; k < r; ++k) {
      const double len = bp[k + 1] - bp[k];
      if (sv[k] > 0.0) {
        const double x = bp[k] + (beta - psi_at[k]) / sv[k];
        if (x > bp[k] && x < bp[k] + len && !on_grid(x)) {
          throw Error(ErrorKind::ResolutionIncompatible, "a preimage under psi is off the grid");
        }
      }
      if (sv[k] < 1.0) {
        const double x = bp[k] + (beta - phi_at(k)) / (1.0 - sv[k]);
        if (x > bp[k] && x < bp[k] + len && !on_grid(x)) {
          throw Error(ErrorKind::ResolutionIncompatible, "a preimage under phi is off the grid");
        }
      }
    }
  }

  std::vector<double> sc(n);
  std::vector<std::size_t> psi_block(n), phi_block(n);
  std::size_t seg = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const double x = (static_cast<double>(c) + 0.5) / dn;
    while (seg + 1 < r && x >= bp[seg + 1]) ++seg;
    sc[c] = sv[seg];
    const double psi = psi_at[seg] + sv[seg] * (x - bp[seg]);
    const double phi = phi_at(seg) + (1.0 - sv[seg]) * (x - bp[seg]);
    psi_block[c] = block_at(tilde_w.weights(), bounds, psi);
    phi_block[c] = block_at(tilde_w.weights(), bounds, phi);
  }

  Matrix v(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = c; d < n; ++d) {
      const double value = tilde_w.value(psi_block[c], psi_block[d]) * sc[c] * sc[d] +
                           tilde_w.value(psi_block[c], phi_block[d]) * sc[c] * (1.0 - sc[d]) +
                           tilde_w.value(phi_block[c], psi_block[d]) * (1.0 - sc[c]) * sc[d] +
                           tilde_w.value(phi_block[c], phi_block[d]) * (1.0 - sc[c]) * (1.0 - sc[d]);
      v(c, d) = clamp01(value);
      v(d, c) = v(c, d);
    }
  return StepGraphon(std::vector<double>(n, 1.0 / dn), std::move(v));
}

std::vector<double> interval_overlaps(std::span<const double> weights, double lo, double hi) {
  std::vector<double> out(weights.size(), 0.0);
  double left = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double right = left + weights[i];
    out[i] = std::max(0.0, std::min(right, hi) - std::max(left, lo));
    left = right;
  }
  return out;
}

double rectangle_integral(const StepGraphon& w, double x0, double x1, double y0, double y1) {
  const auto ox = interval_overlaps(w.weights(), x0, x1);
  const auto oy = interval_overlaps(w.weights(), y0, y1);
  double total = 0.0;
  for (std::size_t i = 0; i < ox.size(); ++i) {
    if (ox[i] <= 0.0) continue;
    for (std::size_t j = 0; j < oy.size(); ++j) total += ox[i] * oy[j] * w.value(i, j);
  }
  return total;
}

}  // namespace graphon
