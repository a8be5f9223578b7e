#include <doctest.h>

#include <cmath>

#include "graphon/coupling.hpp"
#include "graphon/errors.hpp"
#include "graphon/measures.hpp"
#include "graphon/metrics.hpp"
#include "graphon/named.hpp"
#include "support.hpp"

using namespace graphon;
using graphon::test::random_graphon;
using graphon::test::random_grid;
using graphon::test::random_partition;
using graphon::test::random_permutation;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

const std::function<double(double)> kSquare = [](double x) { return x * x; };
const std::function<double(double)> kAbsHalf = [](double x) { return std::abs(x - 0.5); };
const std::function<double(double)> kExp = [](double x) { return std::exp(x); };

}  // namespace

TEST_CASE("construction validates weights and values") {
  CHECK(kind_of([] { StepGraphon({0.5, 0.6}, Matrix(2, 2)); }) == ErrorKind::WeightsNotNormalized);
  CHECK(kind_of([] { StepGraphon({-0.5, 1.5}, Matrix(2, 2)); }) == ErrorKind::WeightsNotNormalized);
  CHECK(kind_of([] { make_step_graphon({0.5, 0.5}, {{0.0, 0.2}, {0.3, 0.0}}); }) == ErrorKind::AsymmetricValues);
  CHECK(kind_of([] { make_step_graphon({1.0}, {{1.5}}); }) == ErrorKind::ValueOutOfRange);
  CHECK(kind_of([] { StepGraphon({0.5, 0.5}, Matrix(3, 3)); }) == ErrorKind::DimensionMismatch);
  const StepGraphon w({0.25, 0.0, 0.75}, Matrix(3, 3, 0.5));
  CHECK(w.blocks() == 3);
}

TEST_CASE("pointwise evaluation puts boundaries on the right block") {
  const StepGraphon bip = bipartite_graphon();
  CHECK(bip(0.25, 0.75) == 1.0);
  CHECK(bip(0.5, 0.75) == 0.0);
  CHECK(bip(0.5, 0.0) == 1.0);
  CHECK(bip(1.0, 1.0) == 0.0);
}

TEST_CASE("edge density matches closed forms and Monte Carlo") {
  CHECK(edge_density(StepGraphon::constant(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(edge_density(bipartite_graphon()) == doctest::Approx(0.5));
  CHECK(edge_density(u1_graphon(0.125)) == doctest::Approx(0.71875).epsilon(1e-14));
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(6));
    const double estimate = graphon::test::monte_carlo_density(w, rng, 200000);
    // The standard error is at most 1/(2 sqrt(n)) ~ 1.1e-3.
    CHECK(std::abs(estimate - edge_density(w)) < 6e-3);
  }
}

TEST_CASE("degree function of small graphons") {
  const StepGraphon w = make_step_graphon({0.5, 0.5}, {{1.0, 0.0}, {0.0, 0.0}});
  const StepFunction1D d = degree_function(w);
  CHECK(d(0.25) == doctest::Approx(0.5));
  CHECK(d(0.75) == doctest::Approx(0.0));
  CHECK(d.integral() == doctest::Approx(edge_density(w)));
}

TEST_CASE("stepping: trivial partition, identity and idempotence") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(7));
    const StepGraphon flat = stepping(w, PartitionSpec::trivial(w.weights()));
    REQUIRE(flat.blocks() == 1);
    CHECK(flat.value(0, 0) == doctest::Approx(edge_density(w)).epsilon(1e-12));

    const StepGraphon same = stepping(w, PartitionSpec::identity(w.weights()));
    CHECK(l1_difference(same.values(), w.values()) < 1e-12);

    const PartitionSpec p = random_partition(rng, w.weights(), 1 + rng.below(4));
    const StepGraphon once = stepping(w, p);
    const StepGraphon twice = stepping(once, PartitionSpec::identity(once.weights()));
    CHECK(l1_difference(once.values(), twice.values()) < 1e-12);
    CHECK(edge_density(once) == doctest::Approx(edge_density(w)).epsilon(1e-10));
  }
}

TEST_CASE("stepping never raises a convex integral") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(8));
    const PartitionSpec p = rng.coin() ? random_partition(rng, w.weights(), 1 + rng.below(5))
                                       : PartitionSpec::dyadic(w.weights(), static_cast<int>(rng.below(4)));
    const StepGraphon s = stepping(w, p);
    for (const auto* f : {&kSquare, &kAbsHalf, &kExp}) CHECK(int_f(s, *f) <= int_f(w, *f) + 1e-10);
  }
}

TEST_CASE("stepping of a bipartite graphon by halves") {
  const StepGraphon bip = bipartite_graphon();
  const StepGraphon s = stepping(bip, PartitionSpec::dyadic(bip.weights(), 1));
  CHECK(s.values() == bip.values());
  const StepGraphon c = stepping(bip, PartitionSpec::dyadic(bip.weights(), 0));
  CHECK(c.value(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("dyadic partitions split blocks by overlap") {
  const std::vector<double> w{0.3, 0.7};
  const PartitionSpec p = PartitionSpec::dyadic(w, 1);
  CHECK(p.assignment()(0, 0) == doctest::Approx(0.3));
  CHECK(p.assignment()(1, 0) == doctest::Approx(0.2));
  CHECK(p.assignment()(1, 1) == doctest::Approx(0.5));
  CHECK(kind_of([&] { stepping(StepGraphon::constant(1.0), p); }) == ErrorKind::PartitionMismatch);
}

TEST_CASE("full-grid stepping reproduces a grid graphon and finer grids approximate it") {
  Rng rng(8);
  auto l2 = [](const StepGraphon& a, const StepGraphon& b) {
    const auto [ra, rb] = common_refinement(a, b, Coupling::northwest_corner(a.weights(), b.weights()));
    double total = 0.0;
    for (std::size_t i = 0; i < ra.blocks(); ++i)
      for (std::size_t j = 0; j < ra.blocks(); ++j) {
        const double d = ra.value(i, j) - rb.value(i, j);
        total += ra.weight(i) * ra.weight(j) * d * d;
      }
    return total;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const StepGraphon g = random_grid(rng, 16);
    double previous_l1 = INFINITY, previous_l2 = INFINITY;
    for (int depth = 0; depth <= 4; ++depth) {
      const StepGraphon s = stepping(g, PartitionSpec::dyadic(g.weights(), depth));
      const double err = l1_distance(s, g, Coupling::northwest_corner(s.weights(), g.weights()));
      const double sq = l2(s, g);
      if (depth == 4) CHECK(err < 1e-14);
      CHECK(sq <= previous_l2 + 1e-12);
      CHECK(err <= 2.0 * previous_l1 + 1e-12);
      previous_l1 = err;
      previous_l2 = sq;
    }
  }
}

TEST_CASE("block means are within a factor two of any constant in l1") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    std::vector<double> mass(n), f(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += (mass[i] = rng.uniform(0.01, 1.0));
      f[i] = rng.uniform();
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += mass[i] * f[i] / total;
    const double b = rng.uniform(-0.5, 1.5);
    double to_mean = 0.0, to_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      to_mean += mass[i] * std::abs(f[i] - mean);
      to_b += mass[i] * std::abs(f[i] - b);
    }
    CHECK(to_mean <= 2.0 * to_b + 1e-10);
  }
}

TEST_CASE("grid versions preserve density, convex integrals and range frequencies") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const StepGraphon w = random_grid(rng, 4);
    const std::size_t n = 8;
    const StepGraphon v = grid_version(w, n, random_permutation(rng, n));
    CHECK(edge_density(v) == doctest::Approx(edge_density(w)).epsilon(1e-12));
    for (const auto* f : {&kSquare, &kAbsHalf, &kExp}) CHECK(int_f(v, *f) == doctest::Approx(int_f(w, *f)).epsilon(1e-12));
    CHECK(range_frequencies(v).approx_equal(range_frequencies(w), 1e-12));
  }
  CHECK(kind_of([] { grid_version(make_step_graphon({0.3, 0.7}, {{0, 0}, {0, 0}}), 4, std::vector<std::size_t>{0, 1, 2, 3}); }) ==
        ErrorKind::ResolutionIncompatible);
}

TEST_CASE("a chessboard version of the bipartite graphon keeps its cut norm against 0") {
  const StepGraphon bip = bipartite_graphon();
  const std::vector<std::size_t> perm{1, 0, 3, 2};
  const StepGraphon v = grid_version(bip, 4, perm);
  const StepGraphon zero4 = refine_to_grid(StepGraphon::constant(0.0), 4);
  const StepGraphon zero2 = refine_to_grid(StepGraphon::constant(0.0), 2);
  const double a = cut_norm(SignedStepKernel::difference(bip, zero2), CutNormMode::Exact).value;
  const double b = cut_norm(SignedStepKernel::difference(v, zero4), CutNormMode::Exact).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("interlacing") {
  const StepGraphon bip = bipartite_graphon();
  const StepGraphon one = interlace_version(bip, 1);
  REQUIRE(one.blocks() == 2);
  CHECK(one.values() == bip.values());
  const StepGraphon two = interlace_version(bip, 2);
  REQUIRE(two.blocks() == 4);
  // Left-half cells go to even slots, right-half cells to odd slots.
  CHECK(two.value(0, 1) == 1.0);
  CHECK(two.value(0, 2) == 0.0);
  CHECK(two.value(1, 3) == 0.0);
  const StepGraphon c = interlace_version(StepGraphon::constant(0.4), 8);
  for (std::size_t i = 0; i < c.blocks(); ++i)
    for (std::size_t j = 0; j < c.blocks(); ++j) CHECK(c.value(i, j) == 0.4);
  CHECK(kind_of([] { interlace_version(make_step_graphon({0.3, 0.7}, {{0, 0}, {0, 0}}), 2); }) ==
        ErrorKind::ResolutionIncompatible);
  Rng rng(2);
  const StepGraphon w = random_grid(rng, 8);
  const StepGraphon v = interlace_version(w, 2, 8);
  CHECK(range_frequencies(v).approx_equal(range_frequencies(w), 1e-12));
}

TEST_CASE("reordering by an ordered partition") {
  const StepGraphon w = make_step_graphon({0.25, 0.75}, {{0.1, 0.2}, {0.2, 0.9}});
  const StepGraphon same = reorder_by_ordered_partition(w, PartitionSpec::identity(w.weights()));
  CHECK(same == w);
  const StepGraphon swapped = reorder_by_ordered_partition(w, PartitionSpec(Matrix::from_rows({{0.0, 0.25}, {0.75, 0.0}})));
  CHECK(swapped.weights() == std::vector<double>{0.75, 0.25});
  CHECK(swapped.value(0, 0) == 0.9);
  CHECK(swapped.value(1, 1) == 0.1);
  const StepGraphon split = reorder_by_ordered_partition(
      w, PartitionSpec(Matrix::from_rows({{0.125, 0.0, 0.125}, {0.0, 0.75, 0.0}})));
  CHECK(split.blocks() == 3);
  CHECK(edge_density(split) == doctest::Approx(edge_density(w)).epsilon(1e-12));
  CHECK(kind_of([&] { reorder_by_ordered_partition(w, PartitionSpec(Matrix::from_rows({{0.5}, {0.5}}))); }) ==
        ErrorKind::PartitionMismatch);
}

TEST_CASE("cohen reconstruction degenerate cases") {
  Rng rng(4);
  const StepGraphon w = random_grid(rng, 4);
  const StepGraphon ones = cohen_reconstruct(w, StepFunction1D::constant(1.0), 4);
  CHECK(l1_difference(ones.values(), w.values()) < 1e-12);
  const StepGraphon zeros = cohen_reconstruct(w, StepFunction1D::constant(0.0), 4);
  CHECK(l1_difference(zeros.values(), w.values()) < 1e-12);
  const StepGraphon half = cohen_reconstruct(bipartite_graphon(), StepFunction1D::constant(0.5), 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(half.value(i, j) == doctest::Approx(0.5));
  CHECK(kind_of([] { cohen_reconstruct(bipartite_graphon(), StepFunction1D({0.0, 0.3, 1.0}, {1.0, 0.0}), 4); }) ==
        ErrorKind::ResolutionIncompatible);
}

TEST_CASE("rectangle integrals and overlaps") {
  const StepGraphon w = make_step_graphon({0.25, 0.75}, {{1.0, 0.0}, {0.0, 0.5}});
  CHECK(rectangle_integral(w, 0, 1, 0, 1) == doctest::Approx(edge_density(w)));
  CHECK(rectangle_integral(w, 0, 0.25, 0, 0.25) == doctest::Approx(0.0625));
  CHECK(rectangle_integral(w, 0.5, 1, 0.5, 1) == doctest::Approx(0.125));
  const auto o = interval_overlaps(w.weights(), 0.2, 0.3);
  CHECK(o[0] == doctest::Approx(0.05));
  CHECK(o[1] == doctest::Approx(0.05));
}

TEST_CASE("common refinement keeps both layouts") {
  const StepGraphon u = bipartite_graphon();
  const StepGraphon w = make_step_graphon({0.25, 0.75}, {{1.0, 0.0}, {0.0, 0.5}});
  const auto [ru, rw] = common_refinement(u, w, Coupling::northwest_corner(u.weights(), w.weights()));
  CHECK(ru.weights() == rw.weights());
  CHECK(edge_density(ru) == doctest::Approx(edge_density(u)));
  CHECK(edge_density(rw) == doctest::Approx(edge_density(w)));
}
