#include <doctest.h>

#include <cmath>

#include "graphon/canonical.hpp"
#include "graphon/errors.hpp"
#include "graphon/measures.hpp"
#include "graphon/metrics.hpp"
#include "graphon/named.hpp"
#include "graphon/order.hpp"
#include "support.hpp"

using namespace graphon;
using graphon::test::random_graphon;
using graphon::test::random_grid;
using graphon::test::random_permutation;

namespace {

const std::function<double(double)> kSquare = [](double x) { return x * x; };

StepGraphon random_zero_one(Rng& rng, std::size_t k) {
  Matrix v(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) v(i, j) = v(j, i) = rng.coin() ? 1.0 : 0.0;
  return {graphon::test::random_weights(rng, k), v};
}

double min_signature_distance(const EnvelopeSample& s, const std::vector<double>& sig) {
  double best = INFINITY;
  for (const auto& x : s.signatures) best = std::min(best, signature_distance(x, sig, s.depth));
  return best;
}

}  // namespace

TEST_CASE("order probes on the basic pair") {
  const StepGraphon bip = bipartite_graphon();
  const StepGraphon half = StepGraphon::constant(0.5);
  CHECK(preceq_necessary(half, bip).consistent());
  const OrderVerdict v = preceq_necessary(bip, half);
  CHECK_FALSE(v.consistent());
  CHECK(v.failed(kRangeCondition));
  CHECK_FALSE(v.failed(kDensityCondition));
  CHECK(v.conditions.size() == 3);
}

TEST_CASE("densities must agree") {
  const OrderVerdict v = preceq_necessary(StepGraphon::constant(0.2), StepGraphon::constant(0.3));
  CHECK(v.status == VerdictStatus::Refuted);
  CHECK(v.failed(kDensityCondition));
}

TEST_CASE("steppings are consistent with lying below") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(8));
    const StepGraphon u = stepping(w, rng.coin() ? PartitionSpec::dyadic(w.weights(), static_cast<int>(rng.below(4)))
                                                 : graphon::test::random_partition(rng, w.weights(), 1 + rng.below(4)));
    const OrderVerdict v = preceq_necessary(u, w);
    CHECK(v.consistent());
  }
}

TEST_CASE("refuted verdicts name a failed condition") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const OrderVerdict v = preceq_necessary(random_graphon(rng, 1 + rng.below(4)), random_graphon(rng, 1 + rng.below(4)));
    if (!v.consistent()) {
      CHECK((v.failed(kDensityCondition) || v.failed(kRangeCondition) || v.failed(kDegreeCondition)));
    }
  }
}

TEST_CASE("extremal classification") {
  CHECK(classify_extremal(StepGraphon::constant(0.3)) == Extremality::Minimal);
  CHECK(classify_extremal(bipartite_graphon()) == Extremality::Maximal);
  CHECK(classify_extremal(w1_graphon(0.125)) == Extremality::Neither);
  CHECK(classify_extremal(StepGraphon::constant(1.0)) == Extremality::Both);
  CHECK(classify_extremal(StepGraphon::constant(0.0)) == Extremality::Both);
  CHECK(to_string(Extremality::Maximal) == "maximal");
  // A zero-weight block does not count.
  CHECK(classify_extremal(StepGraphon({1.0, 0.0}, Matrix::from_rows({{0.4, 1.0}, {1.0, 0.0}}))) == Extremality::Minimal);
}

TEST_CASE("classification agrees with range frequencies") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.below(4);
    const StepGraphon w = trial % 3 == 0 ? random_zero_one(rng, k)
                          : trial % 3 == 1 ? StepGraphon(graphon::test::random_weights(rng, k), Matrix(k, k, rng.uniform()))
                                           : random_graphon(rng, k);
    const DiscreteMeasure r = range_frequencies(w);
    const Extremality e = classify_extremal(w);
    const bool minimal = e == Extremality::Minimal || e == Extremality::Both;
    const bool maximal = e == Extremality::Maximal || e == Extremality::Both;
    CHECK(minimal == (r.size() == 1));
    bool zero_one = true;
    for (double a : r.atoms()) zero_one = zero_one && (a == 0.0 || a == 1.0);
    CHECK(maximal == zero_one);
  }
}

TEST_CASE("strictification of a constant") {
  const StepGraphon s = strictify(StepGraphon::constant(0.5), 0.25);
  REQUIRE(s.blocks() == 2);
  CHECK(s.value(0, 0) == 0.75);
  CHECK(s.value(0, 1) == 0.25);
  CHECK(s.value(1, 1) == 0.75);
  CHECK(int_f(s, kSquare) == doctest::Approx(0.3125));
  CHECK(edge_density(s) == doctest::Approx(0.5));
}

TEST_CASE("strictification errors") {
  try {
    strictify(bipartite_graphon(), 0.1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoInteriorValues);
  }
  CHECK_THROWS_AS(strictify(StepGraphon::constant(0.5), 0.0), Error);
  CHECK_THROWS_AS(strictify(StepGraphon::constant(0.5), 0.75), Error);
}

TEST_CASE("strictification of W1 perturbs only the level blocks") {
  const double eps = 0.125;
  const StepGraphon w1 = w1_graphon(eps);
  const StepGraphon s = strictify(w1, eps / 2);
  const double c = 4.0 * (eps - eps * eps);
  for (std::size_t i = 0; i < s.blocks(); ++i)
    for (std::size_t j = 0; j < s.blocks(); ++j) {
      const double original = w1.value(i % 4, j % 4);
      if (original == c) {
        CHECK(std::abs(s.value(i, j) - original) == doctest::Approx(eps / 2));
      } else {
        CHECK(s.value(i, j) == original);
      }
    }
}

TEST_CASE("strictification is strictly more structured") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(5));
    const double eps = rng.uniform(0.01, 0.1);
    double perturbed = 0.0;
    for (std::size_t i = 0; i < w.blocks(); ++i)
      for (std::size_t j = 0; j < w.blocks(); ++j)
        if (w.value(i, j) >= eps && w.value(i, j) <= 1.0 - eps) perturbed += w.weight(i) * w.weight(j);
    if (perturbed == 0.0) continue;
    const StepGraphon s = strictify(w, eps);
    CHECK(int_f(s, kSquare) >= int_f(w, kSquare) + eps * eps * perturbed / 2 - 1e-12);
    CHECK(preceq_necessary(w, s).consistent());
    const OrderVerdict back = preceq_necessary(s, w);
    CHECK_FALSE(back.consistent());
    CHECK(back.failed(kRangeCondition));
  }
}

TEST_CASE("envelope of a constant is a single point") {
  const EnvelopeSample s = sample_envelope(StepGraphon::constant(0.3), 8, 20, 3, 1);
  REQUIRE(s.signatures.size() > 1);
  for (const auto& sig : s.signatures) CHECK(signature_distance(sig, s.signatures[0], 3) < 1e-15);
}

TEST_CASE("envelope samples share the density and contain known limit points") {
  const EnvelopeSample s = sample_envelope(bipartite_graphon(), 64, 50, 4, 7);
  CHECK(s.resolution == 64);
  CHECK(s.depth == 4);
  for (const auto& sig : s.signatures) {
    REQUIRE(sig.size() == dyadic_count(4) * dyadic_count(4));
    CHECK(sig[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(min_signature_distance(s, weak_star_signature(StepGraphon::constant(0.5), 4)) < 0.02);
}

TEST_CASE("steppings appear in the sampled envelope") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const StepGraphon w = canonical_form(random_grid(rng, 8)).graphon;
    const EnvelopeSample s = sample_envelope(w, 8, 5, 3, 3);
    for (int d = 0; d <= 3; ++d) {
      const StepGraphon step = stepping(w, PartitionSpec::dyadic(w.weights(), d));
      CHECK(min_signature_distance(s, weak_star_signature(step, 3)) <= 1e-9);
    }
  }
}

TEST_CASE("envelope sampling is seed deterministic and validates input") {
  Rng rng(19);
  const StepGraphon w = random_grid(rng, 4);
  CHECK(sample_envelope(w, 8, 10, 3, 42) == sample_envelope(w, 8, 10, 3, 42));
  CHECK_THROWS_AS(sample_envelope(w, 8, 0, 3, 1), Error);
  CHECK_THROWS_AS(sample_envelope(w, 6, 3, 3, 1), Error);
}

TEST_CASE("envelope distance estimates") {
  Rng rng(23);
  const StepGraphon w = random_grid(rng, 8);
  CHECK(chi_estimate(w, w, 16, 10, 3, 5) == 0.0);
  const StepGraphon v = grid_version(w, 8, random_permutation(rng, 8));
  CHECK(chi_estimate(v, w, 16, 10, 3, 5) <= 1e-9);
  CHECK(chi_estimate(StepGraphon::constant(0.0), StepGraphon::constant(1.0), 8, 5, 3, 1) ==
        doctest::Approx(weak_star_distance(StepGraphon::constant(0.0), StepGraphon::constant(1.0), 3)).epsilon(1e-12));
}
