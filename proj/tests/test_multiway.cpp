#include <doctest.h>

#include <cmath>

#include "graphon/errors.hpp"
#include "graphon/metrics.hpp"
#include "graphon/multiway.hpp"
#include "graphon/named.hpp"
#include "support.hpp"

using namespace graphon;
using graphon::test::random_graphon;
using graphon::test::random_grid;
using graphon::test::random_partition;
using graphon::test::random_permutation;
using graphon::test::random_weights;

namespace {

MultiwaySampling deterministic() {
  MultiwaySampling s;
  s.random_points = false;
  return s;
}

}  // namespace

TEST_CASE("multiway matrix examples") {
  const StepGraphon bip = bipartite_graphon();
  const Matrix one = multiway_matrix(bip, PartitionSpec::trivial(bip.weights()));
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) == doctest::Approx(0.5));

  const Matrix id = multiway_matrix(bip, PartitionSpec::identity(bip.weights()));
  CHECK(id(0, 0) == 0.0);
  CHECK(id(1, 1) == 0.0);
  CHECK(id(0, 1) == doctest::Approx(0.25));
  CHECK(id(1, 0) == doctest::Approx(0.25));

  const StepGraphon c = StepGraphon::constant(0.4);
  const Matrix m = multiway_matrix(c, PartitionSpec(Matrix::from_rows({{0.2, 0.3, 0.5}})));
  const std::vector<double> a{0.2, 0.3, 0.5};
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = 0; k < 3; ++k) CHECK(m(l, k) == doctest::Approx(0.4 * a[l] * a[k]));
}

TEST_CASE("multiway matrix rejects a mismatched assignment") {
  const StepGraphon w = make_step_graphon({0.5, 0.5}, {{0.1, 0.2}, {0.2, 0.3}});
  auto kind = [&](const PartitionSpec& p) {
    try {
      multiway_matrix(w, p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind(PartitionSpec(Matrix::from_rows({{0.5, 0.0}, {0.2, 0.2}}))) == ErrorKind::MarginalMismatch);
  CHECK(kind(PartitionSpec(Matrix::from_rows({{1.0}}))) == ErrorKind::MarginalMismatch);
}

TEST_CASE("multiway matrix invariants") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(6));
    const PartitionSpec r = random_partition(rng, w.weights(), 1 + rng.below(4));
    const Matrix m = multiway_matrix(w, r);
    const auto a = r.part_masses();
    double total = 0.0;
    for (std::size_t l = 0; l < m.rows(); ++l)
      for (std::size_t k = 0; k < m.cols(); ++k) {
        total += m(l, k);
        CHECK(m(l, k) == m(k, l));
        CHECK(m(l, k) >= 0.0);
        CHECK(m(l, k) <= a[l] * a[k] + 1e-12);
      }
    CHECK(total == doctest::Approx(edge_density(w)).epsilon(1e-12));

    // The entries are the part masses times the stepped values.
    const StepGraphon s = stepping(w, r);
    for (std::size_t l = 0; l < m.rows(); ++l)
      for (std::size_t k = 0; k < m.cols(); ++k)
        if (a[l] > 0.0 && a[k] > 0.0) CHECK(m(l, k) == doctest::Approx(s.value(l, k) * a[l] * a[k]).epsilon(1e-9));
  }
}

TEST_CASE("bipartite sampled set stays in the feasible range") {
  const MultiwayMatrixSet set = sample_multiway_set(bipartite_graphon(), {0.5, 0.5}, 200, 3);
  REQUIRE(set.matrices.size() == set.provenance.size());
  double lo = INFINITY, hi = -INFINITY;
  for (const Matrix& m : set.matrices) {
    lo = std::min(lo, m(0, 0));
    hi = std::max(hi, m(0, 0));
    CHECK(m(0, 0) >= -1e-15);
    CHECK(m(0, 0) <= 0.125 + 1e-12);
  }
  CHECK(lo <= 1e-12);
  CHECK(hi > 0.1);
}

TEST_CASE("provenance reproduces each sampled matrix") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const StepGraphon w = random_graphon(rng, 1 + rng.below(5));
    const std::vector<double> a = random_weights(rng, 1 + rng.below(3));
    const MultiwayMatrixSet set = sample_multiway_set(w, a, 10, trial);
    REQUIRE(set.matrices.size() == set.provenance.size());
    for (std::size_t s = 0; s < set.matrices.size(); ++s) {
      CHECK(l1_difference(multiway_matrix(w, set.provenance[s]), set.matrices[s]) <= 1e-9);
      const auto masses = set.provenance[s].part_masses();
      for (std::size_t l = 0; l < a.size(); ++l) CHECK(masses[l] == doctest::Approx(a[l]).epsilon(1e-9));
    }
  }
}

TEST_CASE("sampled sets are deduplicated") {
  const MultiwayMatrixSet set = sample_multiway_set(StepGraphon::constant(0.3), {0.25, 0.75}, 20, 1);
  CHECK(set.matrices.size() == 1);
  CHECK(set.matrices[0](0, 1) == doctest::Approx(0.3 * 0.25 * 0.75));
}

TEST_CASE("multiway sets are invariant under grid versions") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    const StepGraphon w = random_grid(rng, n);
    const StepGraphon v = grid_version(w, n, random_permutation(rng, n));
    for (const std::vector<double>& a : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.25, 0.5}}) {
      const double gap = multiway_hausdorff(sample_multiway_set(w, a, 0, 0, deterministic()),
                                            sample_multiway_set(v, a, 0, 0, deterministic()));
      CHECK(gap <= 1e-9);
    }
  }
}

TEST_CASE("constants zero and one are at distance one") {
  const std::vector<double> a{0.5, 0.5};
  CHECK(multiway_hausdorff(sample_multiway_set(StepGraphon::constant(0.0), a, 5, 9),
                           sample_multiway_set(StepGraphon::constant(1.0), a, 5, 9)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling is seed deterministic") {
  Rng rng(43);
  const StepGraphon w = random_graphon(rng, 4);
  const auto x = sample_multiway_set(w, {0.3, 0.7}, 25, 77);
  const auto y = sample_multiway_set(w, {0.3, 0.7}, 25, 77);
  REQUIRE(x.matrices.size() == y.matrices.size());
  for (std::size_t s = 0; s < x.matrices.size(); ++s) CHECK(x.matrices[s] == y.matrices[s]);
}

TEST_CASE("multiway sampling validation") {
  const StepGraphon w = StepGraphon::constant(0.5);
  CHECK_THROWS_AS(sample_multiway_set(w, {}, 5, 1), Error);
  CHECK_THROWS_AS(sample_multiway_set(w, {0.5, 0.6}, 5, 1), Error);
  CHECK_THROWS_AS(sample_multiway_set(w, {0.5, 0.5}, 0, 1), Error);
  try {
    multiway_hausdorff(sample_multiway_set(w, {1.0}, 2, 1), sample_multiway_set(w, {0.5, 0.5}, 2, 1));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}
