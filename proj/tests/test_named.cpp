#include <doctest.h>

#include <cmath>

#include "graphon/errors.hpp"
#include "graphon/named.hpp"
#include "support.hpp"

using namespace graphon;

namespace {

double level(double eps) { return 4.0 * (eps - eps * eps); }

double w1_density(double eps) { return level(eps) / 4.0 + 0.5 + eps - eps * eps; }

ErrorKind kind_of(double eps) {
  try {
    check_family_eps(eps);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("family parameter validation") {
  for (int k = 3; k <= 10; ++k) CHECK_NOTHROW(check_family_eps(std::ldexp(1.0, -k)));
  CHECK(kind_of(0.25) == ErrorKind::UnsupportedEps);
  CHECK(kind_of(std::ldexp(1.0, -11)) == ErrorKind::UnsupportedEps);
  CHECK(kind_of(0.1) == ErrorKind::UnsupportedEps);
  CHECK(kind_of(0.0) == ErrorKind::UnsupportedEps);
  CHECK(kind_of(-0.125) == ErrorKind::UnsupportedEps);
  CHECK_THROWS_AS(w1_graphon(0.2), Error);
  CHECK_THROWS_AS(u2_graphon(0.5), Error);
}

TEST_CASE("U1 and W1 closed forms") {
  const double eps = 0.125;
  CHECK(edge_density(u1_graphon(eps)) == doctest::Approx(0.71875));
  const StepGraphon w1 = w1_graphon(eps);
  CHECK(rectangle_integral(w1, 0.5, 1.0, 0.5, 1.0) == doctest::Approx(0.109375));
  CHECK(rectangle_integral(w1, 0.0, 0.5, 0.0, 0.5) == doctest::Approx(2 * eps * 0.5 - eps * eps));
  for (int k = 3; k <= 10; ++k) {
    const double e = std::ldexp(1.0, -k);
    CHECK(edge_density(w1_graphon(e)) == doctest::Approx(w1_density(e)).epsilon(1e-12));
    CHECK(edge_density(u1_graphon(e)) == doctest::Approx((1.0 + level(e)) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("W1 pointwise values") {
  const double eps = 0.0625;
  const StepGraphon w1 = w1_graphon(eps);
  CHECK(w1(0.1, 0.1) == 0.0);
  CHECK(w1(0.1, 0.4) == 0.0);
  CHECK(w1(0.25, 0.1) == 1.0);
  CHECK(w1(0.1, 0.75) == 1.0);
  CHECK(w1(0.75, 0.75) == doctest::Approx(level(eps)));
}

TEST_CASE("U2 averages W1 and keeps its density") {
  for (int k = 3; k <= 8; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const StepGraphon u2 = u2_graphon(eps);
    CHECK(edge_density(u2) == doctest::Approx(w1_density(eps)).epsilon(1e-12));
    const StepGraphon w1 = w1_graphon(eps);
    for (double x : {0.1, 0.3, 0.5, 0.8})
      for (double y : {0.05, 0.45, 0.7}) {
        const double avg = (w1(x / 2, y / 2) + w1((x + 1) / 2, y / 2) + w1(x / 2, (y + 1) / 2) +
                            w1((x + 1) / 2, (y + 1) / 2)) /
                           4.0;
        CHECK(u2(x, y) == doctest::Approx(avg));
      }
  }
}

TEST_CASE("W2 exact integral keeps the W1 density") {
  for (int k = 3; k <= 10; ++k) {
    const double eps = std::ldexp(1.0, -k);
    CHECK(w2_exact_integral(eps, 0, 1, 0, 1) == doctest::Approx(w1_density(eps)).epsilon(1e-12));
    // The lower half-square trades c for W1 values over the upper triangle.
    CHECK(w2_exact_integral(eps, 0.5, 1, 0.5, 1) + w2_exact_integral(eps, 0, 0.5, 0, 0.5) ==
          doctest::Approx(rectangle_integral(w1_graphon(eps), 0.5, 1, 0.5, 1) +
                          rectangle_integral(w1_graphon(eps), 0, 0.5, 0, 0.5))
              .epsilon(1e-12));
  }
}

TEST_CASE("W2 raster tracks the exact integral") {
  for (int k = 3; k <= 8; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const StepGraphon w2 = w2_graphon(eps);
    CHECK(w2.blocks() == static_cast<std::size_t>(std::lround(2 / eps)));
    for (std::size_t i = 0; i < w2.blocks(); ++i)
      for (std::size_t j = 0; j < w2.blocks(); ++j) {
        const double v = w2.value(i, j);
        CHECK((v == 0.0 || v == 1.0 || v == level(eps)));
      }
    const std::vector<double> cuts{0, 0.25 - eps / 2, 0.25 + eps / 2, 0.5, 0.75 - eps / 2, 0.75 + eps / 2, 1};
    for (std::size_t a = 0; a + 1 < cuts.size(); ++a)
      for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
        const double raster = rectangle_integral(w2, cuts[a], cuts[a + 1], cuts[b], cuts[b + 1]);
        const double exact = w2_exact_integral(eps, cuts[a], cuts[a + 1], cuts[b], cuts[b + 1]);
        CHECK(std::abs(raster - exact) <= 4 * eps * eps);
      }
  }
}

TEST_CASE("strip and supremum asymptotics") {
  for (int k = 4; k <= 10; ++k) {
    const double eps = std::ldexp(1.0, -k);
    CHECK(std::abs(u2_strip_integral(eps) - 1.5 * eps) <= 8 * eps * eps);
    CHECK(u2_strip_integral(eps) == doctest::Approx(rectangle_integral(u2_graphon(eps), 0, 1, 0.5 - eps, 0.5 + eps)));
    const double ratio = column_supremum(eps) / eps;
    CHECK(ratio >= 1.25 - 10 * eps);
    CHECK(ratio <= 1.25 + 10 * eps);
  }
}

TEST_CASE("graphons by name") {
  CHECK(build_named_graphon("constant", 0.3, 0) == StepGraphon::constant(0.3));
  CHECK(build_named_graphon("bipartite", 0, 0) == bipartite_graphon());
  CHECK(build_named_graphon("w1", 0, 0.125) == w1_graphon(0.125));
  CHECK(build_named_graphon("w2", 0, 0.125) == w2_graphon(0.125));
  CHECK(build_named_graphon("u1", 0, 0.125) == u1_graphon(0.125));
  CHECK(build_named_graphon("u2", 0, 0.125) == u2_graphon(0.125));
  CHECK_THROWS_AS(build_named_graphon("nope", 0, 0.125), Error);
  CHECK_THROWS_AS(build_named_graphon("constant", 1.5, 0), Error);
}
