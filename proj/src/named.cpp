#include "graphon/named.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

double level_value(double eps) { return 4.0 * (eps - eps * eps); }

// W1 blocks: L = [0, 1/4 - eps/2), S = strip, R = [1/4 + eps/2, 1/2), H = [1/2, 1].
constexpr std::size_t kL = 0, kS = 1, kR = 2, kH = 3;

double w1_block_value(std::size_t a, std::size_t b, double c) {
  if (a == kS || b == kS) return 1.0;
  if (a == kH && b == kH) return c;
  if (a == kH || b == kH) return 1.0;
  return 0.0;
}

std::size_t w1_block_at(double x, double eps) {
  if (x < 0.25 - eps / 2) return kL;
  if (x < 0.25 + eps / 2) return kS;
  if (x < 0.5) return kR;
  return kH;
}

// Area of {(x, y) in [x0,x1] x [y0,y1] : x + y >= s}.
double area_above(double x0, double x1, double y0, double y1, double s) {
  if (x1 <= x0 || y1 <= y0) return 0.0;
  const double h = y1 - y0;
  // Height of the part below the line at abscissa x: clamp(s - x - y0, 0, h).
  auto below = [&](double lo, double hi) {
    if (hi <= lo) return 0.0;
    const double a = s - y1;  // full height for x <= a
    const double b = s - y0;  // zero height for x >= b
    double total = 0.0;
    const double full_hi = std::min(hi, a);
    if (full_hi > lo) total += h * (full_hi - lo);
    const double mid_lo = std::max(lo, a);
    const double mid_hi = std::min(hi, b);
    if (mid_hi > mid_lo) {
      total += (s - y0) * (mid_hi - mid_lo) - (mid_hi * mid_hi - mid_lo * mid_lo) / 2.0;
    }
    return total;
  };
  return (x1 - x0) * h - below(x0, x1);
}

struct Segment {
  double y0, y1, g0, g1;
};

double positive_part_integral(const Segment& s, double tau) {
  const double len = s.y1 - s.y0;
  const double hi = std::max(s.g0, s.g1);
  const double lo = std::min(s.g0, s.g1);
  if (lo >= tau) return (s.g0 + s.g1) / 2.0 * len - tau * len;
  if (hi <= tau) return 0.0;
  const double part = len * (hi - tau) / (hi - lo);
  return 0.5 * part * (hi - tau);
}

// sup over sets C with |C| = mass of int_C g, for piecewise linear g.
double superlevel_supremum(const std::vector<Segment>& g, double mass) {
  double lo = 0.0, hi = 0.0;
  for (const auto& s : g) {
    lo = std::min({lo, s.g0, s.g1});
    hi = std::max({hi, s.g0, s.g1});
  }
  auto dual = [&](double tau) {
    double total = tau * mass;
    for (const auto& s : g) total += positive_part_integral(s, tau);
    return total;
  };
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (dual(m1) <= dual(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return dual((lo + hi) / 2.0);
}

}  // namespace

void check_family_eps(double eps) {
  int exponent = 0;
  const double mantissa = std::frexp(eps, &exponent);
  // eps = 2^-k has mantissa 1/2 and exponent 1 - k.
  const int k = 1 - exponent;
  if (!(eps > 0.0) || mantissa != 0.5 || k < 3 || k > 10) {
    throw Error(ErrorKind::UnsupportedEps, "eps must be 2^-k with 3 <= k <= 10");
  }
}

StepGraphon bipartite_graphon() { return make_step_graphon({0.5, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}); }

StepGraphon w1_graphon(double eps) {
  check_family_eps(eps);
  const double c = level_value(eps);
  Matrix v(4, 4);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) v(a, b) = w1_block_value(a, b, c);
  return StepGraphon({0.25 - eps / 2, eps, 0.25 - eps / 2, 0.5}, std::move(v));
}

StepGraphon w2_graphon(double eps) {
  check_family_eps(eps);
  const double c = level_value(eps);
  const std::size_t n = static_cast<std::size_t>(std::lround(2.0 / eps));
  const std::size_t half = n / 2;
  const double h = 1.0 / static_cast<double>(n);
  // Cells cut by the anti-diagonal go to the triangle when min(i, j) is even.
  auto in_triangle = [&](std::size_t i, std::size_t j) {
    const std::size_t s = i + j + 1;
    if (s != half) return s > half;
    return std::min(i, j) % 2 == 0;
  };
  auto w1_cell = [&](std::size_t i, std::size_t j) {
    return w1_block_value(w1_block_at((static_cast<double>(i) + 0.5) * h, eps),
                          w1_block_at((static_cast<double>(j) + 0.5) * h, eps), c);
  };
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double value = w1_cell(i, j);
      if (i < half && j < half && in_triangle(i, j)) {
        value = c;
      } else if (i >= half && j >= half && in_triangle(i - half, j - half)) {
        value = w1_cell(i - half, j - half);
      }
      v(i, j) = value;
    }
  return StepGraphon(std::vector<double>(n, h), std::move(v));
}

StepGraphon u1_graphon(double eps) {
  check_family_eps(eps);
  const double c = level_value(eps);
  return make_step_graphon({0.5, 0.5}, {{c, 1.0}, {1.0, c}});
}

StepGraphon u2_graphon(double eps) {
  check_family_eps(eps);
  const double c = level_value(eps);
  // x / 2 runs over W1's blocks L, S, R; (x + 1) / 2 always lands in H.
  Matrix v(3, 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      v(a, b) = 0.25 * (w1_block_value(a, b, c) + w1_block_value(kH, b, c) + w1_block_value(a, kH, c) +
                        w1_block_value(kH, kH, c));
    }
  return StepGraphon({0.5 - eps, 2.0 * eps, 0.5 - eps}, std::move(v));
}

StepGraphon build_named_graphon(std::string_view name, double c, double eps) {
  if (name == "constant") {
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::ValueOutOfRange, "constant must lie in [0, 1]");
    return StepGraphon::constant(c);
  }
  if (name == "bipartite") return bipartite_graphon();
  if (name == "w1") return w1_graphon(eps);
  if (name == "w2") return w2_graphon(eps);
  if (name == "u1") return u1_graphon(eps);
  if (name == "u2") return u2_graphon(eps);
  throw Error(ErrorKind::InvalidArgument, "unknown graphon name '" + std::string(name) + "'");
}

double w2_exact_integral(double eps, double x0, double x1, double y0, double y1) {
  const StepGraphon w1 = w1_graphon(eps);
  const double c = level_value(eps);
  double total = rectangle_integral(w1, x0, x1, y0, y1);
  const auto bounds = w1.boundaries();
  // Pieces of W1 inside [0, 1/2]^2 are the blocks L, S, R.
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      const double v = w1.value(a, b);
      const double px0 = bounds[a], px1 = bounds[a + 1], py0 = bounds[b], py1 = bounds[b + 1];
      // First triangle: W1 replaced by c.
      const double first = area_above(std::max(x0, px0), std::min(x1, px1), std::max(y0, py0), std::min(y1, py1), 0.5);
      // Second triangle: c replaced by W1 translated by (1/2, 1/2).
      const double second = area_above(std::max(x0 - 0.5, px0), std::min(x1 - 0.5, px1), std::max(y0 - 0.5, py0),
                                       std::min(y1 - 0.5, py1), 0.5);
      total += (c - v) * first + (v - c) * second;
    }
  return total;
}

double column_supremum(double eps) {
  check_family_eps(eps);
  const double c = level_value(eps);
  const double a = 0.25 - eps / 2;
  const double b = 0.25 + eps / 2;
  // Column masses int_0^{1/2} W2(x, y) dx on [0, 1/2] and int_{1/2}^1 W1(x, y) dx on [1/2, 1].
  const std::vector<Segment> g{
      {0.0, a, eps, eps + c * a},
      {a, b, 0.5 - a + c * a, 0.5 - b + c * b},
      {b, 0.5, c * b, c * 0.5},
      {0.5, 1.0, c / 2, c / 2},
  };
  return eps + superlevel_supremum(g, 2.0 * eps);
}

double u2_strip_integral(double eps) { return rectangle_integral(u2_graphon(eps), 0.0, 1.0, 0.5 - eps, 0.5 + eps); }

}  // namespace graphon
