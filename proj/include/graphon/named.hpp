#pragma once

#include <string>
#include <string_view>

#include "graphon/core.hpp"

namespace graphon {

/// eps must be 2^-k with 3 <= k <= 10; throws UnsupportedEps otherwise.
void check_family_eps(double eps);

StepGraphon bipartite_graphon();
StepGraphon w1_graphon(double eps);
/// Staircase raster of W2 on cells of side eps / 2.
StepGraphon w2_graphon(double eps);
StepGraphon u1_graphon(double eps);
StepGraphon u2_graphon(double eps);

/// name in {constant, bipartite, w1, w2, u1, u2}.
StepGraphon build_named_graphon(std::string_view name, double c, double eps);

/// Exact integral of W2 over [x0,x1] x [y0,y1] from the triangle geometry.
double w2_exact_integral(double eps, double x0, double x1, double y0, double y1);

/// sup over A in [0,1/2], B in [1/2,1] with |A| + |B| = 2 eps of
/// int_{[0,1/2] x A} W2 + int_{[1/2,1] x B} W1, plus eps.
double column_supremum(double eps);

/// Integral of U2 over [0,1] x [1/2 - eps, 1/2 + eps].
double u2_strip_integral(double eps);

}  // namespace graphon
