#pragma once

#include "mdv/vec.hpp"

namespace mdv {

// Membership in {(x, y) : y >= 1/x > 0}, evaluated exactly in double
// arithmetic (x must be a positive normal number).
inline bool hyperbola_epigraph_contains(double x, double y) {
    return x > 1e-308 && y >= 1.0 / x;
}

// Positive root of q(t) = t^4 - a*t^3 + b*t - 1, the stationarity condition
// for the squared distance from (a, b) to the curve y = 1/x. Bracketed by
// geometric expansion, refined by safeguarded Newton/bisection.
double hyperbola_stationarity_root(double a, double b);

// Projection of p onto {(x, y) : y >= 1/x > 0}. p must have dim 2.
Vec project_hyperbola_epigraph(const Vec& p);

} // namespace mdv
