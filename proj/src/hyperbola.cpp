#include "mdv/hyperbola.hpp"

#include <cmath>
#include <limits>

#include "mdv/error.hpp"

namespace mdv {

namespace {

// q(t) = t^4 - a t^3 + b t - 1 and q'(t); q(0) = -1 and q(+inf) = +inf, and
// for points outside the set the positive root is unique (the sign pattern of
// the coefficients admits a single positive crossing).
inline double quartic(double a, double b, double t) {
    return ((t - a) * t * t * t) + b * t - 1.0;
}

inline double quartic_deriv(double a, double b, double t) {
    return (4.0 * t - 3.0 * a) * t * t + b;
}

inline double quartic_scale(double a, double b, double t) {
    double t3 = t * t * t;
    return t3 * t + std::abs(a) * t3 + std::abs(b) * t + 1.0;
}

} // namespace

double hyperbola_stationarity_root(double a, double b) {
    // Bracket by geometric expansion: shrink lo until q(lo) < 0 (always
    // possible since q -> -1 at 0+), grow hi until q(hi) > 0.
    double lo = 1e-3;
    while (lo > 1e-300 && quartic(a, b, lo) >= 0.0) lo *= 0.125;
    double hi = std::max({1.0, 2.0 * std::abs(a), lo * 2.0});
    while (quartic(a, b, hi) <= 0.0) hi *= 2.0;

    double t = std::clamp(std::abs(a) > 1.0 ? std::abs(a) : 1.0, lo, hi);
    // Safeguarded Newton: fall back to bisection whenever the step leaves the
    // bracket, and keep the bracket current with the sign of q.
    for (int it = 0; it < 200; ++it) {
        double q = quartic(a, b, t);
        if (std::abs(q) <= 1e-12 * quartic_scale(a, b, t)) break;
        if (q < 0.0) lo = t; else hi = t;
        double dq = quartic_deriv(a, b, t);
        double next = dq != 0.0 ? t - q / dq : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t)) {
            t = 0.5 * (lo + hi);
            break;
        }
        t = next;
    }
    return t;
}

Vec project_hyperbola_epigraph(const Vec& p) {
    if (p.size() != 2) {
        throw Error(Errc::dimension_mismatch,
                    "hyperbola epigraph projection needs dim 2, got " + std::to_string(p.size()));
    }
    double a = p[0], b = p[1];
    if (hyperbola_epigraph_contains(a, b)) return p;
    double t = hyperbola_stationarity_root(a, b);
    return Vec{t, 1.0 / t};
}

} // namespace mdv
