#include "horocoho/bump.hpp"

#include <cmath>

namespace horocoho {

namespace {
double phi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
} // namespace

double smooth_ramp(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = phi(t);
    const double b = phi(1.0 - t);
    return a / (a + b);
}

double plateau_bump(double xi, const BumpSpec& spec) {
    if (xi <= spec.support_lo || xi >= spec.support_hi) return 0.0;
    if (xi >= spec.plateau_lo && xi <= spec.plateau_hi) return 1.0;
    if (xi < spec.plateau_lo)
        return smooth_ramp((xi - spec.support_lo) /
                           (spec.plateau_lo - spec.support_lo));
    return smooth_ramp((spec.support_hi - xi) /
                       (spec.support_hi - spec.plateau_hi));
}

double u_bump(double u, double lo, double hi) {
    if (u <= lo || u >= hi) return 0.0;
    const BumpSpec spec;
    const double t = (u - lo) / (hi - lo);
    return plateau_bump(spec.support_lo +
                        t * (spec.support_hi - spec.support_lo));
}

} // namespace horocoho
