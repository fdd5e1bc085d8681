#pragma once

namespace horocoho {

/// Smooth plateau bump: identically 0 outside [3/4, 4/3], identically 1 on
/// [63/64, 1.26], C-infinity ramps between. The plateau covers [1, 1 + 1/|nu|]
/// for every |nu| >= 4.
struct BumpSpec {
    double support_lo = 0.75;
    double support_hi = 4.0 / 3.0;
    double plateau_lo = 63.0 / 64.0;
    double plateau_hi = 1.26;
};

/// r(t) = phi(t) / (phi(t) + phi(1-t)), phi(t) = e^{-1/t} for t > 0 else 0.
double smooth_ramp(double t);

double plateau_bump(double xi, const BumpSpec& spec = {});

/// The same bump profile mapped onto [lo, hi]; exact-zero outside, exact-one
/// on the image of the standard plateau.
double u_bump(double u, double lo, double hi);

} // namespace horocoho
