#pragma once

#include "horocoho/bump.hpp"
#include "horocoho/records.hpp"
#include "horocoho/solvers.hpp"

#include <utility>

namespace horocoho {

// ---------------------------------------------------------------------------
// Lower-bound witnesses
// ---------------------------------------------------------------------------

/// g(xi) = q(xi) (xi^{nu+1} - 1) with q the plateau bump; g(1) = 0.
/// Requires the principal series with |nu| >= 4 (nu purely imaginary).
GridFunction witness_twisted(const ReprParams& p, const LogGrid& grid);

/// g(xi) = q(xi/lambda) ((xi/lambda)^{nu+1} - 1); vanishes at xi = lambda.
GridFunction witness_twisted_scaled(const ReprParams& p, const LogGrid& grid,
                                    double lambda);

/// Map-equation witness pair (g, f) with
///   g_twist(xi) = q(L xi / 2pi) ((L xi / 2pi)^nu - 1),
///   f = g_twist / (L xi / 2pi - 1),   g = g_twist * H,
///   H = (e^{-i L xi} - 1) / (L xi / 2pi - 1),
/// satisfying (e^{-i xi L} - 1) f = g pointwise; the removable point
/// xi = 2pi/L is evaluated by series.
std::pair<GridFunction, GridFunction> witness_map(const ReprParams& p,
                                                  const LogGrid& grid, double L);

// ---------------------------------------------------------------------------
// Fits and scalar proof ingredients
// ---------------------------------------------------------------------------

/// Least-squares slope of log y against log x. Needs >= 3 points with
/// distinct x; all coordinates must be positive.
double exponent_fit(const std::vector<std::pair<double, double>>& points);

/// Minimum of cos(nu_abs * log(1 + t (xi - 1))) over an n_xi x n_t mesh of
/// xi in [1, 1 + 1/nu_abs], t in [0, 1].
double cos_bound_check(double nu_abs, int n_xi, int n_t);

// ---------------------------------------------------------------------------
// The nu-scan
// ---------------------------------------------------------------------------

struct SharpnessScan {
    double s = 1.0;
    double sigma = 0.0;                                 // in [0, s + 1/2)
    std::vector<double> nu_abs{8, 16, 32, 64, 128};     // |nu| >= 4
    double lambda = 1.0;
};

struct SharpnessResult {
    std::vector<ExperimentRecord> records; // one per nu, slopes attached
    double slope_g = 0.0;     // fitted growth of |g|_{s+sigma} in |nu|
    double slope_f = 0.0;     // fitted growth of |(I-U^2)^{s/2} f| in |nu|
    double slope_ratio = 0.0; // fitted growth of the ratio n_f / n_g
};

/// Per nu: g = scaled twisted witness, f = solve_twisted(g), then
///   n_g = |g|_{s+sigma} (hat family, FullUXV),
///   n_f = |f|_{s}       (hat family, UOnly),
/// with fitted log-log slopes against |nu|.
SharpnessResult sharpness_experiment(const SharpnessScan& scan,
                                     const LogGrid& grid);

/// Grid tuned for the witness support: u in [-0.7, 0.7], 4097 points per
/// branch (h = 3.4e-4, and xi = 1 lands exactly on a node).
LogGrid sharpness_grid();

} // namespace horocoho
