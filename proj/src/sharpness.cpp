#include "horocoho/sharpness.hpp"

#include <cmath>
#include <numbers>

namespace horocoho {

namespace {

constexpr double kPi = std::numbers::pi;

void require_principal_witness(const ReprParams& p) {
    if (p.series != Series::Principal)
        throw std::invalid_argument("witness: principal series required");
    if (std::fabs(p.nu.real()) > 1e-12 || p.nu.imag() < 4.0)
        throw std::invalid_argument(
            "witness: nu must be purely imaginary with |nu| >= 4");
}

} // namespace

GridFunction witness_twisted(const ReprParams& p, const LogGrid& grid) {
    return witness_twisted_scaled(p, grid, 1.0);
}

GridFunction witness_twisted_scaled(const ReprParams& p, const LogGrid& grid,
                                    double lambda) {
    require_principal_witness(p);
    if (!(lambda > 0.0))
        throw std::invalid_argument("witness_twisted_scaled: lambda > 0");
    const BumpSpec bump;
    if (std::log(lambda * bump.support_hi) > grid.u_max() ||
        std::log(lambda * bump.support_lo) < grid.u_min())
        throw std::invalid_argument(
            "witness_twisted_scaled: support outside grid coverage");
    const cplx e = p.nu + 1.0;
    GridFunction g(grid);
    const int n = grid.n_per_branch();
    for (int b = 0; b < grid.branches(); ++b)
        for (int j = 0; j < n; ++j) {
            const double ratio = grid.xi(b, j) / lambda;
            if (ratio <= 0.0) continue;
            const double q = plateau_bump(ratio);
            if (q == 0.0) continue;
            g.at(b, j) = q * (std::exp(e * std::log(ratio)) - 1.0);
        }
    return g;
}

std::pair<GridFunction, GridFunction>
witness_map(const ReprParams& p, const LogGrid& grid, double L) {
    require_principal_witness(p);
    if (!(L > 0.0)) throw std::invalid_argument("witness_map: L > 0");
    const BumpSpec bump;
    const double scale = 2.0 * kPi / L;
    if (std::log(scale * bump.support_hi) > grid.u_max() ||
        std::log(scale * bump.support_lo) < grid.u_min())
        throw std::invalid_argument("witness_map: support outside grid coverage");

    const cplx nu = p.nu;
    const double guard = 1e-6;
    GridFunction g(grid), f(grid);
    const int n = grid.n_per_branch();
    for (int b = 0; b < grid.branches(); ++b)
        for (int j = 0; j < n; ++j) {
            const double xi = grid.xi(b, j);
            const double w = L * xi / (2.0 * kPi);
            if (w <= 0.0) continue;
            const double q = plateau_bump(w);
            if (q == 0.0) continue;
            const cplx gtwist = q * (std::exp(nu * std::log(w)) - 1.0);
            const double r = w - 1.0;
            if (std::fabs(r) >= guard) {
                const cplx H = map_multiplier(xi, L) / r;
                f.at(b, j) = gtwist / r;
                g.at(b, j) = gtwist * H;
            } else {
                // removable point: ((1+r)^nu - 1)/r and (e^{-2pi i r} - 1)/r
                // by series, truncation far below the guard tolerance
                const cplx fser =
                    q * (nu * (1.0 + (nu - 1.0) * r / 2.0 +
                               (nu - 1.0) * (nu - 2.0) * r * r / 6.0));
                const double phi = 2.0 * kPi * r;
                const cplx Hser =
                    2.0 * kPi *
                    cplx(-phi / 2.0 + phi * phi * phi / 24.0,
                         -1.0 + phi * phi / 6.0);
                f.at(b, j) = fser;
                g.at(b, j) = gtwist * Hser;
            }
        }
    return {g, f};
}

double exponent_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("exponent_fit: need >= 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("exponent_fit: coordinates must be > 0");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / points.size();
    const double my = sy / points.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("exponent_fit: degenerate x-values");
    return sxy / sxx;
}

double cos_bound_check(double nu_abs, int n_xi, int n_t) {
    if (!(nu_abs >= 4.0))
        throw std::invalid_argument("cos_bound_check: require nu_abs >= 4");
    if (n_xi < 2 || n_t < 2)
        throw std::invalid_argument("cos_bound_check: mesh too small");
    double mn = 1.0;
    for (int i = 0; i < n_xi; ++i) {
        const double xi = 1.0 + (1.0 / nu_abs) * i / (n_xi - 1);
        for (int k = 0; k < n_t; ++k) {
            const double t = static_cast<double>(k) / (n_t - 1);
            mn = std::min(mn, std::cos(nu_abs * std::log1p(t * (xi - 1.0))));
        }
    }
    return mn;
}

SharpnessResult sharpness_experiment(const SharpnessScan& scan,
                                     const LogGrid& grid) {
    if (!(scan.sigma >= 0.0 && scan.sigma < scan.s + 0.5))
        throw std::invalid_argument(
            "sharpness_experiment: require 0 <= sigma < s + 1/2");
    if (scan.nu_abs.size() < 3)
        throw std::invalid_argument(
            "sharpness_experiment: need >= 3 nu values to fit");

    SharpnessResult out;
    std::vector<std::pair<double, double>> pts_g, pts_f, pts_r;
    for (double na : scan.nu_abs) {
        const ReprParams p = classify_series(1.0 + na * na);
        const GridFunction g = witness_twisted_scaled(p, grid, scan.lambda);
        const GridFunction f = solve_twisted(g, TwistParams{scan.lambda}, p);
        const double n_g = sobolev_norm(
            g, SobolevSpec(scan.s + scan.sigma, Family::Hat,
                           SobolevBasis::FullUXV),
            p);
        const double n_f = sobolev_norm(
            f, SobolevSpec(scan.s, Family::Hat, SobolevBasis::UOnly), p);
        ExperimentRecord r;
        r.nu_abs = na;
        r.lambda = scan.lambda;
        r.s = scan.s;
        r.sigma = scan.sigma;
        r.norm_f = n_f;
        r.norm_g = n_g;
        r.ratio = n_f / n_g;
        out.records.push_back(r);
        pts_g.emplace_back(na, n_g);
        pts_f.emplace_back(na, n_f);
        pts_r.emplace_back(na, n_f / n_g);
    }
    out.slope_g = exponent_fit(pts_g);
    out.slope_f = exponent_fit(pts_f);
    out.slope_ratio = exponent_fit(pts_r);
    return out;
}

LogGrid sharpness_grid() {
    return LogGrid(Domain::PositiveHalf, -0.7, 0.7, 4097);
}

} // namespace horocoho
