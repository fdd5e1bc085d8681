#include "horocoho/solvers.hpp"

#include "horocoho/bump.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace horocoho {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (const cplx& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

// High-order interpolation of the quotient at a guarded node from
// division-safe neighbors on the same branch.
cplx interp_from_neighbors(const LogGrid& g, int j0,
                           const std::vector<cplx>& branch_vals,
                           const std::vector<char>& safe) {
    const int n = g.n_per_branch();
    std::vector<double> us;
    std::vector<cplx> vals;
    for (int off = 1; off <= 12 && static_cast<int>(us.size()) < 8; ++off) {
        for (int sgn : {-1, 1}) {
            const int j = j0 + sgn * off;
            if (j < 0 || j >= n || !safe[j]) continue;
            us.push_back(g.u(j));
            vals.push_back(branch_vals[j]);
            if (static_cast<int>(us.size()) >= 8) break;
        }
    }
    if (us.size() < 4)
        throw std::runtime_error(
            "solver: resonance region too wide for quotient interpolation");
    return lagrange_eval(us, vals, g.u(j0));
}

// 8-node Lagrange evaluation of a grid function at an off-grid abscissa;
// used where the cubic scheme's h^4 floor is too coarse.
cplx interp_highorder(const GridFunction& f, double x) {
    const LogGrid& g = f.grid;
    const int b = g.branch_for(x);
    if (b < 0)
        throw std::out_of_range("interp_highorder: xi not on a covered branch");
    const double u = std::log(std::fabs(x));
    const int n = g.n_per_branch();
    const double t = (u - g.u_min()) / g.h();
    if (t < 0.0 || t > n - 1.0)
        throw std::out_of_range("interp_highorder: xi outside grid coverage");
    const int jn = static_cast<int>(std::lround(t));
    if (jn >= 0 && jn < n && x == g.xi(b, jn)) return f.at(b, jn);

    const int m = std::min(8, n);
    int k0 = static_cast<int>(std::floor(t)) - (m / 2 - 1);
    k0 = std::max(0, std::min(k0, n - m));
    std::vector<double> us(m);
    std::vector<cplx> vals(m);
    for (int i = 0; i < m; ++i) {
        us[i] = g.u(k0 + i);
        vals[i] = f.at(b, k0 + i);
    }
    return lagrange_eval(us, vals, u);
}

} // namespace

cplx eval_twist_distribution(const GridFunction& g, const TwistParams& tp) {
    return interpolate_at(g, tp.lambda);
}

GridFunction solve_twisted(const GridFunction& g, const TwistParams& tp,
                           const ReprParams& /*p*/) {
    const double lambda = tp.lambda;
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("solve_twisted: require lambda != 0");
    const LogGrid& grid = g.grid;
    if (grid.domain() == Domain::PositiveHalf && lambda <= 0.0)
        throw std::invalid_argument(
            "solve_twisted: lambda > 0 required on PositiveHalf grids");

    const double gnorm = l2nu_norm(g);
    GridFunction f(grid);
    if (gnorm == 0.0) return f;

    const cplx dval = eval_twist_distribution(g, tp); // throws if uncovered
    if (std::abs(dval) > tp.annihilation_tol * gnorm) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "solve_twisted: distribution obstruction |g(lambda)| = "
                      "%.3e exceeds %.3e",
                      std::abs(dval), tp.annihilation_tol * gnorm);
        throw ObstructionError(buf, std::abs(dval));
    }

    const int n = grid.n_per_branch();
    const int bres = grid.branch_for(lambda);
    const double u_res = std::log(std::fabs(lambda));
    const cplx I(0.0, 1.0);

    // residue of g/(xi - lambda) left over when g annihilates the point
    // evaluation only to tolerance; split off so the guarded-node value is
    // consistent with the division values next to it
    const cplx g_at_lambda = interp_highorder(g, lambda);

    for (int b = 0; b < grid.branches(); ++b) {
        std::vector<cplx> vals(n);
        std::vector<char> safe(n, 1);
        int risky = -1;
        if (b == bres) {
            const int jr =
                static_cast<int>(std::lround((u_res - grid.u_min()) / grid.h()));
            if (jr >= 0 && jr < n &&
                std::fabs(grid.u(jr) - u_res) < 0.5 * grid.h()) {
                risky = jr;
                safe[jr] = 0;
            }
        }
        for (int j = 0; j < n; ++j) {
            if (j == risky) continue;
            vals[j] = I * g.at(b, j) / (grid.xi(b, j) - lambda);
        }
        if (risky >= 0) {
            std::vector<cplx> regular = vals;
            for (int j = std::max(0, risky - 12);
                 j <= std::min(n - 1, risky + 12); ++j) {
                if (j == risky) continue;
                regular[j] = I * (g.at(b, j) - g_at_lambda) /
                             (grid.xi(b, j) - lambda);
            }
            cplx val = interp_from_neighbors(grid, risky, regular, safe);
            const double d = grid.xi(b, risky) - lambda;
            if (d != 0.0) val += I * g_at_lambda / d;
            vals[risky] = val;
        }
        for (int j = 0; j < n; ++j) f.at(b, j) = vals[j];
    }
    return f;
}

cplx eval_map_distribution(const GridFunction& g, const MapParams& mp, int m) {
    if (g.grid.domain() == Domain::PositiveHalf && m < 1)
        throw std::invalid_argument(
            "eval_map_distribution: m >= 1 required on PositiveHalf grids");
    if (m == 0)
        throw std::out_of_range("eval_map_distribution: m = 0 has abscissa 0");
    return interpolate_at(g, 2.0 * kPi * m / mp.L);
}

cplx map_multiplier(double xi, double L) {
    const double half = 0.5 * xi * L;
    const double s = std::sin(half);
    const double c = std::cos(half);
    return cplx(-2.0 * s * s, -2.0 * s * c);
}

namespace {

bool abscissa_covered(const LogGrid& g, double x) {
    if (g.branch_for(x) < 0) return false;
    const double u = std::log(std::fabs(x));
    return u >= g.u_min() && u <= g.u_max();
}

void check_map_obstructions(const GridFunction& g, const MapParams& mp,
                            double gnorm) {
    const LogGrid& grid = g.grid;
    const int m_lo = grid.domain() == Domain::FullLine ? -mp.m_max : 1;
    for (int m = m_lo; m <= mp.m_max; ++m) {
        if (m == 0) continue;
        const double x = 2.0 * kPi * m / mp.L;
        if (!abscissa_covered(grid, x)) continue;
        // high-order evaluation: the cubic scheme's h^4 floor would drown
        // genuine annihilation on coarse grids
        const cplx d = interp_highorder(g, x);
        if (std::abs(d) > mp.annihilation_tol * gnorm) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "solve_map: distribution obstruction at m = %d, "
                          "|g(2 pi m / L)| = %.3e exceeds %.3e",
                          m, std::abs(d), mp.annihilation_tol * gnorm);
            throw ObstructionError(buf, std::abs(d), m);
        }
    }
    // m = 0 (flow) obstruction: g(xi)/xi bounded near the covered minimum |xi|
    const double gmax = max_abs(g);
    for (int b = 0; b < grid.branches(); ++b)
        for (int j = 0; j < std::min(2, grid.n_per_branch()); ++j) {
            const double xi = grid.xi(b, j);
            const double q = std::abs(g.at(b, j)) / std::fabs(xi);
            if (q > 10.0 * gmax) {
                char buf[128];
                std::snprintf(buf, sizeof buf,
                              "solve_map: m = 0 (flow) obstruction, |g/xi| = "
                              "%.3e at xi = %.3e",
                              q, xi);
                throw ObstructionError(buf, q, 0);
            }
        }
}

} // namespace

GridFunction solve_map(const GridFunction& g, const MapParams& mp) {
    if (!(mp.L > 0.0) || !std::isfinite(mp.L))
        throw std::invalid_argument("solve_map: require L > 0");
    const LogGrid& grid = g.grid;
    const double gnorm = l2nu_norm(g);
    GridFunction f(grid);
    if (gnorm == 0.0) return f;

    check_map_obstructions(g, mp, gnorm);

    const int n = grid.n_per_branch();
    for (int b = 0; b < grid.branches(); ++b) {
        std::vector<cplx> vals(n);
        std::vector<char> safe(n, 1);
        std::vector<int> risky;
        for (int j = 0; j < n; ++j) {
            const double theta = grid.xi(b, j) * mp.L;
            // only near a nonzero resonance is theta mod 2pi ill-conditioned;
            // the m = 0 region divides cleanly
            if (std::fabs(theta) > kPi &&
                std::fabs(std::remainder(theta, 2.0 * kPi)) <
                    mp.resonance_guard) {
                safe[j] = 0;
                risky.push_back(j);
                continue;
            }
            vals[j] = g.at(b, j) / map_multiplier(grid.xi(b, j), mp.L);
        }
        for (int j : risky)
            vals[j] = interp_from_neighbors(grid, j, vals, safe);
        for (int j = 0; j < n; ++j) f.at(b, j) = vals[j];
    }
    return f;
}

GridFunction half_shift(const GridFunction& f, const MapParams& mp) {
    GridFunction out(f.grid);
    const int n = f.grid.n_per_branch();
    for (int b = 0; b < f.grid.branches(); ++b)
        for (int j = 0; j < n; ++j) {
            const double half = 0.5 * f.grid.xi(b, j) * mp.L;
            out.at(b, j) = f.at(b, j) * cplx(std::cos(half), -std::sin(half));
        }
    return out;
}

GridFunction make_coboundary(const GridFunction& f0, const MapParams& mp) {
    if (!(mp.L > 0.0))
        throw std::invalid_argument("make_coboundary: require L > 0");
    GridFunction g(f0.grid);
    const int n = f0.grid.n_per_branch();
    for (int b = 0; b < f0.grid.branches(); ++b)
        for (int j = 0; j < n; ++j)
            g.at(b, j) = map_multiplier(f0.grid.xi(b, j), mp.L) * f0.at(b, j);
    return g;
}

GridFunction make_twisted_annihilated(const GridFunction& base,
                                      const TwistParams& tp) {
    if (tp.lambda == 0.0)
        throw std::invalid_argument("make_twisted_annihilated: lambda != 0");
    const cplx base_at_lambda = interpolate_at(base, tp.lambda);
    GridFunction g(base.grid);
    const int n = base.grid.n_per_branch();
    // chi is 1 on a wide u-plateau around lambda, so the solver's stencils
    // near the resonance only ever see base - const
    for (int b = 0; b < base.grid.branches(); ++b)
        for (int j = 0; j < n; ++j) {
            const double ratio = base.grid.xi(b, j) / tp.lambda;
            const double chi =
                ratio > 0.0 ? u_bump(std::log(ratio), -0.5, 0.5) : 0.0;
            g.at(b, j) = base.at(b, j) - base_at_lambda * chi;
        }
    return g;
}

double map_rhs_functional(const GridFunction& g, const MapParams& mp,
                          const SobolevSpec& spec, const ReprParams& p) {
    if (!(spec.s >= 1.0))
        throw std::invalid_argument("map_rhs_functional: require s >= 1");
    if (!(spec.epsilon > 0.0))
        throw std::invalid_argument("map_rhs_functional: require epsilon > 0");
    const double s = spec.s;
    const double L = mp.L;
    const double order2 = spec.basis == SobolevBasis::XVOnly
                              ? s + 1.0 + spec.epsilon
                              : 2.0 * s + 1.0 + spec.epsilon;
    SobolevSpec green_spec = spec;
    SobolevSpec g_spec = spec;
    g_spec.s = order2;
    const double green_term = sobolev_norm(green_v(g), green_spec, p);
    const double g_term = sobolev_norm(g, g_spec, p);
    return (1.0 + std::pow(L, 2.0 * s)) / L * green_term +
           std::pow(L, spec.epsilon) * (1.0 + std::pow(L, s)) / spec.epsilon *
               g_term;
}

double csc_expansion_check(double x, int terms) {
    if (terms < 1)
        throw std::invalid_argument("csc_expansion_check: require terms >= 1");
    if (std::fabs(std::remainder(x, kPi)) < 1e-12)
        throw std::invalid_argument("csc_expansion_check: x at a pole of csc");
    double s = 1.0 / x;
    double sign = -1.0;
    for (int a = 1; a <= terms; ++a) {
        const double pa = kPi * a;
        s += sign * 2.0 * x / ((x - pa) * (x + pa));
        sign = -sign;
    }
    return std::fabs(1.0 / std::sin(x) - s);
}

} // namespace horocoho
