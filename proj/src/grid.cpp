#include "horocoho/grid.hpp"

#include <cmath>
#include <cstdio>

namespace horocoho {

ReprParams classify_series(double mu) {
    if (!std::isfinite(mu))
        throw std::invalid_argument("classify_series: mu must be finite");
    ReprParams p;
    p.mu = mu;
    if (mu > 1.0) {
        // nu purely imaginary, nonnegative imaginary part
        p.nu = cplx(0.0, std::sqrt(mu - 1.0));
        p.series = Series::Principal;
    } else if (mu == 1.0) {
        p.nu = cplx(0.0, 0.0);
        p.series = Series::MockDiscrete;
    } else if (mu > 0.0) {
        p.nu = cplx(std::sqrt(1.0 - mu), 0.0);
        p.series = Series::Complementary;
    } else {
        p.nu = cplx(std::sqrt(1.0 - mu), 0.0);
        p.series = Series::Discrete;
    }
    return p;
}

const char* series_name(Series s) {
    switch (s) {
    case Series::Principal: return "principal";
    case Series::Complementary: return "complementary";
    case Series::MockDiscrete: return "mock-discrete";
    case Series::Discrete: return "discrete";
    }
    return "?";
}

LogGrid::LogGrid(Domain domain, double u_min, double u_max, int n_per_branch)
    : domain_(domain), u_min_(u_min), u_max_(u_max), n_(n_per_branch) {
    if (!std::isfinite(u_min) || !std::isfinite(u_max))
        throw std::invalid_argument("LogGrid: bounds must be finite");
    if (!(u_min < u_max))
        throw std::invalid_argument("LogGrid: require u_min < u_max");
    if (n_per_branch < 2)
        throw std::invalid_argument("LogGrid: require n_per_branch >= 2");
    h_ = (u_max - u_min) / (n_per_branch - 1);
}

std::vector<double> LogGrid::points() const {
    std::vector<double> out;
    out.reserve(total_points());
    for (int b = 0; b < branches(); ++b)
        for (int j = 0; j < n_; ++j)
            out.push_back(xi(b, j));
    return out;
}

int LogGrid::branch_for(double x) const {
    if (x > 0.0)
        return domain_ == Domain::FullLine ? 1 : 0;
    if (x < 0.0 && domain_ == Domain::FullLine)
        return 0;
    return -1;
}

LogGrid build_grid(Domain domain, double u_min, double u_max, int n_per_branch) {
    return LogGrid(domain, u_min, u_max, n_per_branch);
}

GridFunction sample(const std::function<cplx(double)>& expr, const LogGrid& grid) {
    GridFunction f(grid);
    for (int b = 0; b < grid.branches(); ++b) {
        for (int j = 0; j < grid.n_per_branch(); ++j) {
            const double x = grid.xi(b, j);
            const cplx val = expr(x);
            if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
                char buf[96];
                std::snprintf(buf, sizeof buf,
                              "sample: non-finite value at xi = %.17g", x);
                throw std::invalid_argument(buf);
            }
            f.at(b, j) = val;
        }
    }
    return f;
}

cplx interpolate_at(const GridFunction& f, double x) {
    const LogGrid& g = f.grid;
    const int b = g.branch_for(x);
    if (b < 0)
        throw std::out_of_range("interpolate_at: xi not on a covered branch");
    const double u = std::log(std::fabs(x));
    const int n = g.n_per_branch();
    const double t = (u - g.u_min()) / g.h();
    if (t < 0.0 || t > n - 1.0)
        throw std::out_of_range("interpolate_at: xi outside grid coverage");

    // nodal hits are exact
    const int jn = static_cast<int>(std::lround(t));
    if (jn >= 0 && jn < n && x == g.xi(b, jn))
        return f.at(b, jn);

    // left stencil at exact midpoints (floor does this)
    int j0 = static_cast<int>(std::floor(t));
    int k0 = j0 - 1;
    if (k0 < 0) k0 = 0;
    if (k0 > n - 4) k0 = n - 4;

    cplx acc(0.0);
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        const double ui = g.u(k0 + i);
        for (int m = 0; m < 4; ++m) {
            if (m == i) continue;
            const double um = g.u(k0 + m);
            w *= (u - um) / (ui - um);
        }
        acc += w * f.at(b, k0 + i);
    }
    return acc;
}

double l2nu_norm(const GridFunction& f) {
    const int n = f.grid.n_per_branch();
    const double h = f.grid.h();
    double total = 0.0;
    for (int b = 0; b < f.grid.branches(); ++b) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double m = std::norm(f.at(b, j));
            s += (j == 0 || j == n - 1) ? 0.5 * m : m;
        }
        total += h * s;
    }
    return std::sqrt(total);
}

cplx inner_l2nu(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "inner_l2nu");
    const int n = a.grid.n_per_branch();
    const double h = a.grid.h();
    cplx total(0.0);
    for (int br = 0; br < a.grid.branches(); ++br) {
        cplx s(0.0);
        for (int j = 0; j < n; ++j) {
            const cplx t = a.at(br, j) * std::conj(b.at(br, j));
            s += (j == 0 || j == n - 1) ? 0.5 * t : t;
        }
        total += h * s;
    }
    return total;
}

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* what) {
    if (a.grid != b.grid)
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "operator+");
    GridFunction out = a;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
    return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "operator-");
    GridFunction out = a;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
    return out;
}

GridFunction operator*(const cplx& c, const GridFunction& a) {
    GridFunction out = a;
    for (auto& z : out.v) z *= c;
    return out;
}

GridFunction pointwise_mul(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "pointwise_mul");
    GridFunction out = a;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
    return out;
}

} // namespace horocoho
