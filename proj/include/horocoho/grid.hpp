#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace horocoho {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Representation parameters
// ---------------------------------------------------------------------------

enum class Series { Principal, Complementary, MockDiscrete, Discrete };

/// Casimir eigenvalue mu, parameter nu = sqrt(1 - mu) (principal branch),
/// and the series tag it selects.
struct ReprParams {
    double mu = 5.0;
    cplx nu = cplx(0.0, 2.0);
    Series series = Series::Principal;
};

/// Total on finite reals: mu > 1 principal, 0 < mu < 1 complementary,
/// mu = 1 mock discrete, mu <= 0 discrete.
ReprParams classify_series(double mu);

const char* series_name(Series s);

// ---------------------------------------------------------------------------
// Logarithmic grids
// ---------------------------------------------------------------------------

enum class Domain { FullLine, PositiveHalf };

/// Uniform grid in u = log|xi|. FullLine carries two mirrored branches
/// (branch 0: xi < 0, branch 1: xi > 0); PositiveHalf one. xi = 0 is never a
/// sample point, so the measure |xi|^{-1} dxi = du is regular on the grid.
class LogGrid {
  public:
    LogGrid() = default;
    LogGrid(Domain domain, double u_min, double u_max, int n_per_branch);

    Domain domain() const { return domain_; }
    double u_min() const { return u_min_; }
    double u_max() const { return u_max_; }
    double h() const { return h_; }
    int n_per_branch() const { return n_; }
    int branches() const { return domain_ == Domain::FullLine ? 2 : 1; }
    int total_points() const { return branches() * n_; }

    double u(int j) const { return u_min_ + h_ * j; }
    double branch_sign(int b) const {
        return (domain_ == Domain::FullLine && b == 0) ? -1.0 : 1.0;
    }
    double xi(int b, int j) const { return branch_sign(b) * std::exp(u(j)); }

    /// All abscissas, branch-major (negative branch first on FullLine).
    std::vector<double> points() const;

    /// Branch whose sign matches xi, or -1 if the grid does not carry it.
    int branch_for(double xi) const;

    bool operator==(const LogGrid& o) const {
        return domain_ == o.domain_ && u_min_ == o.u_min_ &&
               u_max_ == o.u_max_ && n_ == o.n_;
    }
    bool operator!=(const LogGrid& o) const { return !(*this == o); }

  private:
    Domain domain_ = Domain::PositiveHalf;
    double u_min_ = 0.0;
    double u_max_ = 1.0;
    int n_ = 2;
    double h_ = 1.0;
};

/// Rejects n_per_branch < 2 and non-finite or unordered bounds.
LogGrid build_grid(Domain domain, double u_min, double u_max, int n_per_branch);

// ---------------------------------------------------------------------------
// Grid functions
// ---------------------------------------------------------------------------

/// Complex samples on a LogGrid, stored branch-major: samples[b*n + j].
struct GridFunction {
    LogGrid grid;
    std::vector<cplx> v;

    GridFunction() = default;
    explicit GridFunction(const LogGrid& g)
        : grid(g), v(g.total_points(), cplx(0.0)) {}

    cplx& at(int b, int j) { return v[b * grid.n_per_branch() + j]; }
    const cplx& at(int b, int j) const { return v[b * grid.n_per_branch() + j]; }
    int size() const { return static_cast<int>(v.size()); }
};

/// Pointwise sampling; a non-finite value is an error naming the offending xi.
GridFunction sample(const std::function<cplx(double)>& expr, const LogGrid& grid);

/// Local cubic Lagrange interpolation in u on the sign-matching branch.
/// Bit-exact at grid abscissas. Throws std::out_of_range outside coverage.
cplx interpolate_at(const GridFunction& f, double xi);

/// Weighted-L2 norm: sqrt(sum over branches of trapezoid(|f|^2 du)).
/// The normalization constant C_{Re nu} is fixed to 1.
double l2nu_norm(const GridFunction& f);

/// Trapezoid inner product <a, b> = sum w_j a_j conj(b_j), w = du weights.
cplx inner_l2nu(const GridFunction& a, const GridFunction& b);

// elementwise helpers (grids must match)
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const cplx& c, const GridFunction& a);
GridFunction pointwise_mul(const GridFunction& a, const GridFunction& b);

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* what);

} // namespace horocoho
