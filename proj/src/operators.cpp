#include "horocoho/operators.hpp"

#include <cmath>

namespace horocoho {

namespace fd {

void d1u(const cplx* in, cplx* out, int n, double h) {
    const double s = 1.0 / (12.0 * h);
    out[0] = s * (-25.0 * in[0] + 48.0 * in[1] - 36.0 * in[2] + 16.0 * in[3] -
                  3.0 * in[4]);
    out[1] = s * (-3.0 * in[0] - 10.0 * in[1] + 18.0 * in[2] - 6.0 * in[3] +
                  1.0 * in[4]);
    for (int j = 2; j < n - 2; ++j)
        out[j] = s * (in[j - 2] - 8.0 * in[j - 1] + 8.0 * in[j + 1] - in[j + 2]);
    out[n - 2] = s * (-1.0 * in[n - 5] + 6.0 * in[n - 4] - 18.0 * in[n - 3] +
                      10.0 * in[n - 2] + 3.0 * in[n - 1]);
    out[n - 1] = s * (3.0 * in[n - 5] - 16.0 * in[n - 4] + 36.0 * in[n - 3] -
                      48.0 * in[n - 2] + 25.0 * in[n - 1]);
}

void d2u(const cplx* in, cplx* out, int n, double h) {
    const double s = 1.0 / (12.0 * h * h);
    out[0] = s * (45.0 * in[0] - 154.0 * in[1] + 214.0 * in[2] - 156.0 * in[3] +
                  61.0 * in[4] - 10.0 * in[5]);
    out[1] = s * (10.0 * in[0] - 15.0 * in[1] - 4.0 * in[2] + 14.0 * in[3] -
                  6.0 * in[4] + 1.0 * in[5]);
    for (int j = 2; j < n - 2; ++j)
        out[j] = s * (-in[j - 2] + 16.0 * in[j - 1] - 30.0 * in[j] +
                      16.0 * in[j + 1] - in[j + 2]);
    out[n - 2] = s * (1.0 * in[n - 6] - 6.0 * in[n - 5] + 14.0 * in[n - 4] -
                      4.0 * in[n - 3] - 15.0 * in[n - 2] + 10.0 * in[n - 1]);
    out[n - 1] = s * (-10.0 * in[n - 6] + 61.0 * in[n - 5] - 156.0 * in[n - 4] +
                      214.0 * in[n - 3] - 154.0 * in[n - 2] + 45.0 * in[n - 1]);
}

} // namespace fd

namespace {

void require_stencil(const LogGrid& g) {
    if (g.n_per_branch() < 6)
        throw std::invalid_argument("apply_field: grid too small for stencil");
}

} // namespace

namespace detail {

void apply_field_branch(const cplx* in, cplx* out, const double* xi, int n,
                        double h, FieldTag tag, cplx nu) {
    const cplx I(0.0, 1.0);
    if (tag.which == Gen::V) {
        for (int j = 0; j < n; ++j) out[j] = cplx(0.0, -xi[j]) * in[j];
        return;
    }
    if (n < 6)
        throw std::invalid_argument("apply_field: grid too small for stencil");
    std::vector<cplx> d1(n), d2(n);
    fd::d1u(in, d1.data(), n, h);
    if (tag.which == Gen::U) fd::d2u(in, d2.data(), n, h);

    if (tag.which == Gen::X) {
        if (tag.family == Family::Calligraphic) {
            for (int j = 0; j < n; ++j) out[j] = -2.0 * d1[j];
        } else {
            const cplx c = nu - 1.0;
            for (int j = 0; j < n; ++j) out[j] = c * in[j] - 2.0 * d1[j];
        }
    } else { // Gen::U
        if (tag.family == Family::Calligraphic) {
            const cplx c = (nu * nu - 1.0) * 0.25;
            for (int j = 0; j < n; ++j)
                out[j] = I * (c / xi[j] * in[j] - (d2[j] - d1[j]) / xi[j]);
        } else {
            for (int j = 0; j < n; ++j)
                out[j] = I / xi[j] * (nu * d1[j] - d2[j]);
        }
    }
}

} // namespace detail

GridFunction apply_field(const GridFunction& f, FieldTag tag, const ReprParams& p) {
    const LogGrid& g = f.grid;
    const int n = g.n_per_branch();
    GridFunction out(g);
    if (tag.which != Gen::V) require_stencil(g);

    std::vector<double> xi(n);
    for (int b = 0; b < g.branches(); ++b) {
        for (int j = 0; j < n; ++j) xi[j] = g.xi(b, j);
        detail::apply_field_branch(&f.v[b * n], &out.v[b * n], xi.data(), n,
                                   g.h(), tag, p.nu);
    }
    return out;
}

GridFunction apply_monomial(const GridFunction& f, const Monomial& m,
                            Family family, const ReprParams& p) {
    if (m.u_pow < 0 || m.x_pow < 0 || m.v_pow < 0)
        throw std::invalid_argument("apply_monomial: negative exponent");
    if (m.total() > kMaxMonomialOrder)
        throw std::invalid_argument("apply_monomial: order exceeds maximum");
    GridFunction cur = f;
    for (int i = 0; i < m.v_pow; ++i)
        cur = apply_field(cur, {family, Gen::V}, p);
    for (int i = 0; i < m.x_pow; ++i)
        cur = apply_field(cur, {family, Gen::X}, p);
    for (int i = 0; i < m.u_pow; ++i)
        cur = apply_field(cur, {family, Gen::U}, p);
    return cur;
}

namespace {

double sq(double x) { return x * x; }

// Accumulates |monomial f|^2 by total degree over exponent tuples that sum to
// at most `budget`, sharing prefixes: one field application per monomial.
void monomial_sumsq(const GridFunction& cur, const std::vector<FieldTag>& stages,
                    size_t stage, int used, int budget, const ReprParams& p,
                    std::vector<double>& by_degree) {
    if (stage == stages.size()) {
        by_degree[used] += sq(l2nu_norm(cur));
        return;
    }
    monomial_sumsq(cur, stages, stage + 1, used, budget, p, by_degree);
    GridFunction t = cur;
    for (int e = 1; used + e <= budget; ++e) {
        t = apply_field(t, stages[stage], p);
        monomial_sumsq(t, stages, stage + 1, used + e, budget, p, by_degree);
    }
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double integer_sobolev(const GridFunction& f, int s, Family family,
                       SobolevBasis basis, const ReprParams& p) {
    if (s == 0) return l2nu_norm(f);
    if (basis == SobolevBasis::UOnly) {
        double acc = 0.0;
        GridFunction cur = f;
        acc += binom(s, 0) * sq(l2nu_norm(cur));
        for (int j = 1; j <= s; ++j) {
            cur = apply_field(cur, {family, Gen::U}, p);
            acc += binom(s, j) * sq(l2nu_norm(cur));
        }
        return std::sqrt(acc);
    }
    std::vector<FieldTag> stages;
    stages.push_back({family, Gen::V});
    stages.push_back({family, Gen::X});
    if (basis == SobolevBasis::FullUXV) stages.push_back({family, Gen::U});
    std::vector<double> by_degree(s + 1, 0.0);
    monomial_sumsq(f, stages, 0, 0, s, p, by_degree);
    double acc = 0.0;
    for (double d : by_degree) acc += d;
    return std::sqrt(acc);
}

} // namespace

double sobolev_norm(const GridFunction& f, const SobolevSpec& spec,
                    const ReprParams& p) {
    if (!(spec.s >= 0.0))
        throw std::invalid_argument("sobolev_norm: require s >= 0");
    const double fl = std::floor(spec.s);
    const int lo = static_cast<int>(fl);
    const int hi = (spec.s == fl) ? lo : lo + 1;
    if (hi > kMaxMonomialOrder)
        throw std::invalid_argument("sobolev_norm: order exceeds maximum");
    const double nlo = integer_sobolev(f, lo, spec.family, spec.basis, p);
    if (hi == lo) return nlo;
    const double nhi = integer_sobolev(f, hi, spec.family, spec.basis, p);
    if (nlo == 0.0 || nhi == 0.0) return 0.0;
    const double theta = spec.s - fl;
    return std::exp((1.0 - theta) * std::log(nlo) + theta * std::log(nhi));
}

std::vector<double> sobolev_norms_through(const GridFunction& f, int max_order,
                                          Family family, SobolevBasis basis,
                                          const ReprParams& p) {
    if (max_order < 0 || max_order > kMaxMonomialOrder)
        throw std::invalid_argument("sobolev_norms_through: bad order");
    if (basis == SobolevBasis::UOnly)
        throw std::invalid_argument("sobolev_norms_through: UOnly unsupported");
    std::vector<FieldTag> stages;
    stages.push_back({family, Gen::V});
    stages.push_back({family, Gen::X});
    if (basis == SobolevBasis::FullUXV) stages.push_back({family, Gen::U});
    std::vector<double> by_degree(max_order + 1, 0.0);
    monomial_sumsq(f, stages, 0, 0, max_order, p, by_degree);
    std::vector<double> norms(max_order + 1, 0.0);
    double acc = 0.0;
    for (int k = 0; k <= max_order; ++k) {
        acc += by_degree[k];
        norms[k] = std::sqrt(acc);
    }
    return norms;
}

GridFunction green_v(const GridFunction& g) {
    GridFunction out(g.grid);
    const int n = g.grid.n_per_branch();
    const cplx I(0.0, 1.0);
    for (int b = 0; b < g.grid.branches(); ++b)
        for (int j = 0; j < n; ++j)
            out.at(b, j) = I * g.at(b, j) / g.grid.xi(b, j);
    return out;
}

GridFunction scale_arg(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("scale_arg: require lambda > 0");
    const LogGrid& g = f.grid;
    const int n = g.n_per_branch();
    const double a = std::log(lambda);
    const double m = a / g.h();
    const double mr = std::round(m);
    GridFunction out(g);

    double fmax = 0.0;
    for (const cplx& z : f.v) fmax = std::max(fmax, std::abs(z));

    const bool lattice = std::fabs(m - mr) <= 1e-9 * std::max(1.0, std::fabs(m));
    if (lattice) {
        const int k = static_cast<int>(mr);
        for (int b = 0; b < g.branches(); ++b)
            for (int j = 0; j < n; ++j) {
                const int src = j + k;
                out.at(b, j) = (src >= 0 && src < n) ? f.at(b, src) : cplx(0.0);
            }
        // samples shifted past the window must be negligible
        for (int b = 0; b < g.branches(); ++b)
            for (int j = 0; j < n; ++j) {
                const bool kept = (j - k >= 0 && j - k < n);
                if (!kept && std::abs(f.at(b, j)) > 1e-12 * fmax)
                    throw std::invalid_argument(
                        "scale_arg: support pushed outside grid coverage");
            }
        return out;
    }

    for (int b = 0; b < g.branches(); ++b) {
        const double sign = g.branch_sign(b);
        for (int j = 0; j < n; ++j) {
            const double u_t = g.u(j) + a;
            if (u_t < g.u_min() || u_t > g.u_max()) {
                out.at(b, j) = cplx(0.0);
                continue;
            }
            out.at(b, j) = interpolate_at(f, sign * std::exp(u_t));
        }
    }
    for (int b = 0; b < g.branches(); ++b)
        for (int j = 0; j < n; ++j) {
            const double u_back = g.u(j) - a;
            if ((u_back < g.u_min() || u_back > g.u_max()) &&
                std::abs(f.at(b, j)) > 1e-12 * fmax)
                throw std::invalid_argument(
                    "scale_arg: support pushed outside grid coverage");
        }
    return out;
}

double commutator_defect(FieldTag A, FieldTag B,
                         const std::optional<ScaledField>& C,
                         const GridFunction& f, const ReprParams& p) {
    GridFunction d = apply_field(apply_field(f, B, p), A, p) -
                     apply_field(apply_field(f, A, p), B, p);
    if (C)
        d = d - (C->coeff * apply_field(f, C->tag, p));
    const double ref =
        sobolev_norm(f, SobolevSpec(2.0, A.family, SobolevBasis::FullUXV), p);
    if (ref == 0.0) return l2nu_norm(d);
    return l2nu_norm(d) / ref;
}

namespace {

// primitive operators appearing in the calligraphic product rules
enum class PrimOp { CalU, CalX, Dxi, XiD2 };

struct LeibTerm {
    cplx coeff;
    std::vector<PrimOp> ops1; // applied to g1 in index order
    std::vector<PrimOp> ops2; // applied to g2 in index order
};

GridFunction apply_prim(const GridFunction& f, PrimOp op, const ReprParams& p) {
    switch (op) {
    case PrimOp::CalU: return apply_field(f, {Family::Calligraphic, Gen::U}, p);
    case PrimOp::CalX: return apply_field(f, {Family::Calligraphic, Gen::X}, p);
    default: break;
    }
    // d/dxi = xi^{-1} d/du,  xi d^2/dxi^2 = xi^{-1}(d^2/du^2 - d/du)
    const LogGrid& g = f.grid;
    const int n = g.n_per_branch();
    require_stencil(g);
    GridFunction out(g);
    std::vector<cplx> d1(n), d2(n);
    for (int b = 0; b < g.branches(); ++b) {
        const cplx* in = &f.v[b * n];
        fd::d1u(in, d1.data(), n, g.h());
        if (op == PrimOp::XiD2) fd::d2u(in, d2.data(), n, g.h());
        for (int j = 0; j < n; ++j) {
            const double xi = g.xi(b, j);
            out.at(b, j) = (op == PrimOp::Dxi) ? d1[j] / xi
                                               : (d2[j] - d1[j]) / xi;
        }
    }
    return out;
}

} // namespace

double verify_leibniz(const GridFunction& g1, const GridFunction& g2,
                      int alpha, int beta, const ReprParams& p) {
    if (alpha < 0 || beta < 0 || alpha + beta > 4)
        throw std::invalid_argument("verify_leibniz: require alpha + beta <= 4");
    require_same_grid(g1, g2, "verify_leibniz");
    const cplx I(0.0, 1.0);

    // single-step rules:
    //   X(FG) = (XF)G + F(XG)
    //   U(FG) = (UF)G + i (XF)(d/dxi G) - i F(xi d^2/dxi^2 G)
    std::vector<LeibTerm> terms{{cplx(1.0), {}, {}}};
    for (int step = 0; step < alpha; ++step) {
        std::vector<LeibTerm> next;
        next.reserve(terms.size() * 2);
        for (const LeibTerm& t : terms) {
            LeibTerm a = t;
            a.ops1.push_back(PrimOp::CalX);
            next.push_back(std::move(a));
            LeibTerm b = t;
            b.ops2.push_back(PrimOp::CalX);
            next.push_back(std::move(b));
        }
        terms = std::move(next);
    }
    for (int step = 0; step < beta; ++step) {
        std::vector<LeibTerm> next;
        next.reserve(terms.size() * 3);
        for (const LeibTerm& t : terms) {
            LeibTerm a = t;
            a.ops1.push_back(PrimOp::CalU);
            next.push_back(std::move(a));
            LeibTerm b = t;
            b.coeff *= I;
            b.ops1.push_back(PrimOp::CalX);
            b.ops2.push_back(PrimOp::Dxi);
            next.push_back(std::move(b));
            LeibTerm c = t;
            c.coeff *= -I;
            c.ops2.push_back(PrimOp::XiD2);
            next.push_back(std::move(c));
        }
        terms = std::move(next);
    }

    GridFunction expansion(g1.grid);
    for (const LeibTerm& t : terms) {
        GridFunction a = g1;
        for (PrimOp op : t.ops1) a = apply_prim(a, op, p);
        GridFunction b = g2;
        for (PrimOp op : t.ops2) b = apply_prim(b, op, p);
        expansion = expansion + (t.coeff * pointwise_mul(a, b));
    }

    const GridFunction direct = apply_monomial(
        pointwise_mul(g1, g2), {beta, alpha, 0}, Family::Calligraphic, p);
    const double denom = l2nu_norm(direct);
    const double diff = l2nu_norm(direct - expansion);
    return denom == 0.0 ? diff : diff / denom;
}

cplx lagrange_eval(const std::vector<double>& us, const std::vector<cplx>& vals,
                   double x) {
    cplx acc(0.0);
    const size_t m = us.size();
    for (size_t i = 0; i < m; ++i) {
        double w = 1.0;
        for (size_t k = 0; k < m; ++k) {
            if (k == i) continue;
            w *= (x - us[k]) / (us[i] - us[k]);
        }
        acc += w * vals[i];
    }
    return acc;
}

} // namespace horocoho
