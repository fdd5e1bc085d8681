#include "horocoho/product.hpp"

#include <cmath>

namespace horocoho {

namespace {

void require_same_tensor(const TensorGridFunction& a,
                         const TensorGridFunction& b, const char* what) {
    if (a.grid1 != b.grid1 || a.grid2 != b.grid2)
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

std::vector<double> factor_xis(const LogGrid& g) {
    return g.points();
}

std::vector<double> factor_weights(const LogGrid& g) {
    std::vector<double> w(g.total_points());
    const int n = g.n_per_branch();
    for (int b = 0; b < g.branches(); ++b)
        for (int j = 0; j < n; ++j)
            w[b * n + j] = g.h() * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
    return w;
}

} // namespace

TensorGridFunction sample_tensor(
    const std::function<cplx(double, double)>& expr, const LogGrid& g1,
    const LogGrid& g2) {
    TensorGridFunction F(g1, g2);
    const auto x1 = factor_xis(g1);
    const auto x2 = factor_xis(g2);
    for (int i = 0; i < F.n1(); ++i)
        for (int k = 0; k < F.n2(); ++k) {
            const cplx val = expr(x1[i], x2[k]);
            if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
                throw std::invalid_argument("sample_tensor: non-finite value");
            F.at(i, k) = val;
        }
    return F;
}

double tensor_l2nu_norm(const TensorGridFunction& F) {
    const auto w1 = factor_weights(F.grid1);
    const auto w2 = factor_weights(F.grid2);
    double acc = 0.0;
    for (int i = 0; i < F.n1(); ++i) {
        double row = 0.0;
        for (int k = 0; k < F.n2(); ++k)
            row += w2[k] * std::norm(F.at(i, k));
        acc += w1[i] * row;
    }
    return std::sqrt(acc);
}

TensorGridFunction translate_factor(const TensorGridFunction& F, int k,
                                    double L) {
    if (k != 1 && k != 2)
        throw std::invalid_argument("translate_factor: k must be 1 or 2");
    const auto xs = factor_xis(k == 1 ? F.grid1 : F.grid2);
    std::vector<cplx> phase(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const double th = xs[i] * L;
        phase[i] = cplx(std::cos(th), -std::sin(th));
    }
    TensorGridFunction out = F;
    if (k == 1) {
        for (int i = 0; i < F.n1(); ++i)
            for (int j = 0; j < F.n2(); ++j)
                out.at(i, j) *= phase[i];
    } else {
        for (int i = 0; i < F.n1(); ++i)
            for (int j = 0; j < F.n2(); ++j)
                out.at(i, j) *= phase[j];
    }
    return out;
}

TensorGridFunction operator-(const TensorGridFunction& a,
                             const TensorGridFunction& b) {
    require_same_tensor(a, b, "operator-");
    TensorGridFunction out = a;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
    return out;
}

std::pair<TensorGridFunction, TensorGridFunction>
make_cocycle_pair(const TensorGridFunction& p, const CocycleParams& cp) {
    return {translate_factor(p, 1, cp.L1) - p, translate_factor(p, 2, cp.L2) - p};
}

double cocycle_defect(const TensorGridFunction& f, const TensorGridFunction& g,
                      const CocycleParams& cp) {
    require_same_tensor(f, g, "cocycle_defect");
    return tensor_l2nu_norm((translate_factor(f, 1, cp.L1) - f) -
                            (translate_factor(g, 2, cp.L2) - g));
}

CocycleSolution solve_cocycle(const TensorGridFunction& f,
                              const TensorGridFunction& g,
                              const CocycleParams& cp) {
    require_same_tensor(f, g, "solve_cocycle");
    const double fn = tensor_l2nu_norm(f);
    const double gn = tensor_l2nu_norm(g);
    CocycleSolution sol;
    sol.p = TensorGridFunction(f.grid1, f.grid2);
    if (fn == 0.0 && gn == 0.0) return sol;

    const double defect = cocycle_defect(f, g, cp);
    if (defect > cp.annihilation_tol * std::max(fn, gn))
        throw std::invalid_argument(
            "solve_cocycle: inputs do not satisfy the cocycle equation");

    MapParams fiber_params;
    fiber_params.L = cp.L1;
    fiber_params.m_max = cp.m_max;
    fiber_params.resonance_guard = cp.resonance_guard;
    fiber_params.annihilation_tol = cp.annihilation_tol;

    // factor-1 map equation on each grid2 fiber
    const int n2 = f.n2();
    for (int k = 0; k < n2; ++k) {
        GridFunction fib(f.grid1);
        for (int i = 0; i < f.n1(); ++i) fib.v[i] = g.at(i, k);
        try {
            const GridFunction pf = solve_map(fib, fiber_params);
            for (int i = 0; i < f.n1(); ++i) sol.p.at(i, k) = pf.v[i];
        } catch (const ObstructionError& e) {
            throw ObstructionError("solve_cocycle: fiber k-index " +
                                       std::to_string(k) + ": " + e.what(),
                                   e.measured(), e.m_index());
        }
    }

    const double res =
        tensor_l2nu_norm((translate_factor(sol.p, 2, cp.L2) - sol.p) - f);
    sol.second_equation_residual = res / std::max(fn, gn);
    if (sol.second_equation_residual > 1e-8)
        throw std::runtime_error(
            "solve_cocycle: second-equation residual " +
            std::to_string(sol.second_equation_residual) + " exceeds 1e-8");
    return sol;
}

TensorGridFunction apply_tensor_field(const TensorGridFunction& F, int k,
                                      FieldTag tag, const ReprParams& p) {
    if (k != 1 && k != 2)
        throw std::invalid_argument("apply_tensor_field: k must be 1 or 2");
    const LogGrid& fg = k == 1 ? F.grid1 : F.grid2;
    const int n = fg.n_per_branch();
    TensorGridFunction out(F.grid1, F.grid2);
    std::vector<cplx> in(n), res(n);
    std::vector<double> xi(n);

    const int fibers = k == 1 ? F.n2() : F.n1();
    for (int b = 0; b < fg.branches(); ++b) {
        for (int j = 0; j < n; ++j) xi[j] = fg.xi(b, j);
        for (int fib = 0; fib < fibers; ++fib) {
            for (int j = 0; j < n; ++j) {
                const int flat = b * n + j;
                in[j] = k == 1 ? F.at(flat, fib) : F.at(fib, flat);
            }
            detail::apply_field_branch(in.data(), res.data(), xi.data(), n,
                                       fg.h(), tag, p.nu);
            for (int j = 0; j < n; ++j) {
                const int flat = b * n + j;
                (k == 1 ? out.at(flat, fib) : out.at(fib, flat)) = res[j];
            }
        }
    }
    return out;
}

namespace {

double sq(double x) { return x * x; }

// suffix-sharing enumeration over six-generator monomials, factor-2 word
// applied first (U1^a1 X1^b1 V1^c1 U2^a2 X2^b2 V2^c2 F)
struct TensorStage {
    int factor;
    FieldTag tag;
};

void tensor_monomial_sumsq(const TensorGridFunction& cur,
                           const std::vector<TensorStage>& stages, size_t stage,
                           int used, int budget, const ReprParams& p1,
                           const ReprParams& p2, double& acc) {
    if (stage == stages.size()) {
        acc += sq(tensor_l2nu_norm(cur));
        return;
    }
    tensor_monomial_sumsq(cur, stages, stage + 1, used, budget, p1, p2, acc);
    TensorGridFunction t = cur;
    for (int e = 1; used + e <= budget; ++e) {
        t = apply_tensor_field(t, stages[stage].factor, stages[stage].tag,
                               stages[stage].factor == 1 ? p1 : p2);
        tensor_monomial_sumsq(t, stages, stage + 1, used + e, budget, p1, p2,
                              acc);
    }
}

double integer_tensor_sobolev(const TensorGridFunction& F, int order,
                              const ReprParams& p1, const ReprParams& p2) {
    if (order == 0) return tensor_l2nu_norm(F);
    const std::vector<TensorStage> stages{
        {2, {Family::Calligraphic, Gen::V}}, {2, {Family::Calligraphic, Gen::X}},
        {2, {Family::Calligraphic, Gen::U}}, {1, {Family::Calligraphic, Gen::V}},
        {1, {Family::Calligraphic, Gen::X}}, {1, {Family::Calligraphic, Gen::U}}};
    double acc = 0.0;
    tensor_monomial_sumsq(F, stages, 0, 0, order, p1, p2, acc);
    return std::sqrt(acc);
}

} // namespace

double tensor_sobolev_norm(const TensorGridFunction& F, double order,
                           const ReprParams& p1, const ReprParams& p2) {
    if (!(order >= 0.0))
        throw std::invalid_argument("tensor_sobolev_norm: order >= 0");
    const double fl = std::floor(order);
    const int lo = static_cast<int>(fl);
    const int hi = (order == fl) ? lo : lo + 1;
    if (hi > kMaxMonomialOrder)
        throw std::invalid_argument("tensor_sobolev_norm: order exceeds maximum");
    const double nlo = integer_tensor_sobolev(F, lo, p1, p2);
    if (hi == lo) return nlo;
    const double nhi = integer_tensor_sobolev(F, hi, p1, p2);
    if (nlo == 0.0 || nhi == 0.0) return 0.0;
    const double theta = order - fl;
    return std::exp((1.0 - theta) * std::log(nlo) + theta * std::log(nhi));
}

double tame_ratio(const TensorGridFunction& p, const TensorGridFunction& f,
                  const TensorGridFunction& g, const CocycleParams& cp,
                  double s, const ReprParams& p1, const ReprParams& p2) {
    const double L = std::max(cp.L1, cp.L2);
    const double num = tensor_sobolev_norm(p, s, p1, p2);
    const double den =
        (L + 1.0 / L) * std::max(tensor_sobolev_norm(f, s + 3.0, p1, p2),
                                 tensor_sobolev_norm(g, s + 3.0, p1, p2));
    if (den == 0.0) {
        if (num == 0.0) return 0.0;
        throw ObstructionError(
            "tame_ratio: f = g = 0 with p != 0 (obstruction-class witness)",
            num);
    }
    return num / den;
}

double elliptic_defect(const TensorGridFunction& v, int m,
                       const ReprParams& p1, const ReprParams& p2) {
    if (m != 1 && m != 2)
        throw std::invalid_argument("elliptic_defect: m must be 1 or 2");
    const double base = tensor_l2nu_norm(v);
    if (base == 0.0) return 0.0;

    TensorGridFunction lv(v.grid1, v.grid2);
    for (int factor : {1, 2})
        for (Gen gen : {Gen::U, Gen::X, Gen::V}) {
            TensorGridFunction t = v;
            for (int i = 0; i < 2 * m; ++i)
                t = apply_tensor_field(t, factor, {Family::Calligraphic, gen},
                                       factor == 1 ? p1 : p2);
            for (size_t i = 0; i < lv.v.size(); ++i) lv.v[i] += t.v[i];
        }
    const double num = tensor_sobolev_norm(v, 2.0 * m, p1, p2);
    return num / (tensor_l2nu_norm(lv) + base);
}

} // namespace horocoho
