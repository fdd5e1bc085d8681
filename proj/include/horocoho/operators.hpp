#pragma once

#include "horocoho/grid.hpp"

#include <optional>

namespace horocoho {

// ---------------------------------------------------------------------------
// Vector fields in the Fourier models
// ---------------------------------------------------------------------------
//
// Calligraphic family (weighted model, measure |xi|^{-1} dxi):
//   V = -i xi,  X = -2 xi d/dxi,  U = i((nu^2-1)/(4 xi) - xi d^2/dxi^2)
// Hat family (plain Fourier transform of the line model):
//   V = -i xi,  X = (nu-1) - 2 xi d/dxi,  U = i((nu-1) d/dxi - xi d^2/dxi^2)
//
// Derivatives are taken in u = log|xi|, where X is constant-coefficient:
//   d/dxi = xi^{-1} d/du,  d^2/dxi^2 = xi^{-2}(d^2/du^2 - d/du),
// with 4th-order central stencils and matching-order one-sided stencils at
// branch ends.

enum class Family { Calligraphic, Hat };
enum class Gen { U, X, V };

struct FieldTag {
    Family family = Family::Calligraphic;
    Gen which = Gen::V;
};

/// Exponents of U^a X^b V^c (V acts first). Total order capped at 8.
struct Monomial {
    int u_pow = 0;
    int x_pow = 0;
    int v_pow = 0;
    int total() const { return u_pow + x_pow + v_pow; }
};

inline constexpr int kMaxMonomialOrder = 8;

GridFunction apply_field(const GridFunction& f, FieldTag tag, const ReprParams& p);

GridFunction apply_monomial(const GridFunction& f, const Monomial& m,
                            Family family, const ReprParams& p);

// ---------------------------------------------------------------------------
// Sobolev norms
// ---------------------------------------------------------------------------

enum class SobolevBasis { FullUXV, XVOnly, UOnly };

struct SobolevSpec {
    double s = 0.0;
    Family family = Family::Calligraphic;
    SobolevBasis basis = SobolevBasis::FullUXV;
    double epsilon = 0.5; // regularity-loss parameter where applicable

    SobolevSpec() = default;
    SobolevSpec(double s_, Family fam, SobolevBasis b, double eps = 0.5)
        : s(s_), family(fam), basis(b), epsilon(eps) {}
};

/// Integer s: monomial surrogate sums
///   FullUXV: sqrt(sum_{a+b+c<=s} |U^a X^b V^c f|^2)
///   XVOnly : sqrt(sum_{b+c<=s}   |X^b V^c f|^2)
///   UOnly  : sqrt(sum_{j<=s} binom(s,j) |U^j f|^2)   (exact for skew-adjoint U)
/// Fractional s: |f|_s = |f|_floor^{1-theta} |f|_ceil^{theta}, theta = s-floor.
double sobolev_norm(const GridFunction& f, const SobolevSpec& spec,
                    const ReprParams& p);

/// All integer-order FullUXV/XVOnly norms 0..max_order in one pass
/// (shared monomial prefixes). Entry k is the order-k norm.
std::vector<double> sobolev_norms_through(const GridFunction& f, int max_order,
                                          Family family, SobolevBasis basis,
                                          const ReprParams& p);

// ---------------------------------------------------------------------------
// Green operator, argument scaling, identity checkers
// ---------------------------------------------------------------------------

/// G(xi) = i g(xi)/xi; right inverse of V (V G(g) = g up to rounding).
GridFunction green_v(const GridFunction& g);

/// f_lambda(xi) = f(lambda xi) via u-shift by log(lambda); exact index shift
/// when log(lambda) is an integer multiple of h, cubic resampling otherwise.
/// Errors if samples carrying mass (> 1e-12 of max|f|) leave coverage.
GridFunction scale_arg(const GridFunction& f, double lambda);

struct ScaledField {
    FieldTag tag;
    cplx coeff = cplx(1.0);
};

/// |(AB - BA - c C) f| / |f|_2, with the order-2 FullUXV norm of the fields'
/// family as the reference scale. C omitted when absent.
double commutator_defect(FieldTag A, FieldTag B,
                         const std::optional<ScaledField>& C,
                         const GridFunction& f, const ReprParams& p);

/// Relative discrepancy between U^beta X^alpha (g1 g2) computed directly and
/// via the Leibniz expansion generated by recursive single-step product rules
/// (calligraphic family). alpha + beta <= 4.
double verify_leibniz(const GridFunction& g1, const GridFunction& g2,
                      int alpha, int beta, const ReprParams& p);

/// Generic Lagrange interpolation through (us[i], vals[i]) evaluated at x.
cplx lagrange_eval(const std::vector<double>& us, const std::vector<cplx>& vals,
                   double x);

namespace fd {
/// 4th-order d/du along one branch (one-sided stencils near the ends).
void d1u(const cplx* in, cplx* out, int n, double h);
/// 4th-order d^2/du^2 along one branch.
void d2u(const cplx* in, cplx* out, int n, double h);
} // namespace fd

namespace detail {
/// One branch of a field application; shared with the tensor-product module.
void apply_field_branch(const cplx* in, cplx* out, const double* xi, int n,
                        double h, FieldTag tag, cplx nu);
} // namespace detail

} // namespace horocoho
