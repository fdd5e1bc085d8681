#pragma once

#include "horocoho/solvers.hpp"

namespace horocoho {

// ---------------------------------------------------------------------------
// Tensor grids for SL(2,R) x SL(2,R)
// ---------------------------------------------------------------------------

/// Samples over grid1 x grid2, row-major: v[i1 * grid2.total_points() + i2],
/// where i1, i2 are the branch-major flat indices of each factor.
struct TensorGridFunction {
    LogGrid grid1, grid2;
    std::vector<cplx> v;

    TensorGridFunction() = default;
    TensorGridFunction(const LogGrid& g1, const LogGrid& g2)
        : grid1(g1), grid2(g2),
          v(static_cast<size_t>(g1.total_points()) * g2.total_points(),
            cplx(0.0)) {}

    int n1() const { return grid1.total_points(); }
    int n2() const { return grid2.total_points(); }
    cplx& at(int i1, int i2) { return v[static_cast<size_t>(i1) * n2() + i2]; }
    const cplx& at(int i1, int i2) const {
        return v[static_cast<size_t>(i1) * n2() + i2];
    }
};

TensorGridFunction sample_tensor(
    const std::function<cplx(double, double)>& expr, const LogGrid& g1,
    const LogGrid& g2);

struct CocycleParams {
    double L1 = 1.0, L2 = 1.0; // > 0
    int m_max = 64;
    double resonance_guard = 1e-6;
    double annihilation_tol = 1e-8;
};

/// Tensor weighted-L2 norm (trapezoid in (u1, u2)).
double tensor_l2nu_norm(const TensorGridFunction& F);

/// Composition with the unipotent map in factor k: multiplication of that
/// factor's fibers by e^{-i xi_k L}. An isometry of the tensor norm.
TensorGridFunction translate_factor(const TensorGridFunction& F, int k, double L);

/// g = p o h^(1) - p, f = p o h^(2) - p: an exact cocycle pair.
std::pair<TensorGridFunction, TensorGridFunction>
make_cocycle_pair(const TensorGridFunction& p, const CocycleParams& cp);

/// Tensor norm of (f o h^(1) - f) - (g o h^(2) - g).
double cocycle_defect(const TensorGridFunction& f, const TensorGridFunction& g,
                      const CocycleParams& cp);

struct CocycleSolution {
    TensorGridFunction p;
    double second_equation_residual = 0.0; // |p o h^(2) - p - f| / scale
};

/// Solves p o h^(1) - p = g fiberwise in factor 1 (obstructions checked per
/// fiber, errors name (m, fiber index)), then enforces and reports the
/// second equation p o h^(2) - p = f to 1e-8 relative.
CocycleSolution solve_cocycle(const TensorGridFunction& f,
                              const TensorGridFunction& g,
                              const CocycleParams& cp);

/// Six-generator tensor monomial Sobolev norm of integer order
/// (U1,X1,V1,U2,X2,V2 calligraphic per factor); fractional orders by the
/// same geometric interpolation as the one-factor norm.
double tensor_sobolev_norm(const TensorGridFunction& F, double order,
                           const ReprParams& p1, const ReprParams& p2);

/// |p|_s / ((L + 1/L) max(|f|_{s+3}, |g|_{s+3})), L = max(L1, L2).
double tame_ratio(const TensorGridFunction& p, const TensorGridFunction& f,
                  const TensorGridFunction& g, const CocycleParams& cp,
                  double s, const ReprParams& p1, const ReprParams& p2);

/// |v|_{2m} / (|L_{2m} v| + |v|) with L_{2m} = sum over the six generators
/// of Y^{2m}; returns 0 for v = 0. m in {1, 2}.
double elliptic_defect(const TensorGridFunction& v, int m,
                       const ReprParams& p1, const ReprParams& p2);

// elementwise helpers (grids must match)
TensorGridFunction operator-(const TensorGridFunction& a,
                             const TensorGridFunction& b);

/// Field application along one factor of the tensor product.
TensorGridFunction apply_tensor_field(const TensorGridFunction& F, int k,
                                      FieldTag tag, const ReprParams& p);

} // namespace horocoho
