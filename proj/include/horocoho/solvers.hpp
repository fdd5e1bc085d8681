#pragma once

#include "horocoho/operators.hpp"

namespace horocoho {

// ---------------------------------------------------------------------------
// Twisted equation (V + i lambda) f = g
// ---------------------------------------------------------------------------

struct TwistParams {
    double lambda = 1.0;           // != 0
    double annihilation_tol = 1e-8;
};

/// Raised when a required invariant distribution does not annihilate g.
/// Carries the measured |D(g)| and, for map resonances, the index m.
class ObstructionError : public std::runtime_error {
  public:
    ObstructionError(const std::string& msg, double measured, int m = 0)
        : std::runtime_error(msg), measured_(measured), m_(m) {}
    double measured() const { return measured_; }
    int m_index() const { return m_; }

  private:
    double measured_;
    int m_;
};

/// D(g) = g(lambda): the spanning invariant distribution of the twisted
/// equation, evaluated by interpolation.
cplx eval_twist_distribution(const GridFunction& g, const TwistParams& tp);

/// f(xi) = i g(xi)/(xi - lambda) at division-safe nodes; the node within h/2
/// of lambda (in u) takes the removable-singularity value, obtained by
/// high-order interpolation of the quotient from neighboring nodes.
/// Preconditions: |g(lambda)| <= tol |g|; lambda > 0 on PositiveHalf grids.
GridFunction solve_twisted(const GridFunction& g, const TwistParams& tp,
                           const ReprParams& p);

// ---------------------------------------------------------------------------
// Horocycle-map equation f(xi) = g(xi) / (e^{-i xi L} - 1)
// ---------------------------------------------------------------------------

struct MapParams {
    double L = 1.0;                // > 0
    int m_max = 64;                // resonance indices checked: |m| <= m_max
    double resonance_guard = 1e-6; // in |xi L mod 2pi|
    double annihilation_tol = 1e-8;
};

/// D_m(g) = g(2 pi m / L). m >= 1 required on PositiveHalf grids.
cplx eval_map_distribution(const GridFunction& g, const MapParams& mp, int m);

/// e^{-i theta} - 1 with theta = xi L, computed cancellation-free as
/// -2i sin(theta/2) e^{-i theta/2}. Shared by every producer/consumer of the
/// map multiplier so coboundary round trips cancel rounding exactly.
cplx map_multiplier(double xi, double L);

/// Pointwise division away from resonances; nodes within the guard take
/// interpolated quotient values. Preconditions: every covered D_m annihilates
/// g to tolerance, and g(xi)/xi stays bounded at the smallest covered |xi|
/// (the m = 0, flow-invariant obstruction).
GridFunction solve_map(const GridFunction& g, const MapParams& mp);

/// f -> f composed with h_{-L/2}: multiplication by e^{-i xi L/2}.
GridFunction half_shift(const GridFunction& f, const MapParams& mp);

/// g = (e^{-i xi L} - 1) f0; every D_m(g) vanishes by construction.
GridFunction make_coboundary(const GridFunction& f0, const MapParams& mp);

/// g = base - base(lambda) * chi(xi/lambda) with chi the standard plateau
/// bump; guarantees g(lambda) = 0.
GridFunction make_twisted_annihilated(const GridFunction& base,
                                      const TwistParams& tp);

/// RHS functional of the map upper bound, constants set to 1:
///   (1+L^{2s})/L |G^V g|_s + L^eps (1+L^s)/eps |g|_{q}
/// with q = 2s+1+eps for the FullUXV basis and q = s+1+eps for XVOnly.
double map_rhs_functional(const GridFunction& g, const MapParams& mp,
                          const SobolevSpec& spec, const ReprParams& p);

/// |csc(x) - truncated partial-fraction expansion|,
/// csc(x) = 1/x + sum_{a>=1} (-1)^a 2x/(x^2 - (pi a)^2).
double csc_expansion_check(double x, int terms);

} // namespace horocoho
