#include "horocoho/families.hpp"

#include "horocoho/bump.hpp"

#include <cmath>

namespace horocoho {

std::vector<GridFunction> smooth_family(const LogGrid& grid, int count) {
    std::vector<GridFunction> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double c = -0.8 + 1.6 * k / 9.0;
        const double w = 0.35 + 0.07 * k;
        const double om = 1.25 * (k % 3);
        const cplx amp = (1.0 + 0.1 * k) *
                         cplx(std::cos(M_PI * k / 7.0), std::sin(M_PI * k / 7.0));
        GridFunction f(grid);
        const int n = grid.n_per_branch();
        for (int b = 0; b < grid.branches(); ++b) {
            const bool neg = grid.branch_sign(b) < 0.0;
            for (int j = 0; j < n; ++j) {
                const double u = grid.u(j);
                cplx val(0.0);
                if (!neg) {
                    const double e = (u - c) / w;
                    val = amp * std::exp(-e * e) *
                          cplx(std::cos(om * u), std::sin(om * u));
                } else if (k == 3 || k == 7) {
                    const double e = (u + 0.3) / 0.8;
                    val = 0.6 * std::exp(-e * e);
                }
                f.at(b, j) = val;
            }
        }
        const double nn = l2nu_norm(f);
        for (cplx& z : f.v) z /= nn;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<TensorGridFunction> tensor_family(const LogGrid& g1,
                                              const LogGrid& g2, int count) {
    std::vector<TensorGridFunction> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double lo1 = -2.2, hi1 = 0.05 - 0.04 * (k % 3);
        const double c2 = -0.9 + 1.6 * k / 9.0;
        const double w2 = 1.4 + 0.05 * k;
        const double om1 = 0.5 * (k % 4);
        const double om2 = 0.4 * (k % 3);
        const cplx amp(std::cos(0.4 * k), std::sin(0.4 * k));
        TensorGridFunction F(g1, g2);
        const auto x1 = g1.points();
        const auto x2 = g2.points();
        for (int i = 0; i < F.n1(); ++i) {
            const double u1 = std::log(std::fabs(x1[i]));
            const double b1 = u_bump(u1, lo1, hi1);
            if (b1 == 0.0) continue;
            for (int j = 0; j < F.n2(); ++j) {
                const double u2 = std::log(std::fabs(x2[j]));
                const double b2 = u_bump(u2, c2 - w2, c2 + w2);
                if (b2 == 0.0) continue;
                const double ph = om1 * u1 + om2 * u2;
                F.at(i, j) = amp * b1 * b2 * cplx(std::cos(ph), std::sin(ph));
            }
        }
        const double nn = tensor_l2nu_norm(F);
        for (cplx& z : F.v) z /= nn;
        out.push_back(std::move(F));
    }
    return out;
}

} // namespace horocoho
