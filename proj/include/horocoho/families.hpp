#pragma once

#include "horocoho/bump.hpp"
#include "horocoho/product.hpp"

namespace horocoho {

/// Deterministic 10-member family of smooth, normalized grid functions used
/// by the scan experiments: modulated Gaussians in u on the positive branch
/// (members 3 and 7 add a negative-branch component on FullLine grids),
/// each scaled to unit weighted-L2 norm.
std::vector<GridFunction> smooth_family(const LogGrid& grid, int count);

/// Deterministic family of tensor test functions. Factor-1 support is kept
/// inside u1 in [-2.2, 0.05] so every map resonance of the L in {0.5,1,2,4}
/// scan lies in the exact-zero region of each fiber.
std::vector<TensorGridFunction> tensor_family(const LogGrid& g1,
                                              const LogGrid& g2, int count);

} // namespace horocoho
