#pragma once

#include <vector>

namespace jetspace {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule with the given number of points (1 <= points <= 256).
const GaussLegendre& gauss_legendre(int points);

}  // namespace jetspace
