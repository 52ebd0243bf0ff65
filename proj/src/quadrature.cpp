#include "jetspace/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace jetspace {

namespace {

// Newton iteration on the Legendre recurrence, seeded by the Chebyshev-like
// asymptotic root estimates; nodes come out symmetric to rounding.
GaussLegendre build_rule(int n)
{
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (n == 1) p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? x : p1;
            const double pn1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int points)
{
    if (points < 1 || points > 256)
        throw std::invalid_argument("gauss_legendre: points must be in [1, 256]");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[points];
    if (!slot) slot = std::make_unique<GaussLegendre>(build_rule(points));
    return *slot;
}

}  // namespace jetspace
