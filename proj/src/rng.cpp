#include "jetspace/rng.hpp"

namespace jetspace {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double frac(double v)
{
    return v - std::floor(v);
}

}  // namespace

Kronecker::Kronecker(int dim, std::uint64_t seed)
{
    alpha_.resize(static_cast<std::size_t>(dim));
    state_.resize(static_cast<std::size_t>(dim));
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (int i = 0; i < dim; ++i) {
        alpha_[static_cast<std::size_t>(i)] = frac(std::sqrt(static_cast<double>(kPrimes[i % 24])));
        state_[static_cast<std::size_t>(i)] = rng.uniform();
    }
}

const std::vector<double>& Kronecker::next()
{
    for (std::size_t i = 0; i < state_.size(); ++i) {
        state_[i] = frac(state_[i] + alpha_[i]);
    }
    return state_;
}

}  // namespace jetspace
