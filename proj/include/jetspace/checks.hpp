#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jetspace/jetgroup.hpp"

namespace jetspace {

/// Worst observed deviations over randomized trials of the group laws.
/// Deviations are relative with an absolute floor, so exact zeros stay zero.
struct GroupCheckReport {
    int dim = 0;
    int order = 0;
    long trials = 0;
    std::uint64_t seed = 0;
    double associativity = 0.0;
    double identity = 0.0;         // absolute
    double inverse = 0.0;          // absolute
    double dilation_homomorphism = 0.0;
    double norm_homogeneity = 0.0;
    double distance_homogeneity = 0.0;
    double norm_asymmetry = 1.0;  // max N(p^{-1})/N(p), reported not asserted
    double compose_oracle = 0.0;  // against re-expanded translated polynomials

    double worst() const;
    bool pass(double rel_tol, double abs_tol) const;
};

GroupCheckReport run_group_checks(const GroupParams& params, long trials, std::uint64_t seed);

std::string to_json_string(const GroupCheckReport& report);

/// Worst relative mismatch between analytic first-order partials and central
/// finite differences over a suite of expressions.
struct JetCheckReport {
    int dim = 0;
    int order = 0;
    long points_per_expr = 0;
    std::uint64_t seed = 0;
    double max_first_order_dev = 0.0;
    std::vector<std::string> expressions;

    bool pass(double tol) const { return max_first_order_dev <= tol; }
};

JetCheckReport run_jet_checks(int dim, int order, long points_per_expr, std::uint64_t seed);

std::string to_json_string(const JetCheckReport& report);

}  // namespace jetspace
