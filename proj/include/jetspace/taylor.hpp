#pragma once

#include <span>
#include <vector>

#include "jetspace/expr.hpp"
#include "jetspace/jetgroup.hpp"
#include "jetspace/multiindex.hpp"

namespace jetspace {

/// All partial derivatives of one expression at one point, up to a requested
/// order, in the canonical layout. Stored in the derivative convention; the
/// Taylor coefficient of an index divides by its factorial.
class TruncatedJet {
public:
    TruncatedJet(int dim, int order, std::vector<double> base, std::vector<double> derivatives);

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::span<const double> base() const { return base_; }
    std::span<const double> derivatives() const { return derivatives_; }
    double derivative(const MultiIndex& idx) const;
    double value() const { return derivatives_[0]; }
    double taylor_coefficient(const MultiIndex& idx) const;

private:
    int dim_;
    int order_;
    std::vector<double> base_;
    std::vector<double> derivatives_;
};

/// Propagates truncated multivariate series through the expression tree.
/// order must lie in [0, 9].
TruncatedJet jet_eval(const ExprPtr& g, std::span<const double> x0, int order);

/// Packages the order-k derivatives of g at x0 as a group element.
JetPoint jet_to_point(const ExprPtr& g, std::span<const double> x0, int order);

double eval(const ExprPtr& g, std::span<const double> x0);
std::vector<double> gradient(const ExprPtr& g, std::span<const double> x0);

}  // namespace jetspace
