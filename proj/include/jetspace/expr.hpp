#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetspace {

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over constants, coordinate projections, sums,
/// products, integer powers, and a few analytic univariate primitives.
/// Evaluation happens through truncated jet propagation (taylor.hpp).
///
/// Two conventions worth noting:
///  - sqrt/reciprocal carry a declared lower bound on their argument; an
///    evaluation whose argument does not exceed it raises DomainError instead
///    of producing NaN.
///  - flat_exp is t -> e^{-1/t} for t > 0 and exactly 0 (all derivatives 0)
///    for t <= 0. A product whose evaluated factor is the identically-zero jet
///    short-circuits, so cutoffs built on flat_exp mask the other factor's
///    domain restrictions.
class Expr {
public:
    enum class Kind {
        Constant,
        Coordinate,
        Sum,
        Product,
        IntPower,
        Sin,
        Cos,
        Exp,
        Sqrt,
        Reciprocal,
        FlatExp,
    };

    static ExprPtr constant(double value);
    static ExprPtr coordinate(int axis);
    static ExprPtr sum(std::vector<ExprPtr> terms);
    static ExprPtr product(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr int_power(ExprPtr base, int exponent);  // exponent >= 0
    static ExprPtr sin_of(ExprPtr arg);
    static ExprPtr cos_of(ExprPtr arg);
    static ExprPtr exp_of(ExprPtr arg);
    static ExprPtr sqrt_of(ExprPtr arg, double domain_min = 0.0);
    static ExprPtr reciprocal_of(ExprPtr arg, double domain_min = 0.0);
    static ExprPtr flat_exp_of(ExprPtr arg);

    Kind kind() const { return kind_; }
    double value() const { return value_; }          // Constant
    int axis() const { return axis_; }               // Coordinate
    int exponent() const { return exponent_; }       // IntPower
    double domain_min() const { return domain_min_; }  // Sqrt / Reciprocal
    const std::vector<ExprPtr>& operands() const { return operands_; }

    std::string to_sexpr() const;

private:
    Expr() = default;

    Kind kind_ = Kind::Constant;
    double value_ = 0.0;
    int axis_ = 0;
    int exponent_ = 0;
    double domain_min_ = 0.0;
    std::vector<ExprPtr> operands_;
};

ExprPtr add(ExprPtr lhs, ExprPtr rhs);
ExprPtr sub(ExprPtr lhs, ExprPtr rhs);
ExprPtr neg(ExprPtr arg);
ExprPtr scale(double factor, ExprPtr arg);

/// sum_l x_l^2 over the first `dim` coordinates.
ExprPtr squared_norm(int dim);

/// sqrt(sum x_l^2), declared valid only where the norm exceeds min_norm.
ExprPtr euclidean_norm(int dim, double min_norm);

}  // namespace jetspace
