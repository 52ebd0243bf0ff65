#include "jetspace/expr.hpp"

#include <charconv>

namespace jetspace {

namespace {

std::string format_double(double v)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

ExprPtr Expr::constant(double value)
{
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Constant;
    node->value_ = value;
    return node;
}

ExprPtr Expr::coordinate(int axis)
{
    if (axis < 0) throw std::invalid_argument("Expr::coordinate: axis must be >= 0");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Coordinate;
    node->axis_ = axis;
    return node;
}

ExprPtr Expr::sum(std::vector<ExprPtr> terms)
{
    if (terms.empty()) throw std::invalid_argument("Expr::sum: needs at least one term");
    for (const auto& t : terms)
        if (!t) throw std::invalid_argument("Expr::sum: null operand");
    if (terms.size() == 1) return terms.front();
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Sum;
    node->operands_ = std::move(terms);
    return node;
}

ExprPtr Expr::product(ExprPtr lhs, ExprPtr rhs)
{
    if (!lhs || !rhs) throw std::invalid_argument("Expr::product: null operand");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Product;
    node->operands_ = {std::move(lhs), std::move(rhs)};
    return node;
}

ExprPtr Expr::int_power(ExprPtr base, int exponent)
{
    if (!base) throw std::invalid_argument("Expr::int_power: null operand");
    if (exponent < 0) throw std::invalid_argument("Expr::int_power: exponent must be >= 0");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::IntPower;
    node->exponent_ = exponent;
    node->operands_ = {std::move(base)};
    return node;
}

ExprPtr Expr::sin_of(ExprPtr arg)
{
    if (!arg) throw std::invalid_argument("Expr::sin_of: null operand");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Sin;
    node->operands_ = {std::move(arg)};
    return node;
}

ExprPtr Expr::cos_of(ExprPtr arg)
{
    if (!arg) throw std::invalid_argument("Expr::cos_of: null operand");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Cos;
    node->operands_ = {std::move(arg)};
    return node;
}

ExprPtr Expr::exp_of(ExprPtr arg)
{
    if (!arg) throw std::invalid_argument("Expr::exp_of: null operand");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Exp;
    node->operands_ = {std::move(arg)};
    return node;
}

ExprPtr Expr::sqrt_of(ExprPtr arg, double domain_min)
{
    if (!arg) throw std::invalid_argument("Expr::sqrt_of: null operand");
    if (domain_min < 0.0) throw std::invalid_argument("Expr::sqrt_of: domain_min must be >= 0");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Sqrt;
    node->domain_min_ = domain_min;
    node->operands_ = {std::move(arg)};
    return node;
}

ExprPtr Expr::reciprocal_of(ExprPtr arg, double domain_min)
{
    if (!arg) throw std::invalid_argument("Expr::reciprocal_of: null operand");
    if (domain_min < 0.0) throw std::invalid_argument("Expr::reciprocal_of: domain_min must be >= 0");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::Reciprocal;
    node->domain_min_ = domain_min;
    node->operands_ = {std::move(arg)};
    return node;
}

ExprPtr Expr::flat_exp_of(ExprPtr arg)
{
    if (!arg) throw std::invalid_argument("Expr::flat_exp_of: null operand");
    std::shared_ptr<Expr> node(new Expr());
    node->kind_ = Kind::FlatExp;
    node->operands_ = {std::move(arg)};
    return node;
}

std::string Expr::to_sexpr() const
{
    switch (kind_) {
        case Kind::Constant:
            return "(const " + format_double(value_) + ")";
        case Kind::Coordinate:
            return "(x " + std::to_string(axis_) + ")";
        case Kind::Sum: {
            std::string s = "(add";
            for (const auto& t : operands_) s += " " + t->to_sexpr();
            return s + ")";
        }
        case Kind::Product:
            return "(mul " + operands_[0]->to_sexpr() + " " + operands_[1]->to_sexpr() + ")";
        case Kind::IntPower:
            return "(pow " + operands_[0]->to_sexpr() + " " + std::to_string(exponent_) + ")";
        case Kind::Sin:
            return "(sin " + operands_[0]->to_sexpr() + ")";
        case Kind::Cos:
            return "(cos " + operands_[0]->to_sexpr() + ")";
        case Kind::Exp:
            return "(exp " + operands_[0]->to_sexpr() + ")";
        case Kind::Sqrt:
            return "(sqrt " + operands_[0]->to_sexpr() + ")";
        case Kind::Reciprocal:
            return "(recip " + operands_[0]->to_sexpr() + ")";
        case Kind::FlatExp:
            return "(sigma " + operands_[0]->to_sexpr() + ")";
    }
    return "?";
}

ExprPtr add(ExprPtr lhs, ExprPtr rhs)
{
    return Expr::sum({std::move(lhs), std::move(rhs)});
}

ExprPtr sub(ExprPtr lhs, ExprPtr rhs)
{
    return add(std::move(lhs), neg(std::move(rhs)));
}

ExprPtr neg(ExprPtr arg)
{
    return scale(-1.0, std::move(arg));
}

ExprPtr scale(double factor, ExprPtr arg)
{
    return Expr::product(Expr::constant(factor), std::move(arg));
}

ExprPtr squared_norm(int dim)
{
    if (dim < 1) throw std::invalid_argument("squared_norm: dim must be >= 1");
    std::vector<ExprPtr> terms;
    terms.reserve(static_cast<std::size_t>(dim));
    for (int l = 0; l < dim; ++l) terms.push_back(Expr::int_power(Expr::coordinate(l), 2));
    return Expr::sum(std::move(terms));
}

ExprPtr euclidean_norm(int dim, double min_norm)
{
    return Expr::sqrt_of(squared_norm(dim), min_norm * min_norm);
}

}  // namespace jetspace
