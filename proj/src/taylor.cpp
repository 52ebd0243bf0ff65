#include "jetspace/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace jetspace {

namespace {

constexpr int kMaxJetOrder = 9;  // k <= 8 plus one extra order for Lipschitz bounds

// Slot-level support of truncated multiplication for a fixed (dim, order):
// all (left, right, result) with index(left) + index(right) = index(result).
struct JetContext {
    const JetLayout* layout;
    struct Triple {
        int left, right, result;
    };
    std::vector<Triple> triples;
};

const JetContext& jet_context(int dim, int order)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetContext>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[{dim, order}];
    if (!slot) {
        auto ctx = std::make_unique<JetContext>();
        ctx->layout = &jet_layout(dim, order);
        const JetLayout& lay = *ctx->layout;
        for (int i = 0; i < lay.size(); ++i) {
            for (int j = 0; j < lay.size(); ++j) {
                if (lay.at(i).order() + lay.at(j).order() > order) continue;
                std::vector<int> e(static_cast<std::size_t>(dim));
                for (int l = 0; l < dim; ++l) e[static_cast<std::size_t>(l)] = lay.at(i)[l] + lay.at(j)[l];
                const int r = lay.position(MultiIndex(std::move(e)));
                ctx->triples.push_back({i, j, r});
            }
        }
        slot = std::move(ctx);
    }
    return *slot;
}

using Series = std::vector<double>;  // Taylor-coefficient convention over the layout

bool all_zero(const Series& s)
{
    return std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; });
}

Series multiply(const JetContext& ctx, const Series& a, const Series& b)
{
    Series r(a.size(), 0.0);
    for (const auto& t : ctx.triples) {
        r[static_cast<std::size_t>(t.result)] +=
            a[static_cast<std::size_t>(t.left)] * b[static_cast<std::size_t>(t.right)];
    }
    return r;
}

// ---- univariate helpers (dense coefficients in one variable) ----

std::vector<double> mul1(const std::vector<double>& a, const std::vector<double>& b, int order)
{
    std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
    for (int i = 0; i <= order; ++i) {
        for (int j = 0; i + j <= order; ++j) {
            r[static_cast<std::size_t>(i + j)] +=
                a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
        }
    }
    return r;
}

// Taylor coefficients of t -> e^{-1/t} at t0 > 0: compose -1/t with exp.
std::vector<double> flat_exp_coeffs(double t0, int order)
{
    if (1.0 / t0 > 700.0) {
        // e^{-1/t0} underflows and the reciprocal powers would overflow;
        // everything here is far below double resolution of the flat branch
        return std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0);
    }
    std::vector<double> v(static_cast<std::size_t>(order) + 1);
    double p = -1.0 / t0;  // v_j = (-1)^{j+1} / t0^{j+1}
    for (int j = 0; j <= order; ++j) {
        v[static_cast<std::size_t>(j)] = p;
        p = -p / t0;
    }
    const double head = std::exp(v[0]);
    std::vector<double> tail = v;
    tail[0] = 0.0;
    // e^{v0} * sum tail^i / i!
    std::vector<double> acc(static_cast<std::size_t>(order) + 1, 0.0);
    acc[0] = 1.0;
    std::vector<double> power(static_cast<std::size_t>(order) + 1, 0.0);
    power[0] = 1.0;
    double inv_fact = 1.0;
    for (int i = 1; i <= order; ++i) {
        power = mul1(power, tail, order);
        inv_fact /= i;
        for (int j = 0; j <= order; ++j)
            acc[static_cast<std::size_t>(j)] += inv_fact * power[static_cast<std::size_t>(j)];
    }
    for (double& c : acc) c *= head;
    return acc;
}

// Taylor coefficients of the analytic primitive at the inner value.
std::vector<double> outer_coeffs(const Expr& node, double u0, int order)
{
    std::vector<double> h(static_cast<std::size_t>(order) + 1, 0.0);
    switch (node.kind()) {
        case Expr::Kind::Sin: {
            const double s = std::sin(u0), c = std::cos(u0);
            const double cycle[4] = {s, c, -s, -c};
            double inv_fact = 1.0;
            for (int j = 0; j <= order; ++j) {
                if (j > 0) inv_fact /= j;
                h[static_cast<std::size_t>(j)] = cycle[j % 4] * inv_fact;
            }
            return h;
        }
        case Expr::Kind::Cos: {
            const double s = std::sin(u0), c = std::cos(u0);
            const double cycle[4] = {c, -s, -c, s};
            double inv_fact = 1.0;
            for (int j = 0; j <= order; ++j) {
                if (j > 0) inv_fact /= j;
                h[static_cast<std::size_t>(j)] = cycle[j % 4] * inv_fact;
            }
            return h;
        }
        case Expr::Kind::Exp: {
            const double e = std::exp(u0);
            double inv_fact = 1.0;
            for (int j = 0; j <= order; ++j) {
                if (j > 0) inv_fact /= j;
                h[static_cast<std::size_t>(j)] = e * inv_fact;
            }
            return h;
        }
        case Expr::Kind::Sqrt: {
            h[0] = std::sqrt(u0);
            for (int j = 1; j <= order; ++j) {
                h[static_cast<std::size_t>(j)] =
                    h[static_cast<std::size_t>(j - 1)] * (1.5 - j) / (j * u0);
            }
            return h;
        }
        case Expr::Kind::Reciprocal: {
            h[0] = 1.0 / u0;
            for (int j = 1; j <= order; ++j) {
                h[static_cast<std::size_t>(j)] = -h[static_cast<std::size_t>(j - 1)] / u0;
            }
            return h;
        }
        case Expr::Kind::FlatExp:
            return flat_exp_coeffs(u0, order);
        default:
            throw std::logic_error("outer_coeffs: not a univariate primitive");
    }
}

Series evaluate(const Expr& node, const JetContext& ctx, std::span<const double> x0);

Series evaluate_univariate(const Expr& node, const JetContext& ctx, std::span<const double> x0)
{
    Series inner = evaluate(*node.operands()[0], ctx, x0);
    const double u0 = inner[0];

    if (node.kind() == Expr::Kind::FlatExp && u0 <= 0.0) {
        return Series(inner.size(), 0.0);  // flat: exactly zero with all derivatives zero
    }
    if ((node.kind() == Expr::Kind::Sqrt || node.kind() == Expr::Kind::Reciprocal) &&
        !(u0 > node.domain_min())) {
        throw DomainError("argument " + std::to_string(u0) + " outside declared domain of " +
                          node.to_sexpr());
    }

    const int order = ctx.layout->max_order();
    const std::vector<double> h = outer_coeffs(node, u0, order);

    Series centered = std::move(inner);
    centered[0] = 0.0;
    // Horner in the centered inner series, which has no constant term.
    Series acc(centered.size(), 0.0);
    acc[0] = h[static_cast<std::size_t>(order)];
    for (int j = order - 1; j >= 0; --j) {
        acc = multiply(ctx, acc, centered);
        acc[0] += h[static_cast<std::size_t>(j)];
    }
    return acc;
}

Series evaluate(const Expr& node, const JetContext& ctx, std::span<const double> x0)
{
    const JetLayout& lay = *ctx.layout;
    switch (node.kind()) {
        case Expr::Kind::Constant: {
            Series s(static_cast<std::size_t>(lay.size()), 0.0);
            s[0] = node.value();
            return s;
        }
        case Expr::Kind::Coordinate: {
            if (node.axis() >= lay.dim())
                throw std::invalid_argument("jet_eval: expression uses coordinate " +
                                            std::to_string(node.axis()) + " beyond point dimension");
            Series s(static_cast<std::size_t>(lay.size()), 0.0);
            s[0] = x0[static_cast<std::size_t>(node.axis())];
            if (lay.max_order() >= 1)
                s[static_cast<std::size_t>(lay.position(MultiIndex::unit(lay.dim(), node.axis())))] = 1.0;
            return s;
        }
        case Expr::Kind::Sum: {
            Series s(static_cast<std::size_t>(lay.size()), 0.0);
            for (const auto& term : node.operands()) {
                Series t = evaluate(*term, ctx, x0);
                for (std::size_t i = 0; i < s.size(); ++i) s[i] += t[i];
            }
            return s;
        }
        case Expr::Kind::Product: {
            Series a = evaluate(*node.operands()[0], ctx, x0);
            // An identically-zero factor annihilates the product; do not evaluate
            // the other factor, whose own domain may exclude this point.
            if (all_zero(a)) return a;
            Series b = evaluate(*node.operands()[1], ctx, x0);
            if (all_zero(b)) return b;
            return multiply(ctx, a, b);
        }
        case Expr::Kind::IntPower: {
            if (node.exponent() == 0) {
                Series s(static_cast<std::size_t>(lay.size()), 0.0);
                s[0] = 1.0;
                return s;
            }
            Series base = evaluate(*node.operands()[0], ctx, x0);
            Series r = base;
            for (int i = 1; i < node.exponent(); ++i) r = multiply(ctx, r, base);
            return r;
        }
        default:
            return evaluate_univariate(node, ctx, x0);
    }
}

}  // namespace

TruncatedJet::TruncatedJet(int dim, int order, std::vector<double> base,
                           std::vector<double> derivatives)
    : dim_(dim), order_(order), base_(std::move(base)), derivatives_(std::move(derivatives))
{
    const JetLayout& lay = jet_layout(dim_, order_);
    if (static_cast<int>(base_.size()) != dim_)
        throw std::invalid_argument("TruncatedJet: base dimension mismatch");
    if (static_cast<int>(derivatives_.size()) != lay.size())
        throw std::invalid_argument("TruncatedJet: coefficient count mismatch");
}

double TruncatedJet::derivative(const MultiIndex& idx) const
{
    return derivatives_[static_cast<std::size_t>(jet_layout(dim_, order_).position(idx))];
}

double TruncatedJet::taylor_coefficient(const MultiIndex& idx) const
{
    return derivative(idx) / static_cast<double>(factorial(idx));
}

TruncatedJet jet_eval(const ExprPtr& g, std::span<const double> x0, int order)
{
    if (!g) throw std::invalid_argument("jet_eval: null expression");
    if (x0.empty()) throw std::invalid_argument("jet_eval: empty point");
    if (order < 0 || order > kMaxJetOrder)
        throw std::invalid_argument("jet_eval: order must be in [0, 9]");
    const int dim = static_cast<int>(x0.size());
    const JetContext& ctx = jet_context(dim, order);
    Series s = evaluate(*g, ctx, x0);
    std::vector<double> derivs(s.size());
    for (int i = 0; i < ctx.layout->size(); ++i) {
        derivs[static_cast<std::size_t>(i)] =
            s[static_cast<std::size_t>(i)] * static_cast<double>(factorial(ctx.layout->at(i)));
    }
    return TruncatedJet(dim, order, std::vector<double>(x0.begin(), x0.end()), std::move(derivs));
}

JetPoint jet_to_point(const ExprPtr& g, std::span<const double> x0, int order)
{
    TruncatedJet jet = jet_eval(g, x0, order);
    GroupParams params(jet.dim(), order);
    return JetPoint(params, std::vector<double>(x0.begin(), x0.end()),
                    std::vector<double>(jet.derivatives().begin(), jet.derivatives().end()));
}

double eval(const ExprPtr& g, std::span<const double> x0)
{
    return jet_eval(g, x0, 0).value();
}

std::vector<double> gradient(const ExprPtr& g, std::span<const double> x0)
{
    TruncatedJet jet = jet_eval(g, x0, 1);
    const int dim = jet.dim();
    std::vector<double> grad(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j)
        grad[static_cast<std::size_t>(j)] = jet.derivative(MultiIndex::unit(dim, j));
    return grad;
}

}  // namespace jetspace
