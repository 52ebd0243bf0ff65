#include "jetspace/checks.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "jetspace/embeddings.hpp"
#include "jetspace/numeric.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

namespace jetspace {

namespace {

double rel_dev(double a, double b)
{
    const double diff = std::abs(a - b);
    if (diff <= kAbsTol) return 0.0;
    return diff / std::max(std::abs(a), std::abs(b));
}

double point_rel_dev(const JetPoint& a, const JetPoint& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.base().size(); ++i)
        worst = std::max(worst, rel_dev(a.base()[i], b.base()[i]));
    for (std::size_t i = 0; i < a.coords().size(); ++i)
        worst = std::max(worst, rel_dev(a.coords()[i], b.coords()[i]));
    return worst;
}

double point_abs_dev(const JetPoint& a, const JetPoint& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.base().size(); ++i)
        worst = std::max(worst, std::abs(a.base()[i] - b.base()[i]));
    for (std::size_t i = 0; i < a.coords().size(); ++i)
        worst = std::max(worst, std::abs(a.coords()[i] - b.coords()[i]));
    return worst;
}

JetPoint random_point(const GroupParams& params, Rng& rng)
{
    const JetLayout& lay = jet_layout(params.dim, params.order);
    std::vector<double> base(static_cast<std::size_t>(params.dim));
    std::vector<double> coords(static_cast<std::size_t>(lay.size()));
    for (double& v : base) v = rng.uniform(-2.0, 2.0);
    for (double& v : coords) v = rng.uniform(-2.0, 2.0);
    return JetPoint(params, std::move(base), std::move(coords));
}

// The Taylor polynomial a point represents, in offset coordinates:
// sum_I coords[I] w^I / I!.
ExprPtr offset_polynomial(const JetPoint& p, std::span<const double> shift)
{
    const JetLayout& lay = p.layout();
    std::vector<ExprPtr> terms;
    for (int i = 0; i < lay.size(); ++i) {
        const MultiIndex& idx = lay.at(i);
        ExprPtr term =
            Expr::constant(p.coord(i) / static_cast<double>(factorial(idx)));
        for (int l = 0; l < idx.dim(); ++l) {
            if (idx[l] == 0) continue;
            ExprPtr var = Expr::coordinate(l);
            if (shift[static_cast<std::size_t>(l)] != 0.0)
                var = add(var, Expr::constant(shift[static_cast<std::size_t>(l)]));
            term = Expr::product(term, Expr::int_power(var, idx[l]));
        }
        terms.push_back(std::move(term));
    }
    return Expr::sum(std::move(terms));
}

// Independent route for the group law: translate the left factor's Taylor
// polynomial by the right base point, add the right polynomial, and read the
// jet at zero offset.
double compose_against_polynomials(const JetPoint& p, const JetPoint& q)
{
    const int dim = p.dim();
    const std::vector<double> zero_shift(static_cast<std::size_t>(dim), 0.0);
    ExprPtr translated = offset_polynomial(p, q.base());
    ExprPtr right = offset_polynomial(q, zero_shift);
    ExprPtr total = add(std::move(translated), std::move(right));

    const std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
    const TruncatedJet expanded = jet_eval(total, origin, p.order());

    const JetPoint composed = compose(p, q);
    double worst = 0.0;
    for (std::size_t i = 0; i < composed.coords().size(); ++i)
        worst = std::max(worst, rel_dev(composed.coords()[i], expanded.derivatives()[i]));
    return worst;
}

}  // namespace

double GroupCheckReport::worst() const
{
    return std::max({associativity, identity, inverse, dilation_homomorphism, norm_homogeneity,
                     distance_homogeneity, compose_oracle});
}

bool GroupCheckReport::pass(double rel_tol, double abs_tol) const
{
    return associativity <= rel_tol && dilation_homomorphism <= rel_tol &&
           norm_homogeneity <= rel_tol && distance_homogeneity <= rel_tol &&
           compose_oracle <= rel_tol && identity <= abs_tol && inverse <= abs_tol;
}

GroupCheckReport run_group_checks(const GroupParams& params, long trials, std::uint64_t seed)
{
    if (trials < 1) throw std::invalid_argument("run_group_checks: need at least one trial");
    GroupCheckReport report;
    report.dim = params.dim;
    report.order = params.order;
    report.trials = trials;
    report.seed = seed;

    Rng rng(seed);
    const JetPoint id = JetPoint::identity(params);
    const double eps_values[3] = {0.1, 2.0, 10.0};

    for (long t = 0; t < trials; ++t) {
        const JetPoint p = random_point(params, rng);
        const JetPoint q = random_point(params, rng);
        const JetPoint r = random_point(params, rng);
        const double eps = eps_values[t % 3];

        report.associativity = std::max(
            report.associativity, point_rel_dev(compose(compose(p, q), r), compose(p, compose(q, r))));
        report.identity =
            std::max({report.identity, point_abs_dev(compose(id, p), p), point_abs_dev(compose(p, id), p)});
        report.inverse = std::max({report.inverse, point_abs_dev(compose(p, inverse(p)), id),
                                   point_abs_dev(compose(inverse(p), p), id)});
        report.dilation_homomorphism =
            std::max(report.dilation_homomorphism,
                     point_rel_dev(dilate(eps, compose(p, q)), compose(dilate(eps, p), dilate(eps, q))));
        report.norm_homogeneity = std::max(
            report.norm_homogeneity, rel_dev(homogeneous_norm(dilate(eps, p)), eps * homogeneous_norm(p)));
        report.distance_homogeneity =
            std::max(report.distance_homogeneity,
                     rel_dev(box_distance(dilate(eps, p), dilate(eps, q)), eps * box_distance(p, q)));

        const double np = homogeneous_norm(p);
        const double ninv = homogeneous_norm(inverse(p));
        if (np > 0.0 && ninv > 0.0)
            report.norm_asymmetry = std::max({report.norm_asymmetry, ninv / np, np / ninv});

        if (t % 10 == 0) {
            report.compose_oracle = std::max(report.compose_oracle, compose_against_polynomials(p, q));
        }
    }
    return report;
}

std::string to_json_string(const GroupCheckReport& report)
{
    nlohmann::ordered_json j;
    j["n"] = report.dim;
    j["k"] = report.order;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["max_deviation"] = {{"associativity", report.associativity},
                          {"identity", report.identity},
                          {"inverse", report.inverse},
                          {"dilation_homomorphism", report.dilation_homomorphism},
                          {"norm_homogeneity", report.norm_homogeneity},
                          {"distance_homogeneity", report.distance_homogeneity},
                          {"compose_oracle", report.compose_oracle}};
    j["norm_asymmetry"] = report.norm_asymmetry;
    return j.dump(2);
}

JetCheckReport run_jet_checks(int dim, int order, long points_per_expr, std::uint64_t seed)
{
    if (dim < 1) throw std::invalid_argument("run_jet_checks: dim must be >= 1");
    if (points_per_expr < 1) throw std::invalid_argument("run_jet_checks: need at least one point");

    JetCheckReport report;
    report.dim = dim;
    report.order = order;
    report.points_per_expr = points_per_expr;
    report.seed = seed;

    std::vector<ExprPtr> suite;
    double box = 1.2;  // sampling box half-width
    if (dim == 1) {
        for (int k = 1; k <= 3; ++k) suite.push_back(make_fk(k));
        ExprPtr x = Expr::coordinate(0);
        suite.push_back(Expr::product(Expr::sin_of(x), Expr::exp_of(scale(-0.5, Expr::int_power(x, 2)))));
        suite.push_back(Expr::sqrt_of(add(Expr::constant(2.0), Expr::int_power(x, 2)), 1.0));
        suite.push_back(Expr::reciprocal_of(add(Expr::constant(3.0), Expr::int_power(x, 2)), 1.0));
        suite.push_back(Expr::flat_exp_of(x));
        box = 3.0;
    } else {
        const BodyFunction body = make_body(dim, order);
        suite.push_back(body.f);
        suite.push_back(body.alpha);
        suite.push_back(make_bump(dim));
        ExprPtr sq = squared_norm(dim);
        suite.push_back(Expr::sin_of(sq));
        suite.push_back(Expr::exp_of(neg(sq)));
        suite.push_back(Expr::sqrt_of(add(Expr::constant(1.0), sq), 0.5));
        suite.push_back(Expr::flat_exp_of(sub(sq, Expr::constant(0.25))));
    }

    Rng rng(seed);
    constexpr double kStep = 1e-5;
    // noise scale of a central difference on values of order one
    constexpr double kFloor = 1e-8;

    std::vector<double> x(static_cast<std::size_t>(dim));
    std::vector<double> shifted(static_cast<std::size_t>(dim));
    const auto central = [&](const ExprPtr& g, int j, double step) {
        shifted.assign(x.begin(), x.end());
        shifted[static_cast<std::size_t>(j)] += step;
        const double hi = eval(g, shifted);
        shifted[static_cast<std::size_t>(j)] -= 2.0 * step;
        const double lo = eval(g, shifted);
        return (hi - lo) / (2.0 * step);
    };
    for (const auto& g : suite) {
        report.expressions.push_back(g->to_sexpr());
        for (long pt = 0; pt < points_per_expr; ++pt) {
            for (double& c : x) c = rng.uniform(-box, box);
            const std::vector<double> analytic = gradient(g, x);
            for (int j = 0; j < dim; ++j) {
                // one Richardson step over the halved stencil cancels the
                // leading truncation term, which the flat-cutoff tails need
                const double fd =
                    (4.0 * central(g, j, kStep / 2.0) - central(g, j, kStep)) / 3.0;
                const double diff = std::abs(fd - analytic[static_cast<std::size_t>(j)]);
                if (diff <= kFloor) continue;
                const double dev =
                    diff / std::max(std::abs(fd), std::abs(analytic[static_cast<std::size_t>(j)]));
                report.max_first_order_dev = std::max(report.max_first_order_dev, dev);
            }
        }
    }
    return report;
}

std::string to_json_string(const JetCheckReport& report)
{
    nlohmann::ordered_json j;
    j["n"] = report.dim;
    j["k"] = report.order;
    j["points_per_expr"] = report.points_per_expr;
    j["seed"] = report.seed;
    j["max_first_order_dev"] = report.max_first_order_dev;
    j["expressions"] = report.expressions;
    return j.dump(2);
}

}  // namespace jetspace
