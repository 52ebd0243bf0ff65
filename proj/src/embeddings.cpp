#include "jetspace/embeddings.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "jetspace/forms.hpp"
#include "jetspace/taylor.hpp"

namespace jetspace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitTol = 1e-12;
constexpr double kBumpCenter = 0.25;
constexpr double kBumpHalfWidth = 0.0625;

double euclidean(std::span<const double> v)
{
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

// sigma(t) / (sigma(t) + sigma(1 - t)): exactly 0 for t <= 0, exactly 1 for
// t >= 1 (the flat factor is evaluated first, so the step short-circuits on
// both plateaus).
ExprPtr smooth_step(const ExprPtr& t)
{
    ExprPtr rising = Expr::flat_exp_of(t);
    ExprPtr falling = Expr::flat_exp_of(sub(Expr::constant(1.0), t));
    return Expr::product(rising, Expr::reciprocal_of(add(rising, falling)));
}

struct BodyParts {
    ExprPtr alpha;      // sigma1 / (sigma1 + sigma2) of |x|^2
    ExprPtr alpha_bar;  // sigma2 / (sigma1 + sigma2): the complementary cutoff
};

// alpha as a function of r = |x|^2: 0 for r <= 1/16, 1 for r >= 1/4, i.e. the
// transition lives on 1/4 <= |x| <= 1/2. Computing the complement directly
// (instead of 1 - alpha) keeps the body's jet exactly flat where sigma2
// vanishes.
BodyParts make_cutoffs(int dim)
{
    ExprPtr r = squared_norm(dim);
    ExprPtr sigma1 = Expr::flat_exp_of(sub(r, Expr::constant(1.0 / 16.0)));
    ExprPtr sigma2 = Expr::flat_exp_of(sub(Expr::constant(0.25), r));
    ExprPtr denom = Expr::reciprocal_of(add(sigma1, sigma2));
    return {Expr::product(sigma1, denom), Expr::product(sigma2, denom)};
}

ExprPtr make_body_expr(int dim, int order, ExprPtr* alpha_out)
{
    BodyParts cutoffs = make_cutoffs(dim);
    if (alpha_out) *alpha_out = cutoffs.alpha;
    // (1 - |x|)^{k+1}; the norm is only reached where alpha is nonzero, which
    // keeps evaluation away from the norm's singularity at the origin.
    ExprPtr rim = Expr::int_power(sub(Expr::constant(1.0), euclidean_norm(dim, 0.125)), order + 1);
    return add(Expr::product(cutoffs.alpha, rim), cutoffs.alpha_bar);
}

const ExprPtr& cached_fk(int order)
{
    static std::mutex mu;
    static std::map<int, ExprPtr> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = make_fk(order);
    return slot;
}

const ExprPtr& cached_neg_fk(int order)
{
    static std::mutex mu;
    static std::map<int, ExprPtr> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = neg(make_fk(order));
    return slot;
}

}  // namespace

SpherePoint SpherePoint::from_ambient(std::vector<double> ambient)
{
    if (ambient.size() < 2) throw std::invalid_argument("SpherePoint: need at least 2 coordinates");
    const double norm = euclidean(ambient);
    if (std::abs(norm - 1.0) > kUnitTol)
        throw std::invalid_argument("SpherePoint: ambient vector is not unit length");

    SpherePoint p;
    p.ambient = std::move(ambient);
    const std::size_t n = p.ambient.size() - 1;
    const double t = p.ambient[n];
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += p.ambient[i] * p.ambient[i];
    w = std::sqrt(w);

    p.hemisphere = (t > 0.0) ? Hemisphere::Upper : (t < 0.0) ? Hemisphere::Lower : Hemisphere::Equator;
    p.radius = 2.0 / kPi * std::atan2(w, std::abs(t));
    p.direction.assign(n, 0.0);
    if (w > 0.0) {
        for (std::size_t i = 0; i < n; ++i) p.direction[i] = p.ambient[i] / w;
    } else {
        p.direction[0] = 1.0;
    }
    return p;
}

SpherePoint SpherePoint::from_polar(std::vector<double> direction, double radius, bool lower)
{
    if (direction.empty()) throw std::invalid_argument("SpherePoint: empty direction");
    if (radius < 0.0 || radius > 1.0 + kUnitTol)
        throw std::invalid_argument("SpherePoint: radius must lie in [0, 1]");
    radius = std::min(radius, 1.0);
    const double norm = euclidean(direction);
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("SpherePoint: direction must be a unit vector");

    SpherePoint p;
    p.direction = std::move(direction);
    p.radius = radius;
    const double s = std::sin(kPi * radius / 2.0);
    const double c = (radius == 1.0) ? 0.0 : std::cos(kPi * radius / 2.0);
    p.ambient.resize(p.direction.size() + 1);
    for (std::size_t i = 0; i < p.direction.size(); ++i) p.ambient[i] = p.direction[i] * s;
    p.ambient.back() = lower ? -c : c;
    p.hemisphere = (radius == 1.0) ? Hemisphere::Equator : (lower ? Hemisphere::Lower : Hemisphere::Upper);
    return p;
}

SpherePoint polar_lift(std::span<const double> v)
{
    if (v.empty()) throw std::invalid_argument("polar_lift: empty point");
    const double norm = euclidean(v);
    if (norm > 1.0 + kUnitTol) throw std::invalid_argument("polar_lift: point outside the unit ball");

    std::vector<double> direction(v.size(), 0.0);
    if (norm > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) direction[i] = v[i] / norm;
    } else {
        direction[0] = 1.0;
    }
    return SpherePoint::from_polar(std::move(direction), std::min(norm, 1.0), /*lower=*/false);
}

ExprPtr make_fk(int order)
{
    if (order < 1 || order > 8) throw std::invalid_argument("make_fk: order must be in [1, 8]");
    ExprPtr theta = Expr::coordinate(0);
    return Expr::product(Expr::int_power(theta, order + 1),
                         Expr::int_power(sub(Expr::constant(kPi), theta), order + 1));
}

ExprPtr make_bump(int dim)
{
    if (dim < 1) throw std::invalid_argument("make_bump: dim must be >= 1");
    const double r = kBumpHalfWidth;
    ExprPtr bump;
    for (int l = 0; l < dim; ++l) {
        const double c = (l == 0) ? kBumpCenter : 0.0;
        ExprPtr u = Expr::coordinate(l);
        // (u - c + r)/r rises through [c-r, c]; (c + r - u)/r falls through [c, c+r].
        ExprPtr risen = smooth_step(
            Expr::sum({scale(1.0 / r, u), Expr::constant((r - c) / r)}));
        ExprPtr fallen = smooth_step(
            Expr::sum({scale(-1.0 / r, u), Expr::constant((c + r) / r)}));
        ExprPtr factor = Expr::product(risen, fallen);
        bump = bump ? Expr::product(bump, factor) : factor;
    }
    return bump;
}

BodyFunction make_body(int dim, int order, const BodyOptions& options)
{
    if (dim < 2) throw std::invalid_argument("make_body: dim must be >= 2");
    if (order < 1 || order > 8) throw std::invalid_argument("make_body: order must be in [1, 8]");

    BodyFunction body;
    body.dim = dim;
    body.order = order;
    body.f = make_body_expr(dim, order, &body.alpha);

    IntegralResult check = obstruction_integral(body, options.check_resolution);
    if (options.force_correction || std::abs(check.value) < 10.0 * check.error) {
        body.beta = make_bump(dim);
        body.f = add(body.f, body.beta);
        check = obstruction_integral(body, options.check_resolution);
        if (std::abs(check.value) < 10.0 * check.error) {
            throw std::runtime_error(
                "make_body: obstruction integral still indistinguishable from zero after bump "
                "correction");
        }
    }
    return body;
}

JetPoint embed_circle(int order, double angle)
{
    if (order < 1 || order > 8) throw std::invalid_argument("embed_circle: order must be in [1, 8]");
    double a = std::fmod(angle, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    const double x[1] = {(a <= kPi) ? a : 2.0 * kPi - a};
    const ExprPtr& branch = (a <= kPi) ? cached_fk(order) : cached_neg_fk(order);
    return jet_to_point(branch, x, order);
}

JetPoint embed_sphere(const BodyFunction& body, const SpherePoint& p)
{
    if (static_cast<int>(p.direction.size()) != body.dim)
        throw std::invalid_argument("embed_sphere: dimension mismatch");
    std::vector<double> base(p.direction.size());
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = p.radius * p.direction[i];
    if (p.hemisphere == Hemisphere::Lower) {
        return jet_to_point(neg(body.f), base, body.order);
    }
    return jet_to_point(body.f, base, body.order);
}

int lambda_sector(std::span<const double> x)
{
    if (x.empty()) throw std::invalid_argument("lambda_sector: empty point");
    int best = 0;
    for (int i = 1; i < static_cast<int>(x.size()); ++i) {
        if (std::abs(x[static_cast<std::size_t>(i)]) > std::abs(x[static_cast<std::size_t>(best)]))
            best = i;
    }
    return best;
}

std::vector<double> lambda_map(std::span<const double> x)
{
    for (double c : x) {
        if (std::abs(c) > 1.0 + kUnitTol)
            throw std::invalid_argument("lambda_map: point outside the cube");
    }
    std::vector<double> out(x.begin(), x.end());
    const double norm = euclidean(x);
    if (norm == 0.0) return out;
    const double top = std::abs(x[static_cast<std::size_t>(lambda_sector(x))]);
    for (double& c : out) c *= top / norm;
    return out;
}

std::vector<double> lambda_inv(std::span<const double> u)
{
    const double norm = euclidean(u);
    if (norm > 1.0 + kUnitTol) throw std::invalid_argument("lambda_inv: point outside the ball");
    std::vector<double> out(u.begin(), u.end());
    if (norm == 0.0) return out;
    const double top = std::abs(u[static_cast<std::size_t>(lambda_sector(u))]);
    for (double& c : out) c *= norm / top;
    return out;
}

std::vector<double> cylinder_proj(std::span<const double> v, double t)
{
    if (v.empty()) throw std::invalid_argument("cylinder_proj: empty point");
    const double norm = euclidean(v);
    if (norm > 1.0 + kUnitTol) throw std::invalid_argument("cylinder_proj: point outside the ball");
    if (std::abs(t) > 1.0 + kUnitTol) throw std::invalid_argument("cylinder_proj: height outside [-1, 1]");

    const double theta = std::min(norm, 1.0);
    const double s = (theta == 0.0) ? kPi / 2.0 : std::sin(kPi * theta / 2.0) / theta;
    const double c = (theta == 1.0) ? 0.0 : std::cos(kPi * theta / 2.0);
    std::vector<double> out(v.size() + 1);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
    out.back() = t * c;
    return out;
}

std::vector<double> lambda_cylinder(std::span<const double> xt)
{
    if (xt.size() < 2) throw std::invalid_argument("lambda_cylinder: need at least 2 coordinates");
    std::vector<double> out = lambda_map(xt.first(xt.size() - 1));
    out.push_back(xt.back());
    return out;
}

}  // namespace jetspace
