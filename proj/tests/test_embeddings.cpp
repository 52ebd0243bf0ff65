#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "jetspace/embeddings.hpp"
#include "jetspace/jetgroup.hpp"
#include "jetspace/numeric.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

using namespace jetspace;

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("end-flat polynomial and its derivative asymptotics")
{
    const ExprPtr f1 = make_fk(1);
    CHECK(eval(f1, std::vector<double>{0.0}) == doctest::Approx(0.0));
    CHECK(eval(f1, std::vector<double>{kPi}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eval(f1, std::vector<double>{kPi / 2.0}) == doctest::Approx(std::pow(kPi, 4) / 16.0));
    for (double t = 0.1; t < kPi; t += 0.3) CHECK(eval(f1, std::vector<double>{t}) > 0.0);

    for (int k = 1; k <= 3; ++k) {
        const ExprPtr fk = make_fk(k);
        const double theta = 1e-4;
        const double dk = jet_eval(fk, std::vector<double>{theta}, k).derivative(MultiIndex({k}));
        const double limit = static_cast<double>(factorial(k + 1)) * std::pow(kPi, k + 1);
        CHECK(rel_error(dk / theta, limit) < 1e-3);
    }
    CHECK_THROWS_AS(make_fk(0), std::invalid_argument);
    CHECK_THROWS_AS(make_fk(9), std::invalid_argument);
}

TEST_CASE("body function values and annulus identity")
{
    const BodyFunction body = make_body(2, 1);
    CHECK(!body.beta);  // the uncorrected obstruction is already far from zero
    CHECK(eval(body.f, std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(eval(body.f, std::vector<double>{0.75, 0.0}) == doctest::Approx(0.0625));

    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
        const double a = rng.uniform(0.0, 2.0 * kPi);
        const double r = rng.uniform(0.5, 1.5);
        const std::vector<double> x{r * std::cos(a), r * std::sin(a)};
        CHECK(std::abs(eval(body.f, x) - std::pow(1.0 - r, 2)) <= 1e-12);
    }
    for (int t = 0; t < 200; ++t) {
        const double a = rng.uniform(0.0, 2.0 * kPi);
        const double r = rng.uniform(0.0, 0.999);
        const std::vector<double> x{r * std::cos(a), r * std::sin(a)};
        CHECK(eval(body.f, x) > 0.0);
    }
    CHECK_THROWS_AS(make_body(1, 1), std::invalid_argument);
}

TEST_CASE("bump correction: support, peak, range")
{
    const ExprPtr bump = make_bump(2);
    CHECK(eval(bump, std::vector<double>{0.25, 0.0}) == doctest::Approx(1.0));
    // outside the support cube the bump is exactly zero
    for (const std::vector<double>& x : {std::vector<double>{0.25 + 0.0626, 0.0},
                                        std::vector<double>{0.25, 0.0626},
                                        std::vector<double>{0.1, 0.0},
                                        std::vector<double>{0.5, 0.5}}) {
        CHECK(eval(bump, x) == 0.0);
        const TruncatedJet jet = jet_eval(bump, x, 2);
        for (double d : jet.derivatives()) CHECK(d == 0.0);
    }
    Rng rng(43);
    for (int t = 0; t < 200; ++t) {
        const std::vector<double> x{0.25 + rng.uniform(-0.0625, 0.0625),
                                    rng.uniform(-0.0625, 0.0625)};
        const double v = eval(bump, x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("forcing the correction keeps the certificate nonzero")
{
    BodyOptions options;
    options.force_correction = true;
    options.check_resolution = 64;
    const BodyFunction body = make_body(2, 1, options);
    CHECK(static_cast<bool>(body.beta));
}

TEST_CASE("polar lift")
{
    const SpherePoint north = polar_lift(std::vector<double>{0.0, 0.0});
    CHECK(north.ambient == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(north.hemisphere == Hemisphere::Upper);

    const SpherePoint rim = polar_lift(std::vector<double>{0.6, 0.8});
    CHECK(rim.hemisphere == Hemisphere::Equator);
    CHECK(rim.ambient[0] == doctest::Approx(0.6));
    CHECK(rim.ambient[1] == doctest::Approx(0.8));
    CHECK(rim.ambient[2] == 0.0);

    const SpherePoint half = polar_lift(std::vector<double>{0.5, 0.0});
    CHECK(half.ambient[0] == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(half.ambient[2] == doctest::Approx(std::sqrt(2.0) / 2.0));

    CHECK_THROWS_AS(polar_lift(std::vector<double>{1.1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpherePoint::from_ambient(std::vector<double>{1.0, 1.0, 1.0}),
                    std::invalid_argument);

    // ambient -> polar -> ambient round trip
    Rng rng(47);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> v{rng.normal(), rng.normal(), rng.normal()};
        const double n = norm2(v);
        for (double& c : v) c /= n;
        const SpherePoint p = SpherePoint::from_ambient(v);
        const SpherePoint q =
            SpherePoint::from_polar(p.direction, p.radius, p.hemisphere == Hemisphere::Lower);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(q.ambient[i] == doctest::Approx(v[i]));
    }
}

TEST_CASE("circle embedding branches and seams")
{
    const JetPoint at0 = embed_circle(1, 0.0);
    CHECK(at0.base()[0] == 0.0);
    for (double c : at0.coords()) CHECK(std::abs(c) <= 1e-12);

    const JetPoint quarter = embed_circle(1, kPi / 2.0);
    CHECK(quarter.base()[0] == doctest::Approx(kPi / 2.0));
    CHECK(quarter.coord(MultiIndex({1})) == doctest::Approx(0.0));
    CHECK(quarter.coord(MultiIndex({0})) == doctest::Approx(std::pow(kPi, 4) / 16.0));

    const JetPoint three_quarter = embed_circle(1, 3.0 * kPi / 2.0);
    CHECK(three_quarter.base()[0] == doctest::Approx(kPi / 2.0));
    CHECK(three_quarter.coord(MultiIndex({0})) == doctest::Approx(-std::pow(kPi, 4) / 16.0));

    // both branch formulas produce the same jet at the gluing angles
    for (int k = 1; k <= 3; ++k) {
        const ExprPtr fk = make_fk(k);
        for (const double seam : {0.0, kPi}) {
            const JetPoint upper = jet_to_point(fk, std::vector<double>{seam}, k);
            const JetPoint lower = jet_to_point(neg(fk), std::vector<double>{seam}, k);
            for (std::size_t i = 0; i < upper.coords().size(); ++i)
                CHECK(std::abs(upper.coords()[i] - lower.coords()[i]) <= 1e-12);
        }
        // and the map is continuous across the seams despite the branch switch
        for (const double seam : {0.0, kPi}) {
            const JetPoint above = embed_circle(k, seam + 1e-13);
            const JetPoint below = embed_circle(k, seam - 1e-13);
            for (std::size_t i = 0; i < above.coords().size(); ++i)
                CHECK(std::abs(above.coords()[i] - below.coords()[i]) < 1e-8);
        }
    }
}

TEST_CASE("sphere embedding branches and equator agreement")
{
    const BodyFunction body = make_body(2, 1);

    const JetPoint north = embed_sphere(body, polar_lift(std::vector<double>{0.0, 0.0}));
    CHECK(north.coord(MultiIndex({0, 0})) == doctest::Approx(1.0));

    SpherePoint south = SpherePoint::from_ambient(std::vector<double>{0.0, 0.0, -1.0});
    const JetPoint south_jet = embed_sphere(body, south);
    CHECK(south_jet.coord(MultiIndex({0, 0})) == doctest::Approx(-1.0));

    Rng rng(53);
    for (int t = 0; t < 100; ++t) {
        const double a = rng.uniform(0.0, 2.0 * kPi);
        SpherePoint eq = SpherePoint::from_polar({std::cos(a), std::sin(a)}, 1.0, false);
        const JetPoint upper = embed_sphere(body, eq);
        // the same equator point approached from the lower branch
        eq.hemisphere = Hemisphere::Lower;
        const JetPoint lower = embed_sphere(body, eq);
        for (std::size_t i = 0; i < upper.coords().size(); ++i) {
            CHECK(std::abs(upper.coords()[i]) <= 1e-12);
            CHECK(std::abs(lower.coords()[i]) <= 1e-12);
        }
        CHECK(box_distance(upper, lower) <= 1e-10);
    }
}

TEST_CASE("cube squeeze: fixed points, round trip, sector continuity")
{
    CHECK(lambda_map(std::vector<double>{0.0, 0.0}) == std::vector<double>{0.0, 0.0});
    CHECK(lambda_map(std::vector<double>{1.0, 0.0}) == std::vector<double>{1.0, 0.0});
    const auto diag = lambda_map(std::vector<double>{1.0, 1.0});
    CHECK(diag[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(diag[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

    Rng rng(59);
    for (int n : {2, 3}) {
        for (int t = 0; t < 300; ++t) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (double& c : x) c = rng.uniform(-1.0, 1.0);
            const auto u = lambda_map(x);
            CHECK(norm2(u) <= 1.0 + 1e-12);
            const auto back = lambda_inv(u);
            for (int i = 0; i < n; ++i)
                CHECK(std::abs(back[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]) <=
                      1e-12);
        }
    }

    // pairs straddling a sector boundary stay 3-Lipschitz across the tie
    for (int t = 0; t < 200; ++t) {
        const double level = rng.uniform(0.2, 1.0);
        const double delta = rng.uniform(1e-6, 1e-2);
        const std::vector<double> a{level, level - delta};
        const std::vector<double> b{level - delta, level};
        const auto ua = lambda_map(a);
        const auto ub = lambda_map(b);
        double dist = 0.0, dom = 0.0;
        for (int i = 0; i < 2; ++i) {
            dist += (ua[static_cast<std::size_t>(i)] - ub[static_cast<std::size_t>(i)]) *
                    (ua[static_cast<std::size_t>(i)] - ub[static_cast<std::size_t>(i)]);
            dom += (a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) *
                   (a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]);
        }
        CHECK(std::sqrt(dist) <= 3.0 * std::sqrt(dom) + 1e-12);
    }

    CHECK_THROWS_AS(lambda_map(std::vector<double>{1.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(lambda_inv(std::vector<double>{1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("cylinder projection")
{
    const auto axis = cylinder_proj(std::vector<double>{0.0, 0.0}, 0.7);
    CHECK(axis == std::vector<double>{0.0, 0.0, 0.7});

    const auto side = cylinder_proj(std::vector<double>{0.6, 0.8}, -0.5);
    CHECK(side[0] == doctest::Approx(0.6));
    CHECK(side[1] == doctest::Approx(0.8));
    CHECK(std::abs(side[2]) <= 1e-12);

    const auto mid = cylinder_proj(std::vector<double>{0.5, 0.0}, 0.0);
    CHECK(mid[0] == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(mid[2] == 0.0);

    Rng rng(61);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> v{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        const auto img = cylinder_proj(v, rng.uniform(-1.0, 1.0));
        CHECK(norm2(img) <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(cylinder_proj(std::vector<double>{1.2, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cylinder_proj(std::vector<double>{0.2, 0.0}, 1.5), std::invalid_argument);

    // the cube-to-cylinder map keeps the height coordinate
    const auto lifted = lambda_cylinder(std::vector<double>{1.0, 1.0, 0.25});
    CHECK(lifted[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(lifted[2] == 0.25);
}

TEST_CASE("product map inherits the squeeze ratios in the taxicab metric")
{
    // with the height added, each pair's ratio is a mediant of the squeeze
    // ratio and one, so the product map keeps the squeeze's bracket
    Rng rng(79);
    for (int t = 0; t < 300; ++t) {
        std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        std::vector<double> y{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const auto lx = lambda_cylinder(x);
        const auto ly = lambda_cylinder(y);
        double dom_x = 0.0, img_x = 0.0;
        for (int i = 0; i < 2; ++i) {
            dom_x += std::abs(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]);
            img_x += std::abs(lx[static_cast<std::size_t>(i)] - ly[static_cast<std::size_t>(i)]);
        }
        if (dom_x == 0.0) continue;
        const double dt = std::abs(x[2] - y[2]);
        const double squeeze_ratio = img_x / dom_x;
        const double product_ratio = (img_x + dt) / (dom_x + dt);
        CHECK(product_ratio >= std::min(squeeze_ratio, 1.0) - 1e-12);
        CHECK(product_ratio <= std::max(squeeze_ratio, 1.0) + 1e-12);
    }
}
