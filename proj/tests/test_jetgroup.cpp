#include <doctest.h>

#include <cmath>
#include <vector>

#include "jetspace/checks.hpp"
#include "jetspace/jetgroup.hpp"
#include "jetspace/numeric.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

using namespace jetspace;

namespace {

// coords are canonical order: n=1 gives [u_0, u_1, ..., u_k]
JetPoint filiform(int k, double x, std::vector<double> coords)
{
    return JetPoint(GroupParams(1, k), {x}, std::move(coords));
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

double max_coord_dev(const JetPoint& a, const JetPoint& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.base().size(); ++i)
        worst = std::max(worst, std::abs(a.base()[i] - b.base()[i]));
    for (std::size_t i = 0; i < a.coords().size(); ++i)
        worst = std::max(worst, std::abs(a.coords()[i] - b.coords()[i]));
    return worst;
}

}  // namespace

TEST_CASE("group product on the line matches hand expansion")
{
    // tuples written (x, u1, u0) in the text below; storage is canonical [u0, u1]
    const JetPoint p = filiform(1, 1.0, {3.0, 2.0});
    const JetPoint q = filiform(1, 4.0, {6.0, 5.0});
    const JetPoint r = compose(p, q);
    CHECK(r.base()[0] == doctest::Approx(5.0));
    CHECK(r.coord(MultiIndex({0})) == doctest::Approx(17.0));  // 3 + 6 + 2*4
    CHECK(r.coord(MultiIndex({1})) == doctest::Approx(7.0));

    // order-2: top coordinate shifts into lower slots through y^j / j!
    const JetPoint p2 = filiform(2, 1.0, {0.0, 0.0, 1.0});
    const JetPoint q2 = filiform(2, 1.0, {0.0, 0.0, 0.0});
    const JetPoint r2 = compose(p2, q2);
    CHECK(r2.base()[0] == doctest::Approx(2.0));
    CHECK(r2.coord(MultiIndex({0})) == doctest::Approx(0.5));
    CHECK(r2.coord(MultiIndex({1})) == doctest::Approx(1.0));
    CHECK(r2.coord(MultiIndex({2})) == doctest::Approx(1.0));
}

TEST_CASE("identity and inverse")
{
    const GroupParams params(1, 1);
    const JetPoint id = JetPoint::identity(params);
    const JetPoint p = filiform(1, 1.0, {3.0, 2.0});
    CHECK(max_coord_dev(compose(id, p), p) == 0.0);
    CHECK(max_coord_dev(compose(p, id), p) == 0.0);

    CHECK(max_coord_dev(inverse(id), id) == 0.0);
    const JetPoint pinv = inverse(p);
    CHECK(pinv.base()[0] == doctest::Approx(-1.0));
    CHECK(pinv.coord(MultiIndex({1})) == doctest::Approx(-2.0));
    CHECK(pinv.coord(MultiIndex({0})) == doctest::Approx(-1.0));  // -u0 + u1 x

    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const GroupParams pr(1 + static_cast<int>(rng.next() % 3), 1 + static_cast<int>(rng.next() % 3));
        const JetPoint g = random_point(pr, rng);
        CHECK(max_coord_dev(compose(g, inverse(g)), JetPoint::identity(pr)) < 1e-12);
        CHECK(max_coord_dev(compose(inverse(g), g), JetPoint::identity(pr)) < 1e-12);
    }
}

TEST_CASE("dilation weights and homomorphism")
{
    const JetPoint p = filiform(1, 1.0, {3.0, 2.0});
    CHECK(max_coord_dev(dilate(1.0, p), p) == 0.0);

    const JetPoint d = dilate(2.0, p);
    CHECK(d.base()[0] == doctest::Approx(2.0));
    CHECK(d.coord(MultiIndex({1})) == doctest::Approx(4.0));   // weight 1
    CHECK(d.coord(MultiIndex({0})) == doctest::Approx(12.0));  // weight 2

    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const GroupParams pr(2, 2);
        const JetPoint g = random_point(pr, rng);
        const double e1 = rng.uniform(0.1, 3.0), e2 = rng.uniform(0.1, 3.0);
        CHECK(max_coord_dev(dilate(e1, dilate(e2, g)), dilate(e1 * e2, g)) < 1e-10);
    }
    CHECK_THROWS_AS(dilate(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(dilate(-1.0, p), std::invalid_argument);
}

TEST_CASE("homogeneous norm and box distance")
{
    const GroupParams params(1, 1);
    CHECK(homogeneous_norm(JetPoint::identity(params)) == 0.0);

    const JetPoint p = filiform(1, 1.0, {3.0, 2.0});
    CHECK(homogeneous_norm(p) == doctest::Approx(2.0));  // max{1, 2, sqrt(3)}

    CHECK(box_distance(p, p) == 0.0);
    CHECK(box_distance(JetPoint::identity(params), p) == doctest::Approx(2.0));

    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const GroupParams pr(2, 2);
        const JetPoint g = random_point(pr, rng);
        const JetPoint h = random_point(pr, rng);
        const double eps = rng.uniform(0.1, 5.0);
        CHECK(rel_error(homogeneous_norm(dilate(eps, g)), eps * homogeneous_norm(g)) < 1e-12);
        CHECK(rel_error(box_distance(dilate(eps, g), dilate(eps, h)), eps * box_distance(g, h)) <
              1e-10);
        // left invariance
        const JetPoint mover = random_point(pr, rng);
        CHECK(rel_error(box_distance(compose(mover, g), compose(mover, h)), box_distance(g, h)) <
              1e-10);
    }

    const JetPoint other_params = JetPoint::identity(GroupParams(2, 1));
    CHECK_THROWS_AS(box_distance(p, other_params), std::invalid_argument);
}

TEST_CASE("randomized law suite stays within tolerance")
{
    for (int n : {1, 2}) {
        for (int k : {1, 2, 3}) {
            const GroupCheckReport report = run_group_checks(GroupParams(n, k), 1000, 11);
            CHECK(report.pass(1e-10, 1e-10));
            CHECK(report.compose_oracle <= 1e-10);  // translated-polynomial oracle agrees
            CHECK(report.norm_asymmetry < 50.0);
        }
    }
}

TEST_CASE("parameter validation keeps factorials exact")
{
    CHECK_THROWS_AS(GroupParams(1, 9), std::invalid_argument);
    CHECK_THROWS_AS(GroupParams(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(GroupParams(0, 1), std::invalid_argument);
}

TEST_CASE("contact residual of sampled curves")
{
    const GroupParams params(1, 1);

    // constant path
    std::vector<double> times;
    std::vector<JetPoint> path;
    for (int i = 0; i < 5; ++i) {
        times.push_back(0.1 * i);
        path.push_back(filiform(1, 0.5, {0.25, 1.0}));
    }
    CHECK(contact_defect(times, path, MultiIndex({0})) == 0.0);

    // jet lift of t^2: u0 = t^2, u1 = 2t; the residual decays with the step
    const ExprPtr square = Expr::int_power(Expr::coordinate(0), 2);
    for (const double step : {1e-3, 1e-4}) {
        times.clear();
        path.clear();
        for (double t = 0.0; t <= 1.0 + 1e-12; t += step) {
            times.push_back(t);
            path.push_back(jet_to_point(square, std::vector<double>{t}, 1));
        }
        const double defect = contact_defect(times, path, MultiIndex({0}));
        CHECK(defect <= 10.0 * step);  // first-order decay, central differences do better
    }

    // moving only the bottom coordinate at unit speed is maximally non-horizontal
    times.clear();
    path.clear();
    for (int i = 0; i <= 10; ++i) {
        times.push_back(0.1 * i);
        path.push_back(filiform(1, 0.0, {0.1 * i, 0.0}));
    }
    CHECK(contact_defect(times, path, MultiIndex({0})) == doctest::Approx(1.0));

    CHECK_THROWS_AS(contact_defect(std::vector<double>{0.0, 1.0},
                                   std::vector<JetPoint>{path[0], path[1]}, MultiIndex({0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(contact_defect(times, path, MultiIndex({1})), std::invalid_argument);
}

TEST_CASE("json round trip keeps canonical key order")
{
    const JetPoint p = JetPoint(GroupParams(2, 2), {0.5, -1.0}, {1, 2, 3, 4, 5, 6});
    const std::string text = to_json_string(p);
    CHECK(text.find("\"0,0\"") != std::string::npos);
    CHECK(text.find("\"0,0\"") < text.find("\"1,0\""));
    CHECK(text.find("\"1,0\"") < text.find("\"0,1\""));
    CHECK(text.find("\"2,0\"") < text.find("\"1,1\""));

    const JetPoint q = jet_point_from_json(text);
    CHECK(max_coord_dev(p, q) == 0.0);
    CHECK(q.params() == p.params());
}
