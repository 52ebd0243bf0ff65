#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "jetspace/embeddings.hpp"
#include "jetspace/metrics.hpp"
#include "jetspace/numeric.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

using namespace jetspace;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("segment bound: constants, the hand value, linear scaling")
{
    const ExprPtr zero = Expr::constant(0.0);
    const double plain =
        segment_lip_bound(zero, std::vector<double>{0.0}, std::vector<double>{2.0}, 1, 16);
    CHECK(plain == doctest::Approx(2.0));

    const ExprPtr f1 = make_fk(1);
    const double bound =
        segment_lip_bound(f1, std::vector<double>{0.0}, std::vector<double>{0.1}, 1);
    const double expected = 0.1 * std::sqrt(1.0 + std::pow(2.0 * kPi * kPi, 2));
    CHECK(rel_error(bound, expected) < 1e-4);

    const ExprPtr linear = scale(3.0, Expr::coordinate(0));
    const double one =
        segment_lip_bound(linear, std::vector<double>{0.0}, std::vector<double>{1.0}, 1, 32);
    const double two =
        segment_lip_bound(linear, std::vector<double>{0.0}, std::vector<double>{2.0}, 1, 32);
    CHECK(two == doctest::Approx(2.0 * one));

    CHECK_THROWS_AS(segment_lip_bound(f1, std::vector<double>{0.0}, std::vector<double>{1.0}, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("box distance is controlled by the segment bound")
{
    const ExprPtr f1 = make_fk(1);
    Rng rng(67);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const double a = rng.uniform(0.0, kPi);
        const double b = rng.uniform(0.0, kPi);
        if (a == b) continue;
        const double box = box_distance(jet_to_point(f1, std::vector<double>{a}, 1),
                                        jet_to_point(f1, std::vector<double>{b}, 1));
        const double bound = segment_lip_bound(f1, std::vector<double>{a}, std::vector<double>{b}, 1);
        worst = std::max(worst, box / bound);
    }
    // a single empirical constant; the box quasi-metric sits below a fixed
    // multiple of the horizontal-segment bound
    CHECK(worst < 8.0);
    MESSAGE("empirical box/segment constant: ", worst);
}

TEST_CASE("near-seam lower bound")
{
    const CaseIBound degenerate = case_i_lower_bound(1, 0.0, 0.0);
    CHECK(degenerate.value == 0.0);
    CHECK(degenerate.bound == 0.0);
    CHECK(degenerate.holds);

    const CaseIBound k1 = case_i_lower_bound(1, 1e-3, 1e-3);
    CHECK(k1.holds);
    CHECK(rel_error(k1.value, 2.0 * 2.0 * kPi * kPi * 1e-3) < 0.01);
    CHECK(rel_error(k1.bound, kPi * kPi * 2e-3) < 1e-12);
    CHECK(k1.value / k1.bound == doctest::Approx(2.0).epsilon(0.05));

    const CaseIBound k2 = case_i_lower_bound(2, 1e-3, 0.0);
    CHECK(k2.holds);
    CHECK(k2.value / k2.bound == doctest::Approx(2.0).epsilon(0.1));

    CHECK_THROWS_AS(case_i_lower_bound(1, 0.9, 0.0), std::out_of_range);
}

TEST_CASE("estimated linear regimes")
{
    for (int k = 1; k <= 3; ++k) {
        const double eps = linear_regime_circle(k);
        CHECK(eps >= 1.0 / 128.0);
        CHECK(eps <= 0.5);
        // re-check the bound on a fresh grid inside the reported regime
        const ExprPtr fk = make_fk(k);
        const double rate = std::pow(kPi, k + 1) * static_cast<double>(factorial(k + 1)) / 2.0;
        for (int g = 1; g <= 100; ++g) {
            const double t = eps * g / 100.0;
            const double d = jet_eval(fk, std::vector<double>{t}, k).derivative(MultiIndex({k}));
            CHECK(d >= rate * t * (1.0 - 1e-12));
        }
    }

    const BodyFunction body = make_body(2, 1);
    const SphereRegime regime = linear_regime_sphere(body);
    CHECK(regime.eps > 0.0);
    CHECK(regime.c_hat >= 1.0);
    CHECK(regime.c_hat < 100.0);
}

TEST_CASE("identity scan is exactly flat")
{
    SamplerSpec spec;
    spec.map = MapKind::Identity;
    spec.dim = 3;
    spec.pairs = 2000;
    const DistortionReport report = distortion_scan(spec);
    CHECK(report.min_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cube squeeze scan stays inside the proven bracket")
{
    for (int n : {2, 3}) {
        SamplerSpec spec;
        spec.map = MapKind::LambdaCube;
        spec.dim = n;
        spec.pairs = 20000;
        const DistortionReport report = distortion_scan(spec);
        CHECK(report.min_ratio >= 1.0 / (3.0 * (n + 1)) - 1e-9);
        CHECK(report.max_ratio <= 3.0 + 1e-9);
    }
}

TEST_CASE("scan determinism and witness replay")
{
    SamplerSpec spec;
    spec.map = MapKind::Circle;
    spec.order = 2;
    spec.pairs = 3000;
    spec.seed = 5;
    const DistortionReport a = distortion_scan(spec);
    const DistortionReport b = distortion_scan(spec);
    CHECK(a.min_ratio == b.min_ratio);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.argmin.first == b.argmin.first);

    CHECK(std::abs(replay_ratio(spec, a.argmin.first, a.argmin.second) - a.argmin.ratio) < 1e-10);
    CHECK(std::abs(replay_ratio(spec, a.argmax.first, a.argmax.second) - a.argmax.ratio) < 1e-10);

    CHECK(!a.min_history.empty());
    CHECK(a.min_history.back().first == spec.pairs);

    const std::string json = to_json_string(a);
    CHECK(json.find("\"min_ratio\"") != std::string::npos);

    SamplerSpec bad = spec;
    bad.pairs = 0;
    CHECK_THROWS_AS(distortion_scan(bad), std::invalid_argument);
}

TEST_CASE("polar lift scan sits in a refinement-stable bracket")
{
    SamplerSpec spec;
    spec.map = MapKind::PolarLift;
    spec.dim = 2;
    spec.pairs = 5000;
    const DistortionReport small = distortion_scan(spec);
    spec.pairs = 50000;
    const DistortionReport big = distortion_scan(spec);
    CHECK(big.min_ratio > 0.5);
    CHECK(big.max_ratio < 4.0);
    CHECK(std::abs(big.min_ratio - small.min_ratio) / small.min_ratio < 0.10);
    CHECK(std::abs(big.max_ratio - small.max_ratio) / small.max_ratio < 0.10);
}

TEST_CASE("sphere scan has a positive, replayable floor")
{
    SamplerSpec spec;
    spec.map = MapKind::Sphere;
    spec.dim = 2;
    spec.order = 1;
    spec.pairs = 4000;
    const DistortionReport report = distortion_scan(spec);
    CHECK(report.min_ratio > 0.0);
    CHECK(report.max_ratio < 1e6);
    CHECK(std::abs(replay_ratio(spec, report.argmin.first, report.argmin.second) -
                   report.argmin.ratio) < 1e-10);
}
