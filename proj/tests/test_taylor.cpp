#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "jetspace/checks.hpp"
#include "jetspace/embeddings.hpp"
#include "jetspace/numeric.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

using namespace jetspace;

namespace {

constexpr double kPi = std::numbers::pi;

ExprPtr random_polynomial(int dim, Rng& rng)
{
    std::vector<ExprPtr> terms;
    for (int t = 0; t < 5; ++t) {
        ExprPtr term = Expr::constant(rng.uniform(-1.0, 1.0));
        int degree = static_cast<int>(rng.next() % 4);
        while (degree-- > 0) {
            term = Expr::product(term, Expr::coordinate(static_cast<int>(rng.next() % dim)));
        }
        terms.push_back(std::move(term));
    }
    return Expr::sum(std::move(terms));
}

}  // namespace

TEST_CASE("constants and coordinates")
{
    const TruncatedJet jet = jet_eval(Expr::constant(2.5), std::vector<double>{0.3, 0.7}, 3);
    CHECK(jet.value() == 2.5);
    for (std::size_t i = 1; i < jet.derivatives().size(); ++i) CHECK(jet.derivatives()[i] == 0.0);

    const TruncatedJet c = jet_eval(Expr::coordinate(1), std::vector<double>{0.3, 0.7}, 2);
    CHECK(c.value() == 0.7);
    CHECK(c.derivative(MultiIndex({0, 1})) == 1.0);
    CHECK(c.derivative(MultiIndex({1, 0})) == 0.0);
    CHECK(c.derivative(MultiIndex({0, 2})) == 0.0);
}

TEST_CASE("end-flat polynomial jets at hand-checked points")
{
    const ExprPtr f1 = make_fk(1);
    const TruncatedJet at0 = jet_eval(f1, std::vector<double>{0.0}, 2);
    CHECK(at0.derivative(MultiIndex({0})) == doctest::Approx(0.0));
    CHECK(at0.derivative(MultiIndex({1})) == doctest::Approx(0.0));
    CHECK(at0.derivative(MultiIndex({2})) == doctest::Approx(2.0 * kPi * kPi));

    const JetPoint mid = jet_to_point(f1, std::vector<double>{kPi / 2.0}, 1);
    CHECK(mid.base()[0] == doctest::Approx(kPi / 2.0));
    CHECK(mid.coord(MultiIndex({1})) == doctest::Approx(0.0));
    CHECK(mid.coord(MultiIndex({0})) == doctest::Approx(std::pow(kPi, 4) / 16.0));

    const JetPoint zero = jet_to_point(Expr::constant(0.0), std::vector<double>{0.4}, 2);
    for (double c : zero.coords()) CHECK(c == 0.0);
}

TEST_CASE("analytic primitives against closed-form derivatives")
{
    const ExprPtr x = Expr::coordinate(0);
    const std::vector<double> at{0.6};

    const TruncatedJet s = jet_eval(Expr::sin_of(x), at, 3);
    CHECK(s.derivative(MultiIndex({1})) == doctest::Approx(std::cos(0.6)));
    CHECK(s.derivative(MultiIndex({2})) == doctest::Approx(-std::sin(0.6)));
    CHECK(s.derivative(MultiIndex({3})) == doctest::Approx(-std::cos(0.6)));

    const TruncatedJet e = jet_eval(Expr::exp_of(x), at, 3);
    for (int j = 0; j <= 3; ++j)
        CHECK(e.derivative(MultiIndex({j})) == doctest::Approx(std::exp(0.6)));

    const TruncatedJet q = jet_eval(Expr::sqrt_of(x), std::vector<double>{4.0}, 2);
    CHECK(q.value() == doctest::Approx(2.0));
    CHECK(q.derivative(MultiIndex({1})) == doctest::Approx(0.25));
    CHECK(q.derivative(MultiIndex({2})) == doctest::Approx(-1.0 / 32.0));

    const TruncatedJet r = jet_eval(Expr::reciprocal_of(x), std::vector<double>{2.0}, 2);
    CHECK(r.value() == doctest::Approx(0.5));
    CHECK(r.derivative(MultiIndex({1})) == doctest::Approx(-0.25));
    CHECK(r.derivative(MultiIndex({2})) == doctest::Approx(0.25));
}

TEST_CASE("flat cutoff is exactly flat at and below zero")
{
    const ExprPtr sigma = Expr::flat_exp_of(Expr::coordinate(0));
    for (const double t : {-2.0, -0.1, 0.0}) {
        const TruncatedJet jet = jet_eval(sigma, std::vector<double>{t}, 5);
        for (double d : jet.derivatives()) CHECK(d == 0.0);
    }
    const TruncatedJet pos = jet_eval(sigma, std::vector<double>{0.5}, 2);
    CHECK(pos.value() == doctest::Approx(std::exp(-2.0)));
    // sigma'(t) = sigma(t)/t^2
    CHECK(pos.derivative(MultiIndex({1})) == doctest::Approx(std::exp(-2.0) * 4.0));
}

TEST_CASE("domain declarations turn bad inputs into errors, not NaNs")
{
    const ExprPtr root = Expr::sqrt_of(Expr::coordinate(0));
    CHECK_THROWS_AS(jet_eval(root, std::vector<double>{0.0}, 1), DomainError);
    CHECK_THROWS_AS(jet_eval(root, std::vector<double>{-1.0}, 1), DomainError);

    const ExprPtr guarded = Expr::sqrt_of(Expr::coordinate(0), 0.25);
    CHECK_THROWS_AS(jet_eval(guarded, std::vector<double>{0.2}, 1), DomainError);
    CHECK(jet_eval(guarded, std::vector<double>{0.3}, 1).value() == doctest::Approx(std::sqrt(0.3)));

    CHECK_THROWS_AS(jet_eval(Expr::reciprocal_of(Expr::coordinate(0)), std::vector<double>{-0.5}, 1),
                    DomainError);
    CHECK_THROWS_AS(jet_eval(root, std::vector<double>{1.0}, 10), std::invalid_argument);
}

TEST_CASE("identically-zero factors mask the other operand's domain")
{
    // sigma(t - 1) vanishes identically for t <= 1, so the product must not
    // evaluate sqrt at its singularity
    const ExprPtr masked = Expr::product(Expr::flat_exp_of(sub(Expr::coordinate(0), Expr::constant(1.0))),
                                         Expr::sqrt_of(Expr::coordinate(0)));
    const TruncatedJet jet = jet_eval(masked, std::vector<double>{0.0}, 3);
    for (double d : jet.derivatives()) CHECK(d == 0.0);
}

TEST_CASE("product rule consistency at random points")
{
    Rng rng(17);
    const JetLayout& lay = jet_layout(2, 3);
    for (int trial = 0; trial < 60; ++trial) {
        const ExprPtr g = random_polynomial(2, rng);
        const ExprPtr h = random_polynomial(2, rng);
        const std::vector<double> pt{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const TruncatedJet jg = jet_eval(g, pt, 3);
        const TruncatedJet jh = jet_eval(h, pt, 3);
        const TruncatedJet jgh = jet_eval(Expr::product(g, h), pt, 3);
        // truncated convolution of the Taylor coefficients
        for (int i = 0; i < lay.size(); ++i) {
            double acc = 0.0;
            for (int a = 0; a < lay.size(); ++a) {
                for (int b = 0; b < lay.size(); ++b) {
                    if (lay.at(a).order() + lay.at(b).order() != lay.at(i).order()) continue;
                    bool sums = true;
                    for (int l = 0; l < 2; ++l) sums = sums && lay.at(a)[l] + lay.at(b)[l] == lay.at(i)[l];
                    if (!sums) continue;
                    acc += jg.taylor_coefficient(lay.at(a)) * jh.taylor_coefficient(lay.at(b));
                }
            }
            CHECK(rel_error(jgh.taylor_coefficient(lay.at(i)), acc) < 1e-10);
        }
    }
}

TEST_CASE("mixed partials agree with iterated finite differences")
{
    Rng rng(19);
    const double h = 1e-4;
    for (int trial = 0; trial < 20; ++trial) {
        const ExprPtr g = Expr::product(Expr::sin_of(Expr::coordinate(0)),
                                        Expr::exp_of(scale(0.3, Expr::coordinate(1))));
        const std::vector<double> pt{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double analytic = jet_eval(g, pt, 2).derivative(MultiIndex({1, 1}));
        const auto value = [&](double dx, double dy) {
            return eval(g, std::vector<double>{pt[0] + dx, pt[1] + dy});
        };
        const double fd =
            (value(h, h) - value(h, -h) - value(-h, h) + value(-h, -h)) / (4.0 * h * h);
        CHECK(rel_error(analytic, fd) < 1e-4);
    }
}

TEST_CASE("first-order derivatives match central differences across the suite")
{
    CHECK(run_jet_checks(1, 2, 60, 23).pass(1e-6));
    CHECK(run_jet_checks(2, 1, 40, 29).pass(1e-6));
}

TEST_CASE("body jets vanish through order k on the unit sphere")
{
    const BodyFunction body = make_body(2, 2);
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        const double a = rng.uniform(0.0, 2.0 * kPi);
        const std::vector<double> x{std::cos(a), std::sin(a)};
        const TruncatedJet jet = jet_eval(body.f, x, 2);
        for (double d : jet.derivatives()) CHECK(std::abs(d) <= 1e-12);
    }
}
