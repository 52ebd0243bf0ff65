#include "jetspace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "jetspace/forms.hpp"
#include "jetspace/numeric.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

namespace jetspace {

namespace {

constexpr double kPi = std::numbers::pi;

double manhattan(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

double euclid(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double circle_geodesic(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
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

const BodyFunction& cached_body(int dim, int order)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, BodyFunction> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find({dim, order});
    if (it == cache.end()) it = cache.emplace(std::make_pair(dim, order), make_body(dim, order)).first;
    return it->second;
}

double kth_derivative_end_poly(int order, double theta)
{
    const double pt[1] = {theta};
    return jet_eval(cached_fk(order), pt, order).derivative(MultiIndex({order}));
}

// ---- samplers ----

struct PairSampler {
    // Fills both domain points; returns false for a degenerate draw.
    std::function<bool(long attempt, std::vector<double>& a, std::vector<double>& b)> draw;
    std::function<double(std::span<const double>, std::span<const double>)> ratio;
};

std::vector<double> random_direction(Rng& rng, int dim)
{
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& c : v) {
            c = rng.normal();
            norm += c * c;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& c : v) c /= norm;
    return v;
}

std::vector<double> perturb_direction(Rng& rng, std::span<const double> x, double delta)
{
    std::vector<double> v(x.begin(), x.end());
    for (double& c : v) c += delta * rng.normal();
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm == 0.0) return std::vector<double>(x.begin(), x.end());
    for (double& c : v) c /= norm;
    return v;
}

PairSampler make_circle_sampler(const SamplerSpec& spec, double eps, Kronecker& kron)
{
    PairSampler sampler;
    const int order = spec.order;
    sampler.ratio = [order](std::span<const double> a, std::span<const double> b) {
        const double dom = circle_geodesic(a[0], b[0]);
        // below the noise floor a ratio measures rounding, not the map
        if (dom < 1e-5) return std::numeric_limits<double>::quiet_NaN();
        return box_distance(embed_circle(order, a[0]), embed_circle(order, b[0])) / dom;
    };
    sampler.draw = [&kron, eps](long attempt, std::vector<double>& a, std::vector<double>& b) {
        const std::vector<double>& v = kron.next();
        const double scale = std::pow(2.0, -12.0 * v[2]);
        double theta = 0.0, eta = 0.0;
        a.resize(1);
        b.resize(1);
        switch (attempt % 6) {
            case 0:  // hugging the first seam from both sides, at every scale
                theta = eps * v[0] * scale;
                eta = eps * v[1] * scale;
                a[0] = theta;
                b[0] = 2.0 * kPi - eta;
                break;
            case 1:  // hugging the opposite seam
                theta = kPi - eps * v[0] * scale;
                eta = kPi - eps * v[1] * scale;
                a[0] = theta;
                b[0] = 2.0 * kPi - eta;
                break;
            case 2:  // one point far from both seams
                a[0] = eps + (kPi - 2.0 * eps) * v[0];
                b[0] = 2.0 * kPi - kPi * v[1];
                break;
            case 3:  // arguments far apart across the seam
                if (v[3] < 0.5) {
                    a[0] = eps * v[0];
                    b[0] = 2.0 * kPi - (kPi - eps * v[1]);
                } else {
                    a[0] = kPi - eps * v[0];
                    b[0] = 2.0 * kPi - eps * v[1];
                }
                break;
            case 4:  // generic
                a[0] = 2.0 * kPi * v[0];
                b[0] = 2.0 * kPi * v[1];
                break;
            default:  // nearby points on a common side, at every scale
                a[0] = 2.0 * kPi * v[0];
                b[0] = a[0] + ((v[3] < 0.5) ? -1.0 : 1.0) * (0.25 + 0.5 * v[1]) * scale;
                break;
        }
        return true;
    };
    return sampler;
}

PairSampler make_sphere_sampler(const SamplerSpec& spec, double eps, Kronecker& kron, Rng& rng)
{
    PairSampler sampler;
    const BodyFunction& body = cached_body(spec.dim, spec.order);
    const int n = spec.dim;
    sampler.ratio = [&body](std::span<const double> a, std::span<const double> b) {
        const double dom = manhattan(a, b);
        if (dom < 1e-5) return std::numeric_limits<double>::quiet_NaN();
        const SpherePoint p = SpherePoint::from_ambient(std::vector<double>(a.begin(), a.end()));
        const SpherePoint q = SpherePoint::from_ambient(std::vector<double>(b.begin(), b.end()));
        return box_distance(embed_sphere(body, p), embed_sphere(body, q)) / dom;
    };
    sampler.draw = [&kron, &rng, eps, n](long attempt, std::vector<double>& a, std::vector<double>& b) {
        const std::vector<double>& v = kron.next();
        const double scale = std::pow(2.0, -12.0 * v[2]);
        std::vector<double> x = random_direction(rng, n);
        std::vector<double> y;
        double theta = 0.0, eta = 0.0;
        bool lower_b = true;
        switch (attempt % 6) {
            case 0:  // both equator-hugging, directions almost equal, all scales
                y = perturb_direction(rng, x, 0.1 * scale);
                theta = 1.0 - eps * v[0] * scale;
                eta = 1.0 - eps * v[1] * scale;
                break;
            case 1:  // the whole validated annulus, directions within the cap
                y = perturb_direction(rng, x, 0.25 / std::sqrt(static_cast<double>(n)));
                theta = 1.0 - eps * v[0];
                eta = 1.0 - eps * v[1];
                break;
            case 2:  // one point far from the equator
                y = random_direction(rng, n);
                theta = (1.0 - eps) * v[0];
                eta = v[1];
                break;
            case 3: {  // antipodal-ish
                y = perturb_direction(rng, x, 0.2);
                for (double& c : y) c = -c;
                theta = v[0];
                eta = v[1];
                break;
            }
            case 4:  // generic opposite-side pair
                y = random_direction(rng, n);
                theta = v[0];
                eta = v[1];
                break;
            default:  // nearby same-side pair, all scales
                y = perturb_direction(rng, x, 0.1 * scale);
                theta = v[0];
                eta = std::clamp(theta + ((v[3] < 0.5) ? -1.0 : 1.0) * (0.25 + 0.5 * v[1]) * scale,
                                 0.0, 1.0);
                lower_b = false;
                break;
        }
        const SpherePoint p = SpherePoint::from_polar(std::move(x), std::min(theta, 1.0), false);
        const SpherePoint q = SpherePoint::from_polar(std::move(y), std::min(eta, 1.0), lower_b);
        a = p.ambient;
        b = q.ambient;
        return true;
    };
    return sampler;
}

PairSampler make_polar_sampler(const SamplerSpec& spec, Kronecker& kron, Rng& rng)
{
    PairSampler sampler;
    const int n = spec.dim;
    sampler.ratio = [](std::span<const double> a, std::span<const double> b) {
        const double dom = manhattan(a, b);
        if (dom < 1e-5) return std::numeric_limits<double>::quiet_NaN();
        return manhattan(polar_lift(a).ambient, polar_lift(b).ambient) / dom;
    };
    sampler.draw = [&kron, &rng, n](long attempt, std::vector<double>& a, std::vector<double>& b) {
        const std::vector<double>& v = kron.next();
        const double scale = std::pow(2.0, -12.0 * v[2]);
        const auto ball_point = [&](double radius_unit) {
            std::vector<double> p = random_direction(rng, n);
            const double r = std::pow(radius_unit, 1.0 / n);
            for (double& c : p) c *= r;
            return p;
        };
        switch (attempt % 3) {
            case 0:
                a = ball_point(v[0]);
                b = ball_point(v[1]);
                break;
            case 1: {
                a = ball_point(v[0]);
                b = a;
                for (double& c : b) c += 0.1 * scale * rng.normal();
                double norm = 0.0;
                for (double c : b) norm += c * c;
                norm = std::sqrt(norm);
                if (norm > 1.0)
                    for (double& c : b) c /= norm * (1.0 + 1e-12);
                break;
            }
            default: {  // both near the ball boundary
                std::vector<double> x = random_direction(rng, n);
                std::vector<double> y = perturb_direction(rng, x, 0.2 * scale);
                a = x;
                b = y;
                for (double& c : a) c *= 1.0 - v[0] * scale;
                for (double& c : b) c *= 1.0 - v[1] * scale;
                break;
            }
        }
        return true;
    };
    return sampler;
}

PairSampler make_lambda_sampler(const SamplerSpec& spec, Kronecker& kron, Rng& rng)
{
    PairSampler sampler;
    const int n = spec.dim;
    sampler.ratio = [](std::span<const double> a, std::span<const double> b) {
        const double dom = euclid(a, b);
        if (dom < 1e-4) return std::numeric_limits<double>::quiet_NaN();
        return euclid(lambda_map(a), lambda_map(b)) / dom;
    };
    sampler.draw = [&kron, &rng, n](long attempt, std::vector<double>& a, std::vector<double>& b) {
        const std::vector<double>& v = kron.next();
        // separations stay >= ~1e-4 so ratio noise stays far below the bracket slack
        const double scale = std::pow(2.0, -12.0 * v[2]);
        const auto cube_point = [&]() {
            std::vector<double> p(static_cast<std::size_t>(n));
            for (double& c : p) c = rng.uniform(-1.0, 1.0);
            return p;
        };
        const auto clamp_cube = [](std::vector<double>& p) {
            for (double& c : p) c = std::clamp(c, -1.0, 1.0);
        };
        switch (attempt % 4) {
            case 0:
                a = cube_point();
                b = cube_point();
                break;
            case 1:
                a = cube_point();
                b = a;
                for (double& c : b) c += 0.1 * scale * rng.normal();
                clamp_cube(b);
                break;
            case 2: {  // straddle a sector boundary
                a = cube_point();
                const int i = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
                int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
                if (j == i) j = (j + 1) % n;
                const double level = 0.3 + 0.7 * v[0];
                a[static_cast<std::size_t>(i)] = level;
                a[static_cast<std::size_t>(j)] = level * (1.0 - 0.05 * scale);
                b = a;
                b[static_cast<std::size_t>(j)] = level * (1.0 + 0.05 * scale);
                clamp_cube(a);
                clamp_cube(b);
                break;
            }
            default: {  // both close to the origin
                a = cube_point();
                b = cube_point();
                for (double& c : a) c *= scale;
                for (double& c : b) c *= scale;
                break;
            }
        }
        return true;
    };
    return sampler;
}

PairSampler make_identity_sampler(const SamplerSpec& spec, Rng& rng)
{
    PairSampler sampler;
    const int n = spec.dim;
    sampler.ratio = [](std::span<const double> a, std::span<const double> b) {
        const double dom = manhattan(a, b);
        if (dom == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return manhattan(a, b) / dom;
    };
    sampler.draw = [&rng, n](long, std::vector<double>& a, std::vector<double>& b) {
        a = random_direction(rng, n);
        b = random_direction(rng, n);
        const double ra = rng.uniform(), rb = rng.uniform();
        for (double& c : a) c *= ra;
        for (double& c : b) c *= rb;
        return true;
    };
    return sampler;
}

double resolve_eps(const SamplerSpec& spec)
{
    if (spec.eps_hat > 0.0) return spec.eps_hat;
    switch (spec.map) {
        case MapKind::Circle:
            return linear_regime_circle(spec.order);
        case MapKind::Sphere:
            return linear_regime_sphere(cached_body(spec.dim, spec.order)).eps;
        default:
            return 0.25;
    }
}

}  // namespace

std::string map_kind_name(MapKind kind)
{
    switch (kind) {
        case MapKind::Identity: return "identity";
        case MapKind::Circle: return "circle";
        case MapKind::Sphere: return "sphere";
        case MapKind::PolarLift: return "polar";
        case MapKind::LambdaCube: return "lambda";
    }
    return "?";
}

MapKind map_kind_from_name(const std::string& name)
{
    if (name == "identity") return MapKind::Identity;
    if (name == "circle") return MapKind::Circle;
    if (name == "sphere") return MapKind::Sphere;
    if (name == "polar") return MapKind::PolarLift;
    if (name == "lambda") return MapKind::LambdaCube;
    throw std::invalid_argument("unknown map name: " + name);
}

DistortionReport distortion_scan(const SamplerSpec& spec)
{
    if (spec.pairs < 1) throw std::invalid_argument("distortion_scan: empty sample");
    if (spec.map != MapKind::Circle && spec.dim < 1)
        throw std::invalid_argument("distortion_scan: dim must be >= 1");
    if (spec.map == MapKind::Sphere && spec.dim < 2)
        throw std::invalid_argument("distortion_scan: sphere map needs dim >= 2");

    const double eps = resolve_eps(spec);
    Kronecker kron(4, spec.seed);
    Rng rng(spec.seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);

    PairSampler sampler;
    switch (spec.map) {
        case MapKind::Identity: sampler = make_identity_sampler(spec, rng); break;
        case MapKind::Circle: sampler = make_circle_sampler(spec, eps, kron); break;
        case MapKind::Sphere: sampler = make_sphere_sampler(spec, eps, kron, rng); break;
        case MapKind::PolarLift: sampler = make_polar_sampler(spec, kron, rng); break;
        case MapKind::LambdaCube: sampler = make_lambda_sampler(spec, kron, rng); break;
    }

    DistortionReport report;
    report.map_name = map_kind_name(spec.map);
    report.pairs = spec.pairs;
    report.seed = spec.seed;
    report.eps_hat = eps;
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;

    long checkpoint = 10;
    std::vector<double> a, b;
    long count = 0;
    for (long attempt = 0; count < spec.pairs && attempt < 8 * spec.pairs + 64; ++attempt) {
        if (!sampler.draw(attempt, a, b)) continue;
        const double r = sampler.ratio(a, b);
        if (!std::isfinite(r)) continue;
        ++count;
        if (r < report.min_ratio) {
            report.min_ratio = r;
            report.argmin = {a, b, r};
        }
        if (r > report.max_ratio) {
            report.max_ratio = r;
            report.argmax = {a, b, r};
        }
        if (count == checkpoint || count == spec.pairs) {
            report.min_history.emplace_back(count, report.min_ratio);
            report.max_history.emplace_back(count, report.max_ratio);
            while (checkpoint <= count) checkpoint *= 10;
        }
    }
    if (count < spec.pairs)
        throw std::runtime_error("distortion_scan: sampler kept producing degenerate pairs");
    return report;
}

double replay_ratio(const SamplerSpec& spec, std::span<const double> first,
                    std::span<const double> second)
{
    switch (spec.map) {
        case MapKind::Identity:
            return manhattan(first, second) / manhattan(first, second);
        case MapKind::Circle:
            return box_distance(embed_circle(spec.order, first[0]),
                                embed_circle(spec.order, second[0])) /
                   circle_geodesic(first[0], second[0]);
        case MapKind::Sphere: {
            const BodyFunction& body = cached_body(spec.dim, spec.order);
            const SpherePoint p =
                SpherePoint::from_ambient(std::vector<double>(first.begin(), first.end()));
            const SpherePoint q =
                SpherePoint::from_ambient(std::vector<double>(second.begin(), second.end()));
            return box_distance(embed_sphere(body, p), embed_sphere(body, q)) /
                   manhattan(first, second);
        }
        case MapKind::PolarLift:
            return manhattan(polar_lift(first).ambient, polar_lift(second).ambient) /
                   manhattan(first, second);
        case MapKind::LambdaCube:
            return euclid(lambda_map(first), lambda_map(second)) / euclid(first, second);
    }
    throw std::invalid_argument("replay_ratio: unknown map");
}

std::string to_json_string(const DistortionReport& report)
{
    nlohmann::ordered_json j;
    j["map"] = report.map_name;
    j["pairs"] = report.pairs;
    j["seed"] = report.seed;
    j["eps_hat"] = report.eps_hat;
    j["min_ratio"] = report.min_ratio;
    j["max_ratio"] = report.max_ratio;
    j["argmin"] = {{"first", report.argmin.first},
                   {"second", report.argmin.second},
                   {"ratio", report.argmin.ratio}};
    j["argmax"] = {{"first", report.argmax.first},
                   {"second", report.argmax.second},
                   {"ratio", report.argmax.ratio}};
    j["min_history"] = report.min_history;
    j["max_history"] = report.max_history;
    return j.dump(2);
}

double segment_lip_bound(const ExprPtr& g, std::span<const double> x, std::span<const double> y,
                         int order, int samples)
{
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("segment_lip_bound: dimension mismatch");
    if (samples < 2) throw std::invalid_argument("segment_lip_bound: need at least 2 samples");

    const int dim = static_cast<int>(x.size());
    const std::vector<MultiIndex> top = enumerate_indices(dim, order);
    std::vector<MultiIndex> raised;
    for (const auto& idx : top)
        for (int j = 0; j < dim; ++j) raised.push_back(idx.plus_unit(j));

    std::vector<double> z(x.size());
    const auto speed_sq = [&](double t) {
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + t * (y[i] - x[i]);
        const TruncatedJet jet = jet_eval(g, z, order + 1);
        double s = 1.0;
        for (const auto& idx : raised) {
            const double d = jet.derivative(idx);
            s += d * d;
        }
        return s;
    };

    double best = 0.0;
    int arg = 0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double v = speed_sq(t);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    // a short golden-section polish around the discrete argmax
    double lo = static_cast<double>(std::max(0, arg - 1)) / (samples - 1);
    double hi = static_cast<double>(std::min(samples - 1, arg + 1)) / (samples - 1);
    constexpr double kGolden = 0.6180339887498949;
    double c = hi - kGolden * (hi - lo);
    double d = lo + kGolden * (hi - lo);
    double fc = speed_sq(c);
    double fd = speed_sq(d);
    for (int it = 0; it < 3; ++it) {
        best = std::max({best, fc, fd});
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGolden * (hi - lo);
            fc = speed_sq(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGolden * (hi - lo);
            fd = speed_sq(d);
        }
    }
    best = std::max({best, fc, fd});

    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dist += (y[i] - x[i]) * (y[i] - x[i]);
    return std::sqrt(best) * std::sqrt(dist);
}

CaseIBound case_i_lower_bound(int order, double theta, double eta)
{
    const double eps = linear_regime_circle(order);
    if (theta < 0.0 || eta < 0.0 || theta > eps || eta > eps)
        throw std::out_of_range("case_i_lower_bound: inputs outside the estimated linear regime");
    CaseIBound out;
    out.value = std::abs(kth_derivative_end_poly(order, theta) + kth_derivative_end_poly(order, eta));
    out.bound = std::pow(kPi, order + 1) * static_cast<double>(factorial(order + 1)) / 2.0 *
                (theta + eta);
    out.holds = out.value + kAbsTol >= out.bound;
    return out;
}

double linear_regime_circle(int order)
{
    static std::mutex mu;
    static std::map<int, double> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    const double rate = std::pow(kPi, order + 1) * static_cast<double>(factorial(order + 1)) / 2.0;
    const double flip = (order % 2 == 0) ? 1.0 : -1.0;
    double eps = 0.5;
    for (; eps > 1e-6; eps /= 2.0) {
        bool ok = true;
        for (int g = 0; g < 1000 && ok; ++g) {
            const double t = eps * (g + 1) / 1000.0;
            if (kth_derivative_end_poly(order, t) < rate * t) ok = false;
            // near the far end the sign alternates with the parity of the order
            if (flip * kth_derivative_end_poly(order, kPi - t) < rate * t) ok = false;
        }
        if (ok) break;
    }
    cache[order] = eps;
    return eps;
}

SphereRegime linear_regime_sphere(const BodyFunction& body)
{
    const int n = body.dim;
    const int k = body.order;
    const double cap = 1.0 / (4.0 * std::sqrt(static_cast<double>(n)));

    Rng rng(7);
    std::vector<std::vector<double>> directions;
    for (int i = 0; i < 200; ++i) directions.push_back(random_direction(rng, n));

    std::vector<double> x(static_cast<std::size_t>(n));
    for (double eps = 0.5; eps > 1e-4; eps /= 2.0) {
        bool ok = true;
        double cmin = std::numeric_limits<double>::infinity();
        double cmax = 0.0;
        for (const auto& dir : directions) {
            for (int ri = 0; ri < 20 && ok; ++ri) {
                const double r = 1.0 - eps * (ri + 0.5) / 20.0;
                for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
                const TruncatedJet jet = jet_eval(body.f, x, k);
                for (int i = 0; i < n; ++i) {
                    const double xi = x[static_cast<std::size_t>(i)];
                    if (std::abs(xi) <= cap) continue;
                    std::vector<int> e(static_cast<std::size_t>(n), 0);
                    e[static_cast<std::size_t>(i)] = k;
                    const double deriv = jet.derivative(MultiIndex(std::move(e)));
                    const double expected = (k % 2 == 0) ? 1.0 : ((xi > 0.0) ? -1.0 : 1.0);
                    const double aligned = deriv * expected;
                    if (aligned <= 0.0) {
                        ok = false;
                        break;
                    }
                    const double ratio = aligned / (1.0 - r);
                    cmin = std::min(cmin, ratio);
                    cmax = std::max(cmax, ratio);
                }
            }
            if (!ok) break;
        }
        if (ok && cmax > 0.0) {
            return {eps, std::max(cmax, 1.0 / cmin)};
        }
    }
    throw std::runtime_error("linear_regime_sphere: no validated annulus found");
}

}  // namespace jetspace
