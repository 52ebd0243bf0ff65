#include "jetspace/jetgroup.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

namespace jetspace {

namespace {

// For each coordinate slot i, the slots j with index(j) >= index(i) together
// with the difference index and its factorial, precomputed once per (n, k).
struct ComposeTable {
    struct Term {
        int upper;         // slot of J
        MultiIndex diff;   // J - I
        double inv_fact;   // 1 / (J - I)!
    };
    std::vector<std::vector<Term>> terms;  // per target slot
};

const ComposeTable& compose_table(const GroupParams& params)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<ComposeTable>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[{params.dim, params.order}];
    if (!slot) {
        const JetLayout& layout = jet_layout(params.dim, params.order);
        auto table = std::make_unique<ComposeTable>();
        table->terms.resize(static_cast<std::size_t>(layout.size()));
        for (int i = 0; i < layout.size(); ++i) {
            for (int j = 0; j < layout.size(); ++j) {
                if (!leq(layout.at(i), layout.at(j))) continue;
                MultiIndex diff = layout.at(j).minus(layout.at(i));
                const double inv_fact = 1.0 / static_cast<double>(factorial(diff));
                table->terms[static_cast<std::size_t>(i)].push_back({j, std::move(diff), inv_fact});
            }
        }
        slot = std::move(table);
    }
    return *slot;
}

void require_same_params(const JetPoint& lhs, const JetPoint& rhs, const char* what)
{
    if (!(lhs.params() == rhs.params()))
        throw std::invalid_argument(std::string(what) + ": group parameter mismatch");
}

}  // namespace

GroupParams::GroupParams(int n, int k) : dim(n), order(k)
{
    if (n < 1) throw std::invalid_argument("GroupParams: dim must be >= 1");
    if (k < 1 || k > 8) throw std::invalid_argument("GroupParams: order must be in [1, 8]");
}

JetPoint::JetPoint(GroupParams params, std::vector<double> base, std::vector<double> coords)
    : params_(params), base_(std::move(base)), coords_(std::move(coords))
{
    const JetLayout& lay = jet_layout(params_.dim, params_.order);
    if (static_cast<int>(base_.size()) != params_.dim)
        throw std::invalid_argument("JetPoint: base dimension mismatch");
    if (static_cast<int>(coords_.size()) != lay.size())
        throw std::invalid_argument("JetPoint: coordinate count mismatch");
    for (double v : base_)
        if (!std::isfinite(v)) throw std::invalid_argument("JetPoint: non-finite base coordinate");
    for (double v : coords_)
        if (!std::isfinite(v)) throw std::invalid_argument("JetPoint: non-finite jet coordinate");
}

JetPoint JetPoint::identity(GroupParams params)
{
    const JetLayout& lay = jet_layout(params.dim, params.order);
    return JetPoint(params, std::vector<double>(static_cast<std::size_t>(params.dim), 0.0),
                    std::vector<double>(static_cast<std::size_t>(lay.size()), 0.0));
}

double JetPoint::coord(const MultiIndex& idx) const
{
    return coords_[static_cast<std::size_t>(layout().position(idx))];
}

const JetLayout& JetPoint::layout() const
{
    return jet_layout(params_.dim, params_.order);
}

JetPoint compose(const JetPoint& lhs, const JetPoint& rhs)
{
    require_same_params(lhs, rhs, "compose");
    const auto& table = compose_table(lhs.params());
    const std::span<const double> y = rhs.base();

    std::vector<double> base(lhs.base().begin(), lhs.base().end());
    for (std::size_t i = 0; i < base.size(); ++i) base[i] += y[i];

    std::vector<double> coords(rhs.coords().begin(), rhs.coords().end());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        double acc = 0.0;
        for (const auto& term : table.terms[i]) {
            acc += lhs.coord(term.upper) * monomial(y, term.diff) * term.inv_fact;
        }
        coords[i] += acc;
    }
    return JetPoint(lhs.params(), std::move(base), std::move(coords));
}

JetPoint inverse(const JetPoint& p)
{
    const auto& table = compose_table(p.params());

    std::vector<double> base(p.base().begin(), p.base().end());
    for (double& v : base) v = -v;

    std::vector<double> coords(p.coords().size(), 0.0);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        double acc = 0.0;
        for (const auto& term : table.terms[i]) {
            acc += p.coord(term.upper) * monomial(base, term.diff) * term.inv_fact;
        }
        coords[i] = -acc;
    }
    return JetPoint(p.params(), std::move(base), std::move(coords));
}

JetPoint dilate(double factor, const JetPoint& p)
{
    if (!(factor > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
    const JetLayout& lay = p.layout();
    const int k = p.order();

    std::vector<double> base(p.base().begin(), p.base().end());
    for (double& v : base) v *= factor;

    std::vector<double> coords(p.coords().begin(), p.coords().end());
    for (int i = 0; i < lay.size(); ++i) {
        const int weight = k + 1 - lay.at(i).order();
        coords[static_cast<std::size_t>(i)] *= std::pow(factor, weight);
    }
    return JetPoint(p.params(), std::move(base), std::move(coords));
}

double homogeneous_norm(const JetPoint& p)
{
    double sq = 0.0;
    for (double v : p.base()) sq += v * v;
    double best = std::sqrt(sq);

    const JetLayout& lay = p.layout();
    const int k = p.order();
    for (int i = 0; i < lay.size(); ++i) {
        const int weight = k + 1 - lay.at(i).order();
        const double v = std::pow(std::abs(p.coord(i)), 1.0 / weight);
        best = std::max(best, v);
    }
    return best;
}

double box_distance(const JetPoint& lhs, const JetPoint& rhs)
{
    require_same_params(lhs, rhs, "box_distance");
    return homogeneous_norm(compose(inverse(lhs), rhs));
}

double contact_defect(std::span<const double> times, std::span<const JetPoint> points,
                      const MultiIndex& index)
{
    if (times.size() != points.size())
        throw std::invalid_argument("contact_defect: times/points size mismatch");
    if (times.size() < 3) throw std::invalid_argument("contact_defect: need at least 3 samples");
    const GroupParams params = points[0].params();
    if (index.dim() != params.dim || index.order() > params.order - 1)
        throw std::invalid_argument("contact_defect: index order must be <= k-1");
    const JetLayout& lay = jet_layout(params.dim, params.order);
    const int pos = lay.position(index);
    std::vector<int> up_pos(static_cast<std::size_t>(params.dim));
    for (int j = 0; j < params.dim; ++j)
        up_pos[static_cast<std::size_t>(j)] = lay.position(index.plus_unit(j));

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        if (!(points[i].params() == params))
            throw std::invalid_argument("contact_defect: mixed group parameters along path");
        const double dt = times[i + 1] - times[i - 1];
        if (!(dt > 0.0)) throw std::invalid_argument("contact_defect: times must be strictly increasing");
        const double du = (points[i + 1].coord(pos) - points[i - 1].coord(pos)) / dt;
        double drift = 0.0;
        for (int j = 0; j < params.dim; ++j) {
            const double dx = (points[i + 1].base()[static_cast<std::size_t>(j)] -
                               points[i - 1].base()[static_cast<std::size_t>(j)]) / dt;
            drift += points[i].coord(up_pos[static_cast<std::size_t>(j)]) * dx;
        }
        worst = std::max(worst, std::abs(du - drift));
    }
    return worst;
}

std::string to_json_string(const JetPoint& p)
{
    nlohmann::ordered_json j;
    j["n"] = p.dim();
    j["k"] = p.order();
    j["x"] = std::vector<double>(p.base().begin(), p.base().end());
    nlohmann::ordered_json u;
    const JetLayout& lay = p.layout();
    for (int i = 0; i < lay.size(); ++i) {
        u[lay.at(i).to_string()] = p.coord(i);
    }
    j["u"] = std::move(u);
    return j.dump();
}

JetPoint jet_point_from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    GroupParams params(j.at("n").get<int>(), j.at("k").get<int>());
    auto base = j.at("x").get<std::vector<double>>();
    const JetLayout& lay = jet_layout(params.dim, params.order);
    std::vector<double> coords(static_cast<std::size_t>(lay.size()), 0.0);
    const auto& u = j.at("u");
    for (int i = 0; i < lay.size(); ++i) {
        coords[static_cast<std::size_t>(i)] = u.at(lay.at(i).to_string()).get<double>();
    }
    return JetPoint(params, std::move(base), std::move(coords));
}

}  // namespace jetspace
