#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetspace/checks.hpp"
#include "jetspace/embeddings.hpp"
#include "jetspace/forms.hpp"
#include "jetspace/metrics.hpp"
#include "jetspace/numeric.hpp"

using namespace jetspace;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string iso_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text << "\n";
}

// locale-free float formatting for CSV
std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonOpts {
    int n = 2;
    int k = 1;
    std::uint64_t seed = 0;
    long pairs = 100000;
    long trials = 1000;
    int res = 32;
    std::string m_list = "1,2,4,8";
    std::string out;
    std::string format = "json";
};

std::vector<double> parse_m_list(const std::string& text)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        values.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return values;
}

nlohmann::ordered_json run_header(const std::string& command, const CommonOpts& opt)
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["n"] = opt.n;
    j["k"] = opt.k;
    j["seed"] = opt.seed;
    j["timestamp"] = iso_timestamp();
    return j;
}

int cmd_group_check(const CommonOpts& opt)
{
    const GroupCheckReport report = run_group_checks(GroupParams(opt.n, opt.k), opt.trials, opt.seed);
    nlohmann::ordered_json j = run_header("group-check", opt);
    j["trials"] = opt.trials;
    j["report"] = nlohmann::ordered_json::parse(to_json_string(report));
    const bool ok = report.pass(1e-10, 1e-10);
    j["pass"] = ok;
    emit(j.dump(2), opt.out);
    return ok ? kExitPass : kExitFail;
}

int cmd_jet_check(const CommonOpts& opt)
{
    const JetCheckReport report = run_jet_checks(opt.n, opt.k, opt.trials, opt.seed);
    nlohmann::ordered_json j = run_header("jet-check", opt);
    j["points_per_expr"] = opt.trials;
    j["report"] = nlohmann::ordered_json::parse(to_json_string(report));
    const bool ok = report.pass(1e-6);
    j["pass"] = ok;
    emit(j.dump(2), opt.out);
    return ok ? kExitPass : kExitFail;
}

int cmd_distortion(const CommonOpts& opt, const std::string& map_name)
{
    SamplerSpec spec;
    spec.map = map_kind_from_name(map_name);
    spec.dim = opt.n;
    spec.order = opt.k;
    spec.pairs = opt.pairs;
    spec.seed = opt.seed;
    const DistortionReport report = distortion_scan(spec);

    nlohmann::ordered_json j = run_header("distortion", opt);
    j["map"] = map_name;
    j["pairs"] = opt.pairs;
    j["report"] = nlohmann::ordered_json::parse(to_json_string(report));

    bool ok = report.min_ratio > 0.0 && std::isfinite(report.max_ratio);
    if (spec.map == MapKind::LambdaCube) {
        const double lower = 1.0 / (3.0 * (opt.n + 1));
        ok = ok && report.min_ratio >= lower - 1e-9 && report.max_ratio <= 3.0 + 1e-9;
        j["bracket"] = {{"lower", lower}, {"upper", 3.0}};
    }
    j["pass"] = ok;
    emit(j.dump(2), opt.out);
    return ok ? kExitPass : kExitFail;
}

int cmd_obstruction(const CommonOpts& opt)
{
    const BodyFunction body = make_body(opt.n, opt.k);
    const IntegralResult r = obstruction_integral(body, opt.res);

    FormIntegralSpec spec;  // rebuilt only for the content hash
    spec.cube_dim = opt.n + 1;
    spec.cells = CellScheme::LambdaSectors;
    for (int i = 0; i < opt.n; ++i) spec.fields.push_back(lambda_component_field(i, opt.n));
    spec.fields.push_back(body_boundary_field(body));

    nlohmann::ordered_json j = run_header("obstruction", opt);
    j["resolution"] = opt.res;
    j["spec_hash"] = spec_hash(spec);
    j["value"] = r.value;
    j["error"] = r.error;
    j["corrected"] = static_cast<bool>(body.beta);
    const bool ok = std::abs(r.value) > 10.0 * r.error;
    j["pass"] = ok;
    emit(j.dump(2), opt.out);
    return ok ? kExitPass : kExitFail;
}

int cmd_scaling(const CommonOpts& opt)
{
    const std::vector<double> ms = parse_m_list(opt.m_list);
    const BodyFunction body = make_body(opt.n, opt.k);
    const ScalingStudy study = scaling_study(body, ms, opt.res);
    const double expected = opt.n + opt.k + 1;
    const bool ok = std::abs(study.fitted_exponent - expected) <= 0.01;

    if (opt.format == "csv") {
        std::string csv = "M,integral,predicted,relative_error,lower_bound\n";
        for (const auto& row : study.rows) {
            csv += num(row.m) + "," + num(row.value) + "," + num(row.predicted) + "," +
                   num(row.relative_error) + "," + num(row.lower_bound) + "\n";
        }
        csv += "# fitted_exponent," + num(study.fitted_exponent) + ",expected," + num(expected);
        emit(csv, opt.out);
    } else {
        nlohmann::ordered_json j = run_header("scaling", opt);
        j["resolution"] = opt.res;
        j["base_value"] = study.base_value;
        j["fitted_exponent"] = study.fitted_exponent;
        j["expected_exponent"] = expected;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : study.rows) {
            rows.push_back({{"M", row.m},
                            {"integral", row.value},
                            {"predicted", row.predicted},
                            {"relative_error", row.relative_error},
                            {"lower_bound", row.lower_bound}});
        }
        j["rows"] = rows;
        j["pass"] = ok;
        emit(j.dump(2), opt.out);
    }
    return ok ? kExitPass : kExitFail;
}

int cmd_stokes(const CommonOpts& opt, const std::string& suite, int count)
{
    if (suite != "smooth") {
        std::cerr << "unknown suite: " << suite << " (available: smooth)\n";
        return kExitUsage;
    }
    const auto cases = stokes_suite(opt.n + 1, count, opt.seed, opt.res);
    bool ok = true;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& c : cases) {
        ok = ok && c.pass;
        rows.push_back({{"interior", c.interior.value},
                        {"boundary", c.boundary.value},
                        {"interior_error", c.interior.error},
                        {"boundary_error", c.boundary.error},
                        {"pass", c.pass}});
    }
    nlohmann::ordered_json j = run_header("stokes", opt);
    j["suite"] = suite;
    j["count"] = count;
    j["resolution"] = opt.res;
    j["cases"] = rows;
    j["pass"] = ok;
    emit(j.dump(2), opt.out);
    return ok ? kExitPass : kExitFail;
}

int cmd_comass(const CommonOpts& opt)
{
    const ComassResult r = comass_check(opt.n, opt.k, opt.trials, opt.seed);
    const bool ok = r.max_abs <= 1.0 + 1e-9 && std::abs(r.extremal - 1.0) <= 1e-12;
    nlohmann::ordered_json j = run_header("comass", opt);
    j["samples"] = opt.trials;
    j["max_abs"] = r.max_abs;
    j["extremal"] = r.extremal;
    j["pass"] = ok;
    emit(j.dump(2), opt.out);
    return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"jet-space Carnot group toolkit: group law checks, sphere embedding distortion "
                 "scans, and Lipschitz-form integrals"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string map_name = "circle";
    std::string suite = "smooth";
    int stokes_count = 20;

    const auto add_common = [&](CLI::App* cmd, bool with_k = true) {
        cmd->add_option("--n", opt.n, "base dimension")->check(CLI::Range(1, 6));
        if (with_k) cmd->add_option("--k", opt.k, "jet order")->check(CLI::Range(1, 8));
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--out", opt.out, "output file (default stdout)");
        cmd->add_option("--format", opt.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* group = app.add_subcommand("group-check", "randomized group-law validation");
    add_common(group);
    group->add_option("--trials", opt.trials, "random triples")->check(CLI::PositiveNumber);

    CLI::App* jets = app.add_subcommand("jet-check", "finite-difference validation of jets");
    add_common(jets);
    jets->add_option("--trials", opt.trials, "points per expression")->check(CLI::PositiveNumber);

    CLI::App* dist = app.add_subcommand("distortion", "biLipschitz distortion scan");
    add_common(dist);
    dist->add_option("--map", map_name, "identity | circle | sphere | polar | lambda");
    dist->add_option("--pairs", opt.pairs, "sampled pairs")->check(CLI::PositiveNumber);

    CLI::App* obs = app.add_subcommand("obstruction", "boundary obstruction integral");
    add_common(obs);
    obs->add_option("--res", opt.res, "points per axis")->check(CLI::Range(2, 256));

    CLI::App* scal = app.add_subcommand("scaling", "dilation scaling law of the obstruction");
    add_common(scal);
    scal->add_option("--res", opt.res, "points per axis")->check(CLI::Range(2, 256));
    scal->add_option("--M", opt.m_list, "comma-separated scale factors");

    CLI::App* stokes = app.add_subcommand("stokes", "interior-vs-boundary identity suite");
    add_common(stokes, /*with_k=*/false);
    stokes->add_option("--suite", suite, "test suite name");
    stokes->add_option("--count", stokes_count, "number of randomized cases")
        ->check(CLI::PositiveNumber);
    stokes->add_option("--res", opt.res, "points per axis")->check(CLI::Range(2, 256));

    CLI::App* comass = app.add_subcommand("comass", "coordinate-form comass bound");
    add_common(comass);
    comass->add_option("--trials", opt.trials, "random orthonormal tuples")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (group->parsed()) return cmd_group_check(opt);
        if (jets->parsed()) return cmd_jet_check(opt);
        if (dist->parsed()) return cmd_distortion(opt, map_name);
        if (obs->parsed()) return cmd_obstruction(opt);
        if (scal->parsed()) return cmd_scaling(opt);
        if (stokes->parsed()) return cmd_stokes(opt, suite, stokes_count);
        if (comass->parsed()) return cmd_comass(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
