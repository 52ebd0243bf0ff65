#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jetspace/embeddings.hpp"
#include "jetspace/expr.hpp"

namespace jetspace {

enum class MapKind { Identity, Circle, Sphere, PolarLift, LambdaCube };

std::string map_kind_name(MapKind kind);
MapKind map_kind_from_name(const std::string& name);

struct SamplerSpec {
    MapKind map = MapKind::Identity;
    int dim = 2;       // ambient ball/cube dimension (ignored for circle)
    int order = 1;     // jet order for the jet-valued maps
    long pairs = 10000;
    std::uint64_t seed = 0;
    double eps_hat = 0.0;  // seam width for stratification; 0 = estimate
};

struct Witness {
    std::vector<double> first;  // domain point (circle: the angle)
    std::vector<double> second;
    double ratio = 0.0;
};

struct DistortionReport {
    std::string map_name;
    long pairs = 0;
    std::uint64_t seed = 0;
    double eps_hat = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    Witness argmin;
    Witness argmax;
    // running extrema at logarithmic sample checkpoints, for refinement plots
    std::vector<std::pair<long, double>> min_history;
    std::vector<std::pair<long, double>> max_history;
};

/// Samples stratified pairs (seam-hugging, one-far, antipodal-ish, generic,
/// same-side) and reports the extremal distance ratios with replayable
/// witnesses. Jet-valued maps are measured in the box quasi-metric; the cube
/// squeeze in the Euclidean metric; the rest in the Manhattan metric (circle:
/// geodesic).
DistortionReport distortion_scan(const SamplerSpec& spec);

/// Re-evaluates one pair under the spec's map and metrics.
double replay_ratio(const SamplerSpec& spec, std::span<const double> first,
                    std::span<const double> second);

std::string to_json_string(const DistortionReport& report);

/// Upper bound for the group distance between jets of g at x and y along the
/// straight segment: sup of the horizontal speed factor times |y - x|.
/// The sup is taken over `samples` equispaced parameters plus a golden-section
/// refinement around the discrete max.
double segment_lip_bound(const ExprPtr& g, std::span<const double> x, std::span<const double> y,
                         int order, int samples = 256);

struct CaseIBound {
    double value = 0.0;  // |f^(k)(theta) + f^(k)(eta)|
    double bound = 0.0;  // pi^{k+1} (k+1)!/2 * (theta + eta)
    bool holds = false;
};

/// The near-seam lower bound for the circle embedding; inputs must lie inside
/// the estimated linear regime.
CaseIBound case_i_lower_bound(int order, double theta, double eta);

/// Largest dyadic eps <= 1/2 such that the k-th derivative of the end-flat
/// polynomial stays above its linear minorant on a 1000-point grid near both
/// interval ends.
double linear_regime_circle(int order);

struct SphereRegime {
    double eps = 0.0;    // radial width of the validated annulus
    double c_hat = 0.0;  // observed bracket constant for |d^k f / dx_i^k| / (1 - |x|)
};

/// Dyadic search for the annulus on which the body's pure k-th derivatives
/// follow the expected sign pattern, with the observed ratio bracket.
SphereRegime linear_regime_sphere(const BodyFunction& body);

}  // namespace jetspace
