#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jetspace/embeddings.hpp"
#include "jetspace/expr.hpp"

namespace jetspace {

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  // resolution-doubling difference plus a rounding floor
    int resolution = 0;
};

/// A scalar function on the closed cube [-1,1]^d (or on its boundary only),
/// with gradients. Boundary evaluation receives the face it lives on, which
/// lets face-dependent functions pick their branch.
class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual std::string describe() const = 0;

    virtual double value(std::span<const double> x) const = 0;
    virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;

    /// x is a full cube point with x[axis] == side (+1 or -1).
    virtual double boundary_value(int /*axis*/, int /*side*/, std::span<const double> x) const
    {
        return value(x);
    }
    virtual void boundary_gradient(int /*axis*/, int /*side*/, std::span<const double> x,
                                   std::span<double> out) const
    {
        gradient(x, out);
    }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

FieldPtr expr_field(ExprPtr g);
FieldPtr coordinate_field(int axis);
/// Component of the cube-to-ball squeeze applied to the first ball_dim cube
/// coordinates; constant in the remaining ones.
FieldPtr lambda_component_field(int component, int ball_dim);
/// The three-branch boundary function of a body: +f(lambda(x)) on the top
/// face, -f(lambda(x)) on the bottom face, f(lambda(x)) on the sides (where it
/// vanishes to all orders). Boundary-only.
FieldPtr body_boundary_field(const BodyFunction& body);
FieldPtr scaled_field(double factor, FieldPtr inner);

enum class CellScheme {
    Single,         // integrand smooth on the whole cube
    LambdaSectors,  // split faces along the sector boundaries of the squeeze map
};

enum class DiffMode {
    Analytic,          // gradients from the fields themselves
    FiniteDifference,  // central differences of field values (cross-check)
};

struct FormIntegralSpec {
    int cube_dim = 0;            // dimension of the cube
    std::vector<FieldPtr> fields;  // one per cube dimension: g_1 ... g_d
    CellScheme cells = CellScheme::Single;
    DiffMode diff = DiffMode::Analytic;
};

/// Integral of dg_1 ^ ... ^ dg_d over the cube: tensor Gauss-Legendre of the
/// Jacobian determinant, with the error taken against half resolution.
IntegralResult integrate_interior(const FormIntegralSpec& spec, int resolution);

/// Integral of g_1 dg_2 ^ ... ^ dg_d over the cube boundary, faces signed by
/// outward orientation.
IntegralResult integrate_boundary(const FormIntegralSpec& spec, int resolution);

/// The obstruction integral of a body over the boundary of [-1,1]^{n+1}.
IntegralResult obstruction_integral(const BodyFunction& body, int resolution);

struct ScalingRow {
    double m = 1.0;
    double value = 0.0;
    double error = 0.0;
    double predicted = 0.0;       // m^{n+k+1} times the base value
    double relative_error = 0.0;  // |value - predicted| / |predicted|
    double lower_bound = 0.0;     // m^{1+k/(n+1)} |base|^{1/(n+1)}
};

struct ScalingStudy {
    int dim = 0;
    int order = 0;
    double base_value = 0.0;
    double base_error = 0.0;
    double fitted_exponent = 0.0;  // log-log regression over the rows
    std::vector<ScalingRow> rows;
};

/// Boundary integrals of the dilated data (m lambda_1, ..., m^{k+1} fbar) for
/// each scale factor, with the predicted power law and the extension
/// lower-bound curve.
ScalingStudy scaling_study(const BodyFunction& body, std::span<const double> m_values,
                           int resolution);

/// Scale beyond which the lower-bound curve exceeds candidate * m.
double scaling_crossover(double base_value, int dim, int order, double lip_candidate);

struct ComassResult {
    double max_abs = 0.0;   // over random orthonormal tuples
    double extremal = 0.0;  // the distinguished frame tuple (should be 1)
    long samples = 0;
};

/// dx_1 ^ ... ^ dx_n ^ du_0 on n+1 tangent vectors at p, each given by its
/// coefficients in the left-invariant frame (first the n horizontal fields,
/// then d/du_I in canonical layout order). columns is column-major with
/// n+1 columns of length n + layout size.
double coordinate_form_on_frame(const JetPoint& p, std::span<const double> columns);

/// Evaluates the top coordinate form dx_1^...^dx_n^du_0 on random tuples that
/// are orthonormal for the metric making the standard left-invariant frame
/// orthonormal; the result never exceeds 1.
ComassResult comass_check(int dim, int order, long samples, std::uint64_t seed);

struct StokesCase {
    std::string description;
    IntegralResult interior;
    IntegralResult boundary;
    bool pass = false;
};

/// Randomized smooth checks of the boundary-vs-interior identity with
/// polynomial data of degree <= 3.
std::vector<StokesCase> stokes_suite(int cube_dim, int count, std::uint64_t seed, int resolution);

/// Stable content hash of a spec (FNV-1a over field descriptions and layout).
std::uint64_t spec_hash(const FormIntegralSpec& spec);

}  // namespace jetspace
