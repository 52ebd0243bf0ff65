#include "jetspace/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>

#include "jetspace/quadrature.hpp"
#include "jetspace/rng.hpp"
#include "jetspace/taylor.hpp"

namespace jetspace {

namespace {

constexpr double kFdStep = 1e-5;

double det_in_place(std::vector<double>& a, int d)
{
    double sign = 1.0;
    for (int c = 0; c < d; ++c) {
        int pivot = c;
        for (int r = c + 1; r < d; ++r) {
            if (std::abs(a[static_cast<std::size_t>(r * d + c)]) >
                std::abs(a[static_cast<std::size_t>(pivot * d + c)]))
                pivot = r;
        }
        if (a[static_cast<std::size_t>(pivot * d + c)] == 0.0) return 0.0;
        if (pivot != c) {
            for (int j = 0; j < d; ++j)
                std::swap(a[static_cast<std::size_t>(c * d + j)], a[static_cast<std::size_t>(pivot * d + j)]);
            sign = -sign;
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(c * d + c)];
        for (int r = c + 1; r < d; ++r) {
            const double factor = a[static_cast<std::size_t>(r * d + c)] * inv;
            for (int j = c; j < d; ++j)
                a[static_cast<std::size_t>(r * d + j)] -= factor * a[static_cast<std::size_t>(c * d + j)];
        }
    }
    double det = sign;
    for (int c = 0; c < d; ++c) det *= a[static_cast<std::size_t>(c * d + c)];
    return det;
}

// ---- lambda analytics shared by the lambda and body fields ----

// Row-major d x d Jacobian of the cube-to-ball squeeze, valid away from sector
// boundaries (quadrature nodes never sit on them).
std::vector<double> lambda_jacobian(std::span<const double> x)
{
    const int d = static_cast<int>(x.size());
    const int sector = lambda_sector(x);
    double sq = 0.0;
    for (double c : x) sq += c * c;
    const double norm = std::sqrt(sq);
    const double top = std::abs(x[static_cast<std::size_t>(sector)]);
    const double s = (x[static_cast<std::size_t>(sector)] >= 0.0) ? 1.0 : -1.0;

    std::vector<double> jac(static_cast<std::size_t>(d * d), 0.0);
    for (int m = 0; m < d; ++m) {
        for (int j = 0; j < d; ++j) {
            double v = -top * x[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(j)] /
                       (norm * norm * norm);
            if (j == sector) v += s * x[static_cast<std::size_t>(m)] / norm;
            if (m == j) v += top / norm;
            jac[static_cast<std::size_t>(m * d + j)] = v;
        }
    }
    return jac;
}

// ---- fields ----

class ExprField final : public ScalarField {
public:
    explicit ExprField(ExprPtr g) : g_(std::move(g)) {}

    std::string describe() const override { return g_->to_sexpr(); }

    double value(std::span<const double> x) const override { return eval(g_, x); }

    void gradient(std::span<const double> x, std::span<double> out) const override
    {
        const std::vector<double> g = jetspace::gradient(g_, x);
        std::copy(g.begin(), g.end(), out.begin());
    }

private:
    ExprPtr g_;
};

class CoordinateField final : public ScalarField {
public:
    explicit CoordinateField(int axis) : axis_(axis) {}

    std::string describe() const override { return "(x " + std::to_string(axis_) + ")"; }

    double value(std::span<const double> x) const override
    {
        return x[static_cast<std::size_t>(axis_)];
    }

    void gradient(std::span<const double> x, std::span<double> out) const override
    {
        std::fill(out.begin(), out.end(), 0.0);
        (void)x;
        out[static_cast<std::size_t>(axis_)] = 1.0;
    }

private:
    int axis_;
};

class LambdaComponentField final : public ScalarField {
public:
    LambdaComponentField(int component, int ball_dim) : component_(component), ball_dim_(ball_dim)
    {
        if (component < 0 || component >= ball_dim)
            throw std::invalid_argument("lambda_component_field: component out of range");
    }

    std::string describe() const override
    {
        return "(lambda " + std::to_string(component_) + " of " + std::to_string(ball_dim_) + ")";
    }

    double value(std::span<const double> x) const override
    {
        return lambda_map(x.first(static_cast<std::size_t>(ball_dim_)))
            [static_cast<std::size_t>(component_)];
    }

    void gradient(std::span<const double> x, std::span<double> out) const override
    {
        std::fill(out.begin(), out.end(), 0.0);
        const auto block = x.first(static_cast<std::size_t>(ball_dim_));
        const std::vector<double> jac = lambda_jacobian(block);
        for (int j = 0; j < ball_dim_; ++j)
            out[static_cast<std::size_t>(j)] =
                jac[static_cast<std::size_t>(component_ * ball_dim_ + j)];
    }

private:
    int component_;
    int ball_dim_;
};

class BodyBoundaryField final : public ScalarField {
public:
    explicit BodyBoundaryField(BodyFunction body) : body_(std::move(body)) {}

    std::string describe() const override
    {
        return "(fbar dim " + std::to_string(body_.dim) + " order " + std::to_string(body_.order) +
               (body_.beta ? " corrected)" : ")");
    }

    double value(std::span<const double>) const override
    {
        throw std::logic_error("body boundary function has no interior values");
    }

    void gradient(std::span<const double>, std::span<double>) const override
    {
        throw std::logic_error("body boundary function has no interior gradient");
    }

    double boundary_value(int axis, int side, std::span<const double> x) const override
    {
        const auto block = x.first(static_cast<std::size_t>(body_.dim));
        const double sign = (axis == body_.dim) ? static_cast<double>(side) : 1.0;
        return sign * eval(body_.f, lambda_map(block));
    }

    void boundary_gradient(int axis, int side, std::span<const double> x,
                           std::span<double> out) const override
    {
        std::fill(out.begin(), out.end(), 0.0);
        const auto block = x.first(static_cast<std::size_t>(body_.dim));
        const double sign = (axis == body_.dim) ? static_cast<double>(side) : 1.0;
        const std::vector<double> u = lambda_map(block);
        const std::vector<double> grad_f = jetspace::gradient(body_.f, u);
        const std::vector<double> jac = lambda_jacobian(block);
        const int d = body_.dim;
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int m = 0; m < d; ++m)
                acc += grad_f[static_cast<std::size_t>(m)] * jac[static_cast<std::size_t>(m * d + j)];
            out[static_cast<std::size_t>(j)] = sign * acc;
        }
    }

private:
    BodyFunction body_;
};

class ScaledField final : public ScalarField {
public:
    ScaledField(double factor, FieldPtr inner) : factor_(factor), inner_(std::move(inner)) {}

    std::string describe() const override
    {
        return "(scale " + std::to_string(factor_) + " " + inner_->describe() + ")";
    }

    double value(std::span<const double> x) const override { return factor_ * inner_->value(x); }

    void gradient(std::span<const double> x, std::span<double> out) const override
    {
        inner_->gradient(x, out);
        for (double& v : out) v *= factor_;
    }

    double boundary_value(int axis, int side, std::span<const double> x) const override
    {
        return factor_ * inner_->boundary_value(axis, side, x);
    }

    void boundary_gradient(int axis, int side, std::span<const double> x,
                           std::span<double> out) const override
    {
        inner_->boundary_gradient(axis, side, x, out);
        for (double& v : out) v *= factor_;
    }

private:
    double factor_;
    FieldPtr inner_;
};

// ---- cells ----

// Reference cube [-1,1]^d mapped onto a piece of the integration domain.
struct Cell {
    enum class Kind { Box, Frustum };
    Kind kind = Kind::Box;
    int dims = 0;
    // Frustum slab of the sector pyramid {|x_j| <= sign*x_a, sign*x_a in
    // [lo, hi]}: the apex coordinate sweeps the slab and the remaining axes
    // collapse proportionally.
    int apex_axis = 0;
    int apex_sign = 1;
    double lo = 0.0;
    double hi = 1.0;

    void map(std::span<const double> ref, std::span<double> out, double* measure) const
    {
        if (kind == Kind::Box) {
            std::copy(ref.begin(), ref.end(), out.begin());
            *measure = 1.0;
            return;
        }
        const double s = lo + 0.5 * (ref[static_cast<std::size_t>(apex_axis)] + 1.0) * (hi - lo);
        double meas = 0.5 * (hi - lo);
        for (int j = 0; j < dims; ++j) {
            if (j == apex_axis) {
                out[static_cast<std::size_t>(j)] = apex_sign * s;
            } else {
                out[static_cast<std::size_t>(j)] = s * ref[static_cast<std::size_t>(j)];
                meas *= s;
            }
        }
        *measure = meas;
    }
};

// The squeeze map sends the max coordinate to the image radius, so the body's
// cutoff plateau edges live on the slabs |x_a| = 1/4 and 1/2; the transition
// annulus in between is steep and gets finer slabs.
std::vector<double> radial_breaks()
{
    std::vector<double> breaks = {0.0, 0.25};
    for (int i = 1; i <= 8; ++i) breaks.push_back(0.25 + 0.25 * i / 8.0);
    breaks.push_back(0.75);
    breaks.push_back(1.0);
    return breaks;
}

std::vector<Cell> face_cells(const FormIntegralSpec& spec, int axis)
{
    const int dims = spec.cube_dim - 1;
    if (spec.cells == CellScheme::Single || axis != spec.cube_dim - 1) {
        // On side faces the squeeze map's leading coordinate is pinned at +-1,
        // so the whole face sits in one sector.
        Cell cell;
        cell.kind = Cell::Kind::Box;
        cell.dims = dims;
        return {cell};
    }
    const std::vector<double> breaks = radial_breaks();
    std::vector<Cell> cells;
    for (int a = 0; a < dims; ++a) {
        for (int sign : {1, -1}) {
            for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
                Cell cell;
                cell.kind = Cell::Kind::Frustum;
                cell.dims = dims;
                cell.apex_axis = a;
                cell.apex_sign = sign;
                cell.lo = breaks[b];
                cell.hi = breaks[b + 1];
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

void validate_spec(const FormIntegralSpec& spec, int resolution)
{
    if (spec.cube_dim < 2) throw std::invalid_argument("form integral: cube_dim must be >= 2");
    if (static_cast<int>(spec.fields.size()) != spec.cube_dim)
        throw std::invalid_argument("form integral: need one field per cube dimension");
    for (const auto& f : spec.fields)
        if (!f) throw std::invalid_argument("form integral: null field");
    if (resolution < 2 || resolution > 256)
        throw std::invalid_argument("form integral: resolution must be in [2, 256]");
}

[[noreturn]] void abort_non_finite(const char* where, std::span<const double> x)
{
    std::string msg = std::string(where) + ": non-finite integrand sample at (";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) msg += ", ";
        msg += std::to_string(x[i]);
    }
    throw std::runtime_error(msg + ")");
}

// Runs fn(ref_point, weight) over the tensor Gauss-Legendre grid in d axes.
template <typename Fn>
void tensor_scan(int d, int resolution, Fn&& fn)
{
    const GaussLegendre& rule = gauss_legendre(resolution);
    std::vector<int> counter(static_cast<std::size_t>(d), 0);
    std::vector<double> ref(static_cast<std::size_t>(d));
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            ref[static_cast<std::size_t>(i)] = rule.nodes[static_cast<std::size_t>(counter[static_cast<std::size_t>(i)])];
            w *= rule.weights[static_cast<std::size_t>(counter[static_cast<std::size_t>(i)])];
        }
        fn(std::span<const double>(ref), w);
        int i = 0;
        for (; i < d; ++i) {
            if (++counter[static_cast<std::size_t>(i)] < resolution) break;
            counter[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) return;
    }
}

struct Accumulated {
    double value = 0.0;
    double abs_mass = 0.0;  // sum of |weighted samples|, for the rounding floor
};

void face_fd_gradient(const ScalarField& field, int axis, int side, std::span<const double> x,
                      std::span<double> out, std::vector<double>& scratch)
{
    scratch.assign(x.begin(), x.end());
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
        if (j == axis) continue;
        scratch[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + kFdStep;
        const double hi = field.boundary_value(axis, side, scratch);
        scratch[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - kFdStep;
        const double lo = field.boundary_value(axis, side, scratch);
        scratch[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(j)] = (hi - lo) / (2.0 * kFdStep);
    }
}

void interior_fd_gradient(const ScalarField& field, std::span<const double> x, std::span<double> out,
                          std::vector<double>& scratch)
{
    scratch.assign(x.begin(), x.end());
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
        scratch[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + kFdStep;
        const double hi = field.value(scratch);
        scratch[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - kFdStep;
        const double lo = field.value(scratch);
        scratch[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(j)] = (hi - lo) / (2.0 * kFdStep);
    }
}

Accumulated interior_pass(const FormIntegralSpec& spec, int resolution)
{
    const int d = spec.cube_dim;
    Accumulated acc;
    std::vector<double> grad(static_cast<std::size_t>(d));
    std::vector<double> matrix(static_cast<std::size_t>(d * d));
    std::vector<double> scratch;
    tensor_scan(d, resolution, [&](std::span<const double> x, double w) {
        for (int i = 0; i < d; ++i) {
            if (spec.diff == DiffMode::Analytic) {
                spec.fields[static_cast<std::size_t>(i)]->gradient(x, grad);
            } else {
                interior_fd_gradient(*spec.fields[static_cast<std::size_t>(i)], x, grad, scratch);
            }
            std::copy(grad.begin(), grad.end(), matrix.begin() + static_cast<std::ptrdiff_t>(i * d));
        }
        const double det = det_in_place(matrix, d);
        const double sample = w * det;
        if (!std::isfinite(sample)) abort_non_finite("integrate_interior", x);
        acc.value += sample;
        acc.abs_mass += std::abs(sample);
    });
    return acc;
}

Accumulated boundary_pass(const FormIntegralSpec& spec, int resolution)
{
    const int d = spec.cube_dim;
    const int fd = d - 1;  // face dimension
    Accumulated acc;
    std::vector<double> face_point(static_cast<std::size_t>(fd));
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> grad(static_cast<std::size_t>(d));
    std::vector<double> matrix(static_cast<std::size_t>(fd * fd));
    std::vector<double> scratch;

    for (int axis = 0; axis < d; ++axis) {
        // Outward orientation: the face picks up (-1)^axis relative to the
        // natural order of the remaining coordinates.
        const double axis_parity = (axis % 2 == 0) ? 1.0 : -1.0;
        for (int side : {1, -1}) {
            const double face_sign = axis_parity * side;
            for (const Cell& cell : face_cells(spec, axis)) {
                tensor_scan(fd, resolution, [&](std::span<const double> ref, double w) {
                    double measure = 1.0;
                    cell.map(ref, face_point, &measure);
                    for (int j = 0, c = 0; j < d; ++j) {
                        x[static_cast<std::size_t>(j)] =
                            (j == axis) ? side : face_point[static_cast<std::size_t>(c++)];
                    }
                    const double head =
                        spec.fields[0]->boundary_value(axis, side, x);
                    for (int i = 1; i < d; ++i) {
                        if (spec.diff == DiffMode::Analytic) {
                            spec.fields[static_cast<std::size_t>(i)]->boundary_gradient(axis, side, x,
                                                                                        grad);
                        } else {
                            face_fd_gradient(*spec.fields[static_cast<std::size_t>(i)], axis, side, x,
                                             grad, scratch);
                        }
                        for (int j = 0, c = 0; j < d; ++j) {
                            if (j == axis) continue;
                            matrix[static_cast<std::size_t>((i - 1) * fd + c++)] =
                                grad[static_cast<std::size_t>(j)];
                        }
                    }
                    const double det = det_in_place(matrix, fd);
                    const double sample = face_sign * w * measure * head * det;
                    if (!std::isfinite(sample)) abort_non_finite("integrate_boundary", x);
                    acc.value += sample;
                    acc.abs_mass += std::abs(sample);
                });
            }
        }
    }
    return acc;
}

IntegralResult with_error(const Accumulated& fine, const Accumulated& coarse, int resolution)
{
    IntegralResult out;
    out.value = fine.value;
    out.resolution = resolution;
    const double rounding_floor =
        64.0 * std::numeric_limits<double>::epsilon() * std::max(fine.abs_mass, 1.0);
    out.error = std::abs(fine.value - coarse.value) + rounding_floor;
    return out;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view text)
{
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

FieldPtr expr_field(ExprPtr g)
{
    if (!g) throw std::invalid_argument("expr_field: null expression");
    return std::make_shared<ExprField>(std::move(g));
}

FieldPtr coordinate_field(int axis)
{
    if (axis < 0) throw std::invalid_argument("coordinate_field: axis must be >= 0");
    return std::make_shared<CoordinateField>(axis);
}

FieldPtr lambda_component_field(int component, int ball_dim)
{
    return std::make_shared<LambdaComponentField>(component, ball_dim);
}

FieldPtr body_boundary_field(const BodyFunction& body)
{
    if (!body.f) throw std::invalid_argument("body_boundary_field: body has no expression");
    return std::make_shared<BodyBoundaryField>(body);
}

FieldPtr scaled_field(double factor, FieldPtr inner)
{
    if (!inner) throw std::invalid_argument("scaled_field: null field");
    return std::make_shared<ScaledField>(factor, std::move(inner));
}

IntegralResult integrate_interior(const FormIntegralSpec& spec, int resolution)
{
    validate_spec(spec, resolution);
    if (spec.cells != CellScheme::Single)
        throw std::invalid_argument(
            "integrate_interior: sector cells are only used for boundary integrals");
    const Accumulated fine = interior_pass(spec, resolution);
    const Accumulated coarse = interior_pass(spec, std::max(2, resolution / 2));
    return with_error(fine, coarse, resolution);
}

IntegralResult integrate_boundary(const FormIntegralSpec& spec, int resolution)
{
    validate_spec(spec, resolution);
    const Accumulated fine = boundary_pass(spec, resolution);
    const Accumulated coarse = boundary_pass(spec, std::max(2, resolution / 2));
    return with_error(fine, coarse, resolution);
}

namespace {

FormIntegralSpec obstruction_spec(const BodyFunction& body, double scale_factor = 1.0)
{
    FormIntegralSpec spec;
    spec.cube_dim = body.dim + 1;
    spec.cells = CellScheme::LambdaSectors;
    for (int i = 0; i < body.dim; ++i) {
        FieldPtr f = lambda_component_field(i, body.dim);
        spec.fields.push_back(scale_factor == 1.0 ? f : scaled_field(scale_factor, std::move(f)));
    }
    FieldPtr bar = body_boundary_field(body);
    const double bar_scale = std::pow(scale_factor, body.order + 1);
    spec.fields.push_back(scale_factor == 1.0 ? bar : scaled_field(bar_scale, std::move(bar)));
    return spec;
}

}  // namespace

IntegralResult obstruction_integral(const BodyFunction& body, int resolution)
{
    return integrate_boundary(obstruction_spec(body), resolution);
}

ScalingStudy scaling_study(const BodyFunction& body, std::span<const double> m_values,
                           int resolution)
{
    if (m_values.empty()) throw std::invalid_argument("scaling_study: need at least one scale");
    for (double m : m_values)
        if (!(m > 0.0)) throw std::invalid_argument("scaling_study: scales must be positive");

    ScalingStudy study;
    study.dim = body.dim;
    study.order = body.order;
    const IntegralResult base = obstruction_integral(body, resolution);
    study.base_value = base.value;
    study.base_error = base.error;

    const double exponent = body.dim + body.order + 1;
    for (double m : m_values) {
        ScalingRow row;
        row.m = m;
        const IntegralResult r = integrate_boundary(obstruction_spec(body, m), resolution);
        row.value = r.value;
        row.error = r.error;
        row.predicted = std::pow(m, exponent) * base.value;
        row.relative_error =
            (row.predicted == 0.0) ? 0.0 : std::abs(row.value - row.predicted) / std::abs(row.predicted);
        row.lower_bound = std::pow(m, 1.0 + static_cast<double>(body.order) / (body.dim + 1)) *
                          std::pow(std::abs(base.value), 1.0 / (body.dim + 1));
        study.rows.push_back(row);
    }

    // log-log least squares for the growth exponent
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& row : study.rows) {
        const double lx = std::log(row.m);
        const double ly = std::log(std::abs(row.value));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double count = static_cast<double>(study.rows.size());
    const double denom = count * sxx - sx * sx;
    study.fitted_exponent = (denom == 0.0) ? std::numeric_limits<double>::quiet_NaN()
                                           : (count * sxy - sx * sy) / denom;
    return study;
}

double scaling_crossover(double base_value, int dim, int order, double lip_candidate)
{
    if (!(lip_candidate > 0.0))
        throw std::invalid_argument("scaling_crossover: candidate must be positive");
    if (base_value == 0.0) return std::numeric_limits<double>::infinity();
    const double root = std::pow(std::abs(base_value), 1.0 / (dim + 1));
    return std::pow(lip_candidate / root, static_cast<double>(dim + 1) / order);
}

double coordinate_form_on_frame(const JetPoint& p, std::span<const double> columns)
{
    const int dim = p.dim();
    const JetLayout& lay = p.layout();
    const int frame_dim = dim + lay.size();
    const int tuple = dim + 1;
    if (static_cast<int>(columns.size()) != frame_dim * tuple)
        throw std::invalid_argument("coordinate_form_on_frame: wrong column block size");

    std::vector<double> matrix(static_cast<std::size_t>(tuple * tuple));
    for (int c = 0; c < tuple; ++c) {
        const double* v = columns.data() + static_cast<std::ptrdiff_t>(c) * frame_dim;
        for (int r = 0; r < dim; ++r) matrix[static_cast<std::size_t>(r * tuple + c)] = v[r];
        // du_0(v) = b_0 + sum_j a_j u_{e_j}(p): the horizontal fields carry the
        // first-order coordinates into the bottom slot.
        double du0 = v[dim + 0];
        for (int j = 0; j < dim; ++j)
            du0 += v[j] * p.coord(MultiIndex::unit(dim, j));
        matrix[static_cast<std::size_t>(dim * tuple + c)] = du0;
    }
    return det_in_place(matrix, tuple);
}

ComassResult comass_check(int dim, int order, long samples, std::uint64_t seed)
{
    if (samples < 1) throw std::invalid_argument("comass_check: need at least one sample");
    const GroupParams params(dim, order);
    const JetLayout& lay = jet_layout(dim, order);
    const int frame_dim = dim + lay.size();
    const int tuple = dim + 1;

    Rng rng(seed);

    const auto random_point = [&]() {
        std::vector<double> base(static_cast<std::size_t>(dim));
        std::vector<double> coords(static_cast<std::size_t>(lay.size()));
        for (double& c : base) c = rng.uniform(-1.0, 1.0);
        for (double& c : coords) c = rng.uniform(-1.0, 1.0);
        return JetPoint(params, std::move(base), std::move(coords));
    };

    ComassResult out;
    out.samples = samples;

    std::vector<double> columns(static_cast<std::size_t>(frame_dim * tuple));
    for (long s = 0; s < samples; ++s) {
        const JetPoint p = random_point();

        // random orthonormal tuple via modified Gram-Schmidt on Gaussian columns
        for (double& v : columns) v = rng.normal();
        for (int c = 0; c < tuple; ++c) {
            double* vc = columns.data() + static_cast<std::ptrdiff_t>(c) * frame_dim;
            for (int prev = 0; prev < c; ++prev) {
                const double* vp = columns.data() + static_cast<std::ptrdiff_t>(prev) * frame_dim;
                double dot = 0.0;
                for (int r = 0; r < frame_dim; ++r) dot += vc[r] * vp[r];
                for (int r = 0; r < frame_dim; ++r) vc[r] -= dot * vp[r];
            }
            double norm = 0.0;
            for (int r = 0; r < frame_dim; ++r) norm += vc[r] * vc[r];
            norm = std::sqrt(norm);
            for (int r = 0; r < frame_dim; ++r) vc[r] /= norm;
        }
        out.max_abs = std::max(out.max_abs, std::abs(coordinate_form_on_frame(p, columns)));
    }

    // the distinguished tuple (X_1, ..., X_n, d/du_0) at a random point
    const JetPoint p = random_point();
    std::fill(columns.begin(), columns.end(), 0.0);
    for (int c = 0; c < dim; ++c) columns[static_cast<std::size_t>(c * frame_dim + c)] = 1.0;
    columns[static_cast<std::size_t>(dim * frame_dim + dim + 0)] = 1.0;
    out.extremal = std::abs(coordinate_form_on_frame(p, columns));
    return out;
}

std::vector<StokesCase> stokes_suite(int cube_dim, int count, std::uint64_t seed, int resolution)
{
    if (count < 1) throw std::invalid_argument("stokes_suite: need at least one case");
    Rng rng(seed);
    std::vector<StokesCase> cases;
    cases.reserve(static_cast<std::size_t>(count));

    const auto random_polynomial = [&]() {
        const int terms = 2 + static_cast<int>(rng.next() % 4);
        std::vector<ExprPtr> sum_terms;
        for (int t = 0; t < terms; ++t) {
            ExprPtr term = Expr::constant(rng.uniform(-1.0, 1.0));
            int degree = static_cast<int>(rng.next() % 4);
            while (degree > 0) {
                const int axis = static_cast<int>(rng.next() % static_cast<std::uint64_t>(cube_dim));
                term = Expr::product(term, Expr::coordinate(axis));
                --degree;
            }
            sum_terms.push_back(std::move(term));
        }
        return Expr::sum(std::move(sum_terms));
    };

    for (int c = 0; c < count; ++c) {
        FormIntegralSpec spec;
        spec.cube_dim = cube_dim;
        std::string description;
        for (int i = 0; i < cube_dim; ++i) {
            ExprPtr g = random_polynomial();
            if (!description.empty()) description += " ";
            description += g->to_sexpr();
            spec.fields.push_back(expr_field(std::move(g)));
        }
        StokesCase out;
        out.description = std::move(description);
        out.interior = integrate_interior(spec, resolution);
        out.boundary = integrate_boundary(spec, resolution);
        out.pass = std::abs(out.interior.value - out.boundary.value) <=
                   out.interior.error + out.boundary.error;
        cases.push_back(std::move(out));
    }
    return cases;
}

std::uint64_t spec_hash(const FormIntegralSpec& spec)
{
    std::uint64_t h = 1469598103934665603ull;
    h = fnv1a(h, "dim=" + std::to_string(spec.cube_dim));
    h = fnv1a(h, spec.cells == CellScheme::Single ? ",single" : ",sectors");
    h = fnv1a(h, spec.diff == DiffMode::Analytic ? ",analytic" : ",fd");
    for (const auto& f : spec.fields) h = fnv1a(h, "," + f->describe());
    return h;
}

}  // namespace jetspace
