#pragma once

#include <span>
#include <vector>

#include "jetspace/expr.hpp"
#include "jetspace/jetgroup.hpp"

namespace jetspace {

enum class Hemisphere { Upper, Lower, Equator };

/// A point of the unit sphere in R^{n+1}, kept both in ambient coordinates and
/// in polar form (direction on the equator sphere, radius in [0, 1] measured
/// from the pole, hemisphere tag).
struct SpherePoint {
    std::vector<double> ambient;
    Hemisphere hemisphere = Hemisphere::Upper;
    std::vector<double> direction;  // unit vector in R^n
    double radius = 0.0;            // 0 at the pole, 1 on the equator

    static SpherePoint from_ambient(std::vector<double> ambient);
    static SpherePoint from_polar(std::vector<double> direction, double radius, bool lower);
};

/// Lift of the closed unit ball onto the upper hemisphere along polar rays;
/// the ball boundary lands on the equator.
SpherePoint polar_lift(std::span<const double> v);

/// theta^{k+1} (pi - theta)^{k+1}: positive on (0, pi), flat of order k at both
/// ends, with k-th derivative asymptotically linear near the ends.
ExprPtr make_fk(int order);

/// The smooth body of the sphere embedding: equals (1-|x|)^{k+1} on the
/// annulus 1/2 <= |x| <= 3/2, stays positive inside the unit ball, and (after
/// an optional bump correction) has nonzero obstruction integral.
struct BodyFunction {
    ExprPtr f;      // the body itself (bump correction already applied if any)
    ExprPtr alpha;  // radial cutoff: 0 for |x| <= 1/4, 1 for |x| >= 1/2
    ExprPtr beta;   // correction bump, or null when not needed
    int dim = 0;
    int order = 0;
};

struct BodyOptions {
    int check_resolution = 16;     // per-axis points for the obstruction certificate
    bool force_correction = false; // exercise the bump path regardless of need
};

/// Builds the body and certifies its obstruction integral: if the magnitude
/// falls below 10x the quadrature error bound the bump correction is added and
/// the integral recomputed; failure after correction throws.
BodyFunction make_body(int dim, int order, const BodyOptions& options = {});

/// The correction bump: supported in the cube of half-width 1/16 centered at
/// (1/4, 0, ..., 0), smooth, with peak value 1 at the center.
ExprPtr make_bump(int dim);

/// Circle embedding into the order-k jet group over R: jets of the end-flat
/// polynomial on the upper semicircle, jets of its negative on the lower.
JetPoint embed_circle(int order, double angle);

/// Sphere embedding: jet of the body on the upper hemisphere at the polar
/// preimage, jet of the negated body on the lower one.
JetPoint embed_sphere(const BodyFunction& body, const SpherePoint& p);

/// Sector index: smallest axis whose coordinate has maximal absolute value.
int lambda_sector(std::span<const double> x);

/// Radial squeeze of the cube onto the closed ball and its inverse.
std::vector<double> lambda_map(std::span<const double> x);
std::vector<double> lambda_inv(std::span<const double> u);

/// Cylinder-to-ball projection: collapses the cylinder side onto the equator
/// and fixes the axis.
std::vector<double> cylinder_proj(std::span<const double> v, double t);

/// Cube-to-cylinder map: lambda on the first n coordinates, identity on the
/// last.
std::vector<double> lambda_cylinder(std::span<const double> xt);

}  // namespace jetspace
