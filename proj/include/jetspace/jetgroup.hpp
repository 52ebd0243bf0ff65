#pragma once

#include <span>
#include <string>
#include <vector>

#include "jetspace/multiindex.hpp"

namespace jetspace {

struct GroupParams {
    int dim;    // n >= 1
    int order;  // 1 <= k <= 8 (factorials stay exact in 64 bits)

    GroupParams(int n, int k);
    bool operator==(const GroupParams&) const = default;
};

/// A point of the order-k jet group over R^n: a base point plus one real
/// coordinate per multi-index of order <= k, stored in canonical layout order.
class JetPoint {
public:
    JetPoint(GroupParams params, std::vector<double> base, std::vector<double> coords);
    static JetPoint identity(GroupParams params);

    const GroupParams& params() const { return params_; }
    int dim() const { return params_.dim; }
    int order() const { return params_.order; }
    std::span<const double> base() const { return base_; }
    std::span<const double> coords() const { return coords_; }
    double coord(int pos) const { return coords_[static_cast<std::size_t>(pos)]; }
    double coord(const MultiIndex& idx) const;
    const JetLayout& layout() const;

private:
    GroupParams params_;
    std::vector<double> base_;
    std::vector<double> coords_;
};

/// Group product: base points add, coordinates mix the left factor downward by
/// monomials of the right base point divided by factorials.
JetPoint compose(const JetPoint& lhs, const JetPoint& rhs);

/// Group inverse, in closed form with alternating signs.
JetPoint inverse(const JetPoint& p);

/// Anisotropic dilation: base scales by factor, each coordinate by
/// factor^(k+1-order of its index). Requires factor > 0.
JetPoint dilate(double factor, const JetPoint& p);

/// max{ |base|_2, |u_I|^(1/(k+1-|I|)) }: one-homogeneous under dilate.
double homogeneous_norm(const JetPoint& p);

/// Left-invariant box quasi-distance: homogeneous_norm(lhs^{-1} * rhs).
double box_distance(const JetPoint& lhs, const JetPoint& rhs);

/// Largest discrete contact-form residual of a sampled curve, for an index of
/// order <= k-1: central differences at interior samples of
/// |du_I/dt - sum_j u_{I+e_j} dx_j/dt|. Needs at least 3 samples.
double contact_defect(std::span<const double> times, std::span<const JetPoint> points,
                      const MultiIndex& index);

std::string to_json_string(const JetPoint& p);
JetPoint jet_point_from_json(const std::string& text);

}  // namespace jetspace
