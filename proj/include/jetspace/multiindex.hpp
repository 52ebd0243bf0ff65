#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace jetspace {

/// An n-tuple of nonnegative integers indexing a mixed partial derivative.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);

    static MultiIndex zero(int dim);
    static MultiIndex unit(int dim, int axis);

    int dim() const { return static_cast<int>(entries_.size()); }
    int order() const;  // sum of entries
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    std::span<const int> entries() const { return entries_; }

    MultiIndex plus_unit(int axis) const;
    /// Componentwise difference; requires leq(other, *this).
    MultiIndex minus(const MultiIndex& other) const;

    bool operator==(const MultiIndex&) const = default;

    std::string to_string() const;  // "i1,...,in"

private:
    std::vector<int> entries_;
};

/// Componentwise partial order.
bool leq(const MultiIndex& lhs, const MultiIndex& rhs);

/// Canonical total order: by order first, then within a grade the index whose
/// leading entries are larger comes first, so enumeration is deterministic.
bool canonical_less(const MultiIndex& lhs, const MultiIndex& rhs);

/// Exact in 64 bits for m <= 20; larger arguments are rejected.
std::int64_t factorial(int m);
std::int64_t factorial(const MultiIndex& idx);  // product of entry factorials
std::int64_t binomial(int n, int k);

/// Number of distinct indices of the given order over `dim` coordinates.
std::int64_t index_count(int dim, int order);

/// prod_l y_l^{i_l}
double monomial(std::span<const double> y, const MultiIndex& idx);

/// All indices of exactly the given order, in canonical order.
std::vector<MultiIndex> enumerate_indices(int dim, int order);

/// All indices of order 0..max_order, grade by grade.
std::vector<MultiIndex> enumerate_up_to(int dim, int max_order);

/// Dense coordinate layout over enumerate_up_to(dim, max_order) with reverse
/// lookup from an index to its slot.
class JetLayout {
public:
    JetLayout(int dim, int max_order);

    int dim() const { return dim_; }
    int max_order() const { return max_order_; }
    int size() const { return static_cast<int>(indices_.size()); }
    const MultiIndex& at(int pos) const { return indices_[static_cast<std::size_t>(pos)]; }
    std::span<const MultiIndex> indices() const { return indices_; }
    int position(const MultiIndex& idx) const;  // throws std::invalid_argument if absent
    /// First slot of the given grade.
    int grade_begin(int order) const { return grade_begin_[static_cast<std::size_t>(order)]; }

private:
    int dim_ = 0;
    int max_order_ = 0;
    std::vector<MultiIndex> indices_;
    std::vector<int> grade_begin_;
};

/// Shared cached layout; thread-safe.
const JetLayout& jet_layout(int dim, int max_order);

}  // namespace jetspace
