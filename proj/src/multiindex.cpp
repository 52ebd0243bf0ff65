#include "jetspace/multiindex.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace jetspace {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
    for (int e : entries_) {
        if (e < 0) throw std::invalid_argument("MultiIndex: entries must be nonnegative");
    }
}

MultiIndex MultiIndex::zero(int dim)
{
    return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

MultiIndex MultiIndex::unit(int dim, int axis)
{
    if (axis < 0 || axis >= dim) throw std::invalid_argument("MultiIndex::unit: axis out of range");
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e[static_cast<std::size_t>(axis)] = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::order() const
{
    return std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::plus_unit(int axis) const
{
    if (axis < 0 || axis >= dim()) throw std::invalid_argument("MultiIndex::plus_unit: axis out of range");
    std::vector<int> e = entries_;
    ++e[static_cast<std::size_t>(axis)];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const
{
    if (!leq(other, *this)) throw std::invalid_argument("MultiIndex::minus: subtrahend not componentwise <=");
    std::vector<int> e = entries_;
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.entries_[i];
    return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(entries_[i]);
    }
    return s;
}

bool leq(const MultiIndex& lhs, const MultiIndex& rhs)
{
    if (lhs.dim() != rhs.dim()) throw std::invalid_argument("leq: dimension mismatch");
    for (int i = 0; i < lhs.dim(); ++i) {
        if (lhs[i] > rhs[i]) return false;
    }
    return true;
}

bool canonical_less(const MultiIndex& lhs, const MultiIndex& rhs)
{
    if (lhs.dim() != rhs.dim()) throw std::invalid_argument("canonical_less: dimension mismatch");
    const int lo = lhs.order();
    const int ro = rhs.order();
    if (lo != ro) return lo < ro;
    for (int i = 0; i < lhs.dim(); ++i) {
        if (lhs[i] != rhs[i]) return lhs[i] > rhs[i];
    }
    return false;
}

std::int64_t factorial(int m)
{
    if (m < 0 || m > 20) throw std::invalid_argument("factorial: argument outside [0, 20]");
    std::int64_t r = 1;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
}

std::int64_t factorial(const MultiIndex& idx)
{
    std::int64_t r = 1;
    for (int e : idx.entries()) r *= factorial(e);
    return r;
}

std::int64_t binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact: r*(n-k+i) is divisible by i at each step
    }
    return r;
}

std::int64_t index_count(int dim, int order)
{
    if (dim < 1 || order < 0) throw std::invalid_argument("index_count: need dim >= 1, order >= 0");
    return binomial(dim + order - 1, order);
}

double monomial(std::span<const double> y, const MultiIndex& idx)
{
    if (static_cast<int>(y.size()) != idx.dim()) throw std::invalid_argument("monomial: dimension mismatch");
    double r = 1.0;
    for (int i = 0; i < idx.dim(); ++i) {
        for (int p = 0; p < idx[i]; ++p) r *= y[static_cast<std::size_t>(i)];
    }
    return r;
}

namespace {

void enumerate_rec(int dim, int order, std::vector<int>& prefix, std::vector<MultiIndex>& out)
{
    if (static_cast<int>(prefix.size()) == dim - 1) {
        prefix.push_back(order);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int lead = order; lead >= 0; --lead) {
        prefix.push_back(lead);
        enumerate_rec(dim, order - lead, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<MultiIndex> enumerate_indices(int dim, int order)
{
    if (dim < 1 || order < 0) throw std::invalid_argument("enumerate_indices: need dim >= 1, order >= 0");
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(index_count(dim, order)));
    std::vector<int> prefix;
    enumerate_rec(dim, order, prefix, out);
    return out;
}

std::vector<MultiIndex> enumerate_up_to(int dim, int max_order)
{
    std::vector<MultiIndex> out;
    for (int j = 0; j <= max_order; ++j) {
        auto grade = enumerate_indices(dim, j);
        out.insert(out.end(), grade.begin(), grade.end());
    }
    return out;
}

JetLayout::JetLayout(int dim, int max_order) : dim_(dim), max_order_(max_order)
{
    indices_ = enumerate_up_to(dim, max_order);
    grade_begin_.resize(static_cast<std::size_t>(max_order) + 2, 0);
    for (int j = 0, pos = 0; j <= max_order; ++j) {
        grade_begin_[static_cast<std::size_t>(j)] = pos;
        pos += static_cast<int>(index_count(dim, j));
        grade_begin_[static_cast<std::size_t>(j) + 1] = pos;
    }
}

int JetLayout::position(const MultiIndex& idx) const
{
    if (idx.dim() != dim_ || idx.order() > max_order_)
        throw std::invalid_argument("JetLayout::position: index not in layout");
    const int lo = grade_begin(idx.order());
    const int hi = grade_begin(idx.order() + 1);
    for (int p = lo; p < hi; ++p) {
        if (at(p) == idx) return p;
    }
    throw std::invalid_argument("JetLayout::position: index not found");
}

const JetLayout& jet_layout(int dim, int max_order)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[{dim, max_order}];
    if (!slot) slot = std::make_unique<JetLayout>(dim, max_order);
    return *slot;
}

}  // namespace jetspace
