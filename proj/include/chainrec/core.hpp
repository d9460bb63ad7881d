#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainrec {

using Index = std::size_t;
using IndexPair = std::pair<Index, Index>;

// Sorted, duplicate-free index sets; all set algebra below assumes this form.
using IndexSet = std::vector<Index>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : Error { using Error::Error; };
struct MetricError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct KindError : Error { using Error::Error; };
struct EpsilonError : Error { using Error::Error; };
struct InwardError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct PeriodError : Error { using Error::Error; };
struct NotAMapError : Error { using Error::Error; };
struct NotABijectionError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct BudgetError : Error { using Error::Error; };
struct CapError : Error { using Error::Error; };
struct IdentityError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };

/// Dense square matrix of doubles, row-major.
class Matrix {
  public:
    Matrix() = default;
    Matrix(Index n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    Index size() const { return n_; }
    double& at(Index i, Index j) { return a_[i * n_ + j]; }
    double at(Index i, Index j) const { return a_[i * n_ + j]; }
    double* row(Index i) { return a_.data() + i * n_; }
    const double* row(Index i) const { return a_.data() + i * n_; }

    double max_entry() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, v);
        return m;
    }

    bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }

  private:
    Index n_ = 0;
    std::vector<double> a_;
};

inline IndexSet canonical_set(IndexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool set_contains(const IndexSet& s, Index i) {
    return std::binary_search(s.begin(), s.end(), i);
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    r.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline bool set_subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline IndexSet full_set(Index n) {
    IndexSet s(n);
    for (Index i = 0; i < n; ++i) s[i] = i;
    return s;
}

/// "%.12g" rendering used by every CSV/JSON emitter; keeps output byte-stable.
inline std::string fmt_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace chainrec
