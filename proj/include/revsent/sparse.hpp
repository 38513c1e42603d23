#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "revsent/error.hpp"

namespace revsent {

/// Sparse real vector with strictly increasing indices. Zero entries may be
/// stored but the builders in this library never do.
class SparseVector {
public:
    SparseVector() = default;
    explicit SparseVector(std::size_t dim) : dim_(dim) {}

    SparseVector(std::size_t dim, std::vector<std::uint32_t> indices, std::vector<double> values)
        : dim_(dim), indices_(std::move(indices)), values_(std::move(values)) {
        if (indices_.size() != values_.size()) throw ValidationError("sparse vector index/value length mismatch");
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            if (indices_[k] >= dim_) throw ValidationError("sparse index out of range");
            if (k && indices_[k] <= indices_[k - 1]) throw ValidationError("sparse indices not strictly increasing");
        }
    }

    static SparseVector from_dense(std::span<const double> dense) {
        SparseVector v(dense.size());
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0.0) v.push_back(static_cast<std::uint32_t>(i), dense[i]);
        return v;
    }

    std::vector<double> to_dense() const {
        std::vector<double> d(dim_, 0.0);
        for (std::size_t k = 0; k < indices_.size(); ++k) d[indices_[k]] = values_[k];
        return d;
    }

    /// Appends an entry; index must exceed every stored index.
    void push_back(std::uint32_t index, double value) {
        indices_.push_back(index);
        values_.push_back(value);
    }

    double at(std::uint32_t index) const {
        std::size_t lo = 0, hi = indices_.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (indices_[mid] < index) lo = mid + 1;
            else hi = mid;
        }
        return lo < indices_.size() && indices_[lo] == index ? values_[lo] : 0.0;
    }

    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return indices_.size(); }
    const std::vector<std::uint32_t>& indices() const { return indices_; }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const SparseVector&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
};

inline void require_same_dim(const SparseVector& a, const SparseVector& b) {
    if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim());
}

/// Sum of products over shared indices, accumulated in index order.
inline double dot(const SparseVector& a, const SparseVector& b) {
    require_same_dim(a, b);
    const auto& ia = a.indices();
    const auto& ib = b.indices();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ia.size() && j < ib.size()) {
        if (ia[i] == ib[j]) s += a.values()[i++] * b.values()[j++];
        else if (ia[i] < ib[j]) ++i;
        else ++j;
    }
    return s;
}

inline double squared_norm(const SparseVector& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return s;
}

/// ||a - b||^2 over the union of indices, in index order.
inline double squared_distance(const SparseVector& a, const SparseVector& b) {
    require_same_dim(a, b);
    const auto& ia = a.indices();
    const auto& ib = b.indices();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ia.size() || j < ib.size()) {
        double d;
        if (j >= ib.size() || (i < ia.size() && ia[i] < ib[j])) d = a.values()[i++];
        else if (i >= ia.size() || ib[j] < ia[i]) d = -b.values()[j++];
        else d = a.values()[i++] - b.values()[j++];
        s += d * d;
    }
    return s;
}

inline bool all_finite(const SparseVector& a) {
    for (double v : a.values())
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace revsent
