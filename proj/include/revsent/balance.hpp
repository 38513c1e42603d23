#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "revsent/error.hpp"
#include "revsent/random.hpp"
#include "revsent/sparse.hpp"

// Synthetic minority oversampling: new minority points are drawn between a
// minority sample and one of its k nearest minority neighbours.
namespace revsent::balance {

enum class InterpolationMode {
    /// S + alpha * (S' - S): a point on the segment from S to S'.
    Standard,
    /// S + alpha * |S - S'|, coordinate-wise. Moves away from S' wherever
    /// S > S'; kept so the literal formula can be compared.
    Literal,
};

inline std::string_view to_string(InterpolationMode m) {
    return m == InterpolationMode::Standard ? "standard" : "literal";
}

inline InterpolationMode parse_interpolation_mode(std::string_view s) {
    if (s == "standard") return InterpolationMode::Standard;
    if (s == "literal") return InterpolationMode::Literal;
    throw ValidationError("unknown oversampling mode '" + std::string(s) + "'");
}

struct OversampleSpec {
    std::size_t k = 5;
    /// Synthetic count is floor(rate * m) for m minority samples.
    double rate = 1.0;
    InterpolationMode mode = InterpolationMode::Standard;
    std::uint64_t seed = 0;
};

struct SyntheticSample {
    SparseVector vector;
    std::size_t parent_index = 0;
    std::size_t neighbor_index = 0;
    double alpha = 0.0;
};

/// Number of samples generated for rate r and m minority points. A small
/// epsilon absorbs representation error such as 0.6 * 10 = 5.999...
inline std::size_t synthetic_count(double rate, std::size_t m) {
    return static_cast<std::size_t>(std::floor(rate * static_cast<double>(m) + 1e-9));
}

/// Rate that brings `minority` up to `majority` samples.
inline double rate_to_balance(std::size_t minority, std::size_t majority) {
    if (minority == 0) throw ValidationError("minority class is empty");
    if (majority <= minority) return 0.0;
    return static_cast<double>(majority - minority) / static_cast<double>(minority);
}

/// The k points nearest to points[point_index] by Euclidean distance,
/// excluding the point itself. Ties go to the lower index.
inline std::vector<std::size_t> k_nearest_neighbors(std::size_t point_index, const std::vector<SparseVector>& points,
                                                    std::size_t k) {
    if (point_index >= points.size()) throw ValidationError("k-NN point index out of range");
    if (k == 0) throw ValidationError("k must be at least 1");
    if (k >= points.size())
        throw ValidationError("k = " + std::to_string(k) + " needs more than k minority points (have " +
                              std::to_string(points.size()) + ")");
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(points.size() - 1);
    for (std::size_t j = 0; j < points.size(); ++j)
        if (j != point_index) dist.emplace_back(squared_distance(points[point_index], points[j]), j);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

inline SparseVector synthesize_sample(const SparseVector& s, const SparseVector& s_prime, double alpha,
                                      InterpolationMode mode) {
    require_same_dim(s, s_prime);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
    SparseVector out(s.dim());
    const auto& ia = s.indices();
    const auto& ib = s_prime.indices();
    std::size_t i = 0, j = 0;
    while (i < ia.size() || j < ib.size()) {
        std::uint32_t col;
        double a = 0.0, b = 0.0;
        if (j >= ib.size() || (i < ia.size() && ia[i] < ib[j])) {
            col = ia[i];
            a = s.values()[i++];
        } else if (i >= ia.size() || ib[j] < ia[i]) {
            col = ib[j];
            b = s_prime.values()[j++];
        } else {
            col = ia[i];
            a = s.values()[i++];
            b = s_prime.values()[j++];
        }
        double v;
        if (mode == InterpolationMode::Standard) {
            // Rounding in a + alpha*(b-a) can step one ulp past the segment end.
            v = std::clamp(a + alpha * (b - a), std::min(a, b), std::max(a, b));
        } else {
            v = a + alpha * std::abs(a - b);
        }
        if (v != 0.0) out.push_back(col, v);
    }
    return out;
}

/// Generates floor(rate * m) synthetic minority samples. Each draw picks a
/// parent uniformly, one of its k nearest neighbours uniformly, and a fresh
/// alpha in [0,1). The neighbour table is computed once up front.
inline std::vector<SyntheticSample> oversample(const std::vector<SparseVector>& minority, const OversampleSpec& spec) {
    if (minority.empty()) throw ValidationError("cannot oversample an empty minority set");
    if (!(spec.rate > 0.0) || !std::isfinite(spec.rate)) throw ValidationError("oversampling rate must be positive");
    if (spec.k < 1) throw ValidationError("k must be at least 1");
    if (spec.k >= minority.size())
        throw ValidationError("k = " + std::to_string(spec.k) + " needs more than k minority points (have " +
                              std::to_string(minority.size()) + ")");

    const std::size_t m = minority.size();
    std::vector<std::vector<std::size_t>> neighbours(m);
    for (std::size_t i = 0; i < m; ++i) neighbours[i] = k_nearest_neighbors(i, minority, spec.k);

    Rng rng(spec.seed);
    const std::size_t count = synthetic_count(spec.rate, m);
    std::vector<SyntheticSample> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const auto parent = static_cast<std::size_t>(rng.uniform_below(m));
        const auto neighbour = neighbours[parent][static_cast<std::size_t>(rng.uniform_below(spec.k))];
        const double alpha = rng.uniform01();
        out.push_back({synthesize_sample(minority[parent], minority[neighbour], alpha, spec.mode), parent, neighbour,
                       alpha});
    }
    return out;
}

}  // namespace revsent::balance
