#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "revsent/corpus.hpp"
#include "revsent/error.hpp"
#include "revsent/sparse.hpp"

namespace revsent::logistic {

struct LogisticSpec {
    double learning_rate = 0.5;
    std::size_t epochs = 200;
    std::uint64_t seed = 0;
};

/// Unweighted logistic regression; used as the majority-biased baseline.
struct LogisticBaseline {
    std::vector<double> weights;
    double bias = 0.0;
    double learning_rate = 0.0;
    std::size_t epochs = 0;
    std::uint64_t seed = 0;
};

inline double decision_value(const LogisticBaseline& model, const SparseVector& x) {
    if (x.dim() != model.weights.size()) throw DimensionError(model.weights.size(), x.dim());
    double z = model.bias;
    for (std::size_t k = 0; k < x.nnz(); ++k) z += model.weights[x.indices()[k]] * x.values()[k];
    return z;
}

inline Sentiment predict(const LogisticBaseline& model, const SparseVector& x) {
    return decision_value(model, x) >= 0.0 ? Sentiment::Positive : Sentiment::Negative;
}

/// Full-batch gradient descent on the mean log-loss from zero weights.
/// Deterministic: the seed is recorded but no randomness is drawn.
inline LogisticBaseline train_logistic_baseline(const std::vector<SparseVector>& vectors, std::span<const int> labels,
                                                const LogisticSpec& spec) {
    const std::size_t n = vectors.size();
    if (labels.size() != n) throw ValidationError("vectors and labels differ in length");
    bool has_pos = false, has_neg = false;
    for (int y : labels) (y > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw ValidationError("logistic baseline needs both classes");
    if (!(spec.learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
    const std::size_t dim = vectors.front().dim();
    for (const auto& v : vectors)
        if (v.dim() != dim) throw DimensionError(dim, v.dim());

    LogisticBaseline model{std::vector<double>(dim, 0.0), 0.0, spec.learning_rate, spec.epochs, spec.seed};
    std::vector<double> gw(dim);
    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        std::fill(gw.begin(), gw.end(), 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = decision_value(model, vectors[i]);
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double err = p - (labels[i] > 0 ? 1.0 : 0.0);
            for (std::size_t k = 0; k < vectors[i].nnz(); ++k) gw[vectors[i].indices()[k]] += err * vectors[i].values()[k];
            gb += err;
        }
        const double step = spec.learning_rate / static_cast<double>(n);
        for (std::size_t d = 0; d < dim; ++d) model.weights[d] -= step * gw[d];
        model.bias -= step * gb;
    }
    return model;
}

}  // namespace revsent::logistic
