#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "revsent/corpus.hpp"
#include "revsent/error.hpp"
#include "revsent/sparse.hpp"

namespace revsent::svm {

enum class KernelKind { Linear, Rbf, Polynomial };

inline std::string_view to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Polynomial: return "polynomial";
    }
    return "?";
}

inline KernelKind parse_kernel_kind(std::string_view s) {
    if (s == "linear") return KernelKind::Linear;
    if (s == "rbf") return KernelKind::Rbf;
    if (s == "polynomial" || s == "poly") return KernelKind::Polynomial;
    throw ValidationError("unknown kernel '" + std::string(s) + "'");
}

struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    double gamma = 1.0;  // rbf, polynomial
    int degree = 3;      // polynomial
    double coef0 = 0.0;  // polynomial

    void validate() const {
        if (kind != KernelKind::Linear && !(gamma > 0.0 && std::isfinite(gamma)))
            throw ValidationError("kernel gamma must be positive");
        if (kind == KernelKind::Polynomial && degree < 1) throw ValidationError("polynomial degree must be >= 1");
    }

    bool operator==(const KernelSpec&) const = default;
};

/// linear: <x,x'>; rbf: exp(-gamma ||x-x'||^2); polynomial: (gamma <x,x'> + coef0)^degree.
inline double kernel_eval(const KernelSpec& spec, const SparseVector& x, const SparseVector& x_prime) {
    switch (spec.kind) {
        case KernelKind::Linear: return dot(x, x_prime);
        case KernelKind::Rbf: return std::exp(-spec.gamma * squared_distance(x, x_prime));
        case KernelKind::Polynomial: {
            const double base = spec.gamma * dot(x, x_prime) + spec.coef0;
            double r = 1.0;
            for (int d = 0; d < spec.degree; ++d) r *= base;
            return r;
        }
    }
    return 0.0;
}

/// Per-class multipliers on C. The effective box bound of example i is
/// C * weight(y_i).
struct ClassWeights {
    double positive = 1.0;
    double negative = 1.0;

    bool operator==(const ClassWeights&) const = default;
};

/// w_c = n / (2 n_c).
inline ClassWeights inverse_frequency_weights(std::span<const int> labels) {
    std::size_t pos = 0, neg = 0;
    for (int y : labels) (y > 0 ? pos : neg)++;
    if (pos == 0 || neg == 0) throw ValidationError("inverse-frequency weights need both classes");
    const double n = static_cast<double>(labels.size());
    return {n / (2.0 * static_cast<double>(pos)), n / (2.0 * static_cast<double>(neg))};
}

struct TrainSpec {
    double C = 1.0;
    ClassWeights class_weights;
    /// Stop once the maximal KKT violation gap falls below this value.
    double tolerance = 1e-3;
    std::size_t max_iterations = 10'000'000;
    std::uint64_t seed = 0;
    /// Training sets at or below this size get a precomputed Gram matrix;
    /// larger ones use an LRU row cache bounded by cache_mb.
    std::size_t full_gram_limit = 2000;
    std::size_t cache_mb = 256;

    void validate() const {
        if (!(C > 0.0 && std::isfinite(C))) throw ValidationError("C must be positive");
        if (!(class_weights.positive > 0.0) || !(class_weights.negative > 0.0))
            throw ValidationError("class weights must give a positive box bound for both classes");
        if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
        if (max_iterations == 0) throw ValidationError("max_iterations must be positive");
    }

    double bound_for(int y) const { return C * (y > 0 ? class_weights.positive : class_weights.negative); }
};

struct TrainingInfo {
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double final_gap = 0.0;
    std::size_t n_train = 0;
    double c_positive = 0.0;
    double c_negative = 0.0;
};

/// Trained kernel machine. Only examples with mu > 0 are kept, each with its
/// coefficient mu_i * y_i.
struct SvmModel {
    std::vector<SparseVector> support_vectors;
    std::vector<double> coefficients;
    std::vector<double> multipliers;  // mu_i
    std::vector<int> labels;          // y_i in {+1,-1}
    double bias = 0.0;
    KernelSpec kernel;
    std::size_t dim = 0;
    TrainingInfo info;
};

/// f(x) = sum_i mu_i y_i K(x_i, x) + bias, summed in support-vector order.
inline double decision_value(const SvmModel& model, const SparseVector& x) {
    if (x.dim() != model.dim) throw DimensionError(model.dim, x.dim());
    double f = 0.0;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.coefficients[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
    return f + model.bias;
}

/// Positive iff f(x) >= 0; an exact zero counts as Positive.
inline Sentiment predict(const SvmModel& model, const SparseVector& x) {
    return decision_value(model, x) >= 0.0 ? Sentiment::Positive : Sentiment::Negative;
}

/// sum_i mu_i - 1/2 sum_ij mu_i mu_j y_i y_j K(x_i, x_j).
inline double dual_objective(std::span<const double> mu, std::span<const int> labels,
                             const std::vector<SparseVector>& data, const KernelSpec& kernel) {
    const std::size_t n = mu.size();
    if (labels.size() != n || data.size() != n) throw ValidationError("dual objective inputs differ in length");
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += mu[i];
        if (mu[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (mu[j] == 0.0) continue;
            quad += mu[i] * mu[j] * labels[i] * labels[j] * kernel_eval(kernel, data[i], data[j]);
        }
    }
    return linear - 0.5 * quad;
}

/// Snapshot handed to a training observer after every pair update.
struct StepView {
    std::size_t iteration;
    std::size_t i;
    std::size_t j;
    std::span<const double> mu;
    std::span<const int> labels;
    std::span<const double> upper_bounds;
    double objective;
};

using StepObserver = std::function<void(const StepView&)>;

namespace detail {

/// Kernel rows K(i, .) over the training set, either fully precomputed or
/// cached on demand with least-recently-used eviction.
class KernelRows {
public:
    KernelRows(const std::vector<SparseVector>& data, const KernelSpec& kernel, std::size_t full_limit,
               std::size_t cache_mb)
        : data_(data), kernel_(kernel), n_(data.size()) {
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_eval(kernel_, data_[i], data_[i]);
        if (n_ <= full_limit) {
            full_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                full_[i * n_ + i] = diag_[i];
                for (std::size_t j = i + 1; j < n_; ++j)
                    full_[i * n_ + j] = full_[j * n_ + i] = kernel_eval(kernel_, data_[i], data_[j]);
            }
        } else {
            const std::size_t row_bytes = std::max<std::size_t>(1, n_ * sizeof(double));
            capacity_ = std::max<std::size_t>(2, (cache_mb * 1024 * 1024) / row_bytes);
        }
    }

    double diag(std::size_t i) const { return diag_[i]; }

    /// Pointer stays valid until the next two row() calls.
    const double* row(std::size_t i) {
        if (!full_.empty()) return &full_[i * n_];
        auto it = index_.find(i);
        if (it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second.data();
        }
        if (lru_.size() >= capacity_) {
            index_.erase(lru_.back().first);
            lru_.pop_back();
        }
        std::vector<double> r(n_);
        for (std::size_t j = 0; j < n_; ++j) r[j] = j == i ? diag_[i] : kernel_eval(kernel_, data_[i], data_[j]);
        lru_.emplace_front(i, std::move(r));
        index_[i] = lru_.begin();
        return lru_.front().second.data();
    }

private:
    const std::vector<SparseVector>& data_;
    KernelSpec kernel_;
    std::size_t n_;
    std::vector<double> diag_;
    std::vector<double> full_;
    std::size_t capacity_ = 0;
    std::list<std::pair<std::size_t, std::vector<double>>> lru_;
    std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

inline constexpr double kTau = 1e-12;

}  // namespace detail

/// Trains a two-class soft-margin SVM by SMO on the dual problem
///
///   max  sum mu_i - 1/2 sum mu_i mu_j y_i y_j K(x_i,x_j)
///   s.t. 0 <= mu_i <= C_i,  sum mu_i y_i = 0,
///
/// with C_i = C * weight(y_i). Each iteration picks the maximal violating
/// pair (i from I_up maximising -y G, j from I_low minimising it) and solves
/// the two-variable subproblem analytically, so the equality constraint is
/// preserved by construction. Training stops when the violation gap drops
/// below spec.tolerance; hitting max_iterations returns the partial model
/// with info.converged == false.
///
/// The bias is the mean of -y_i G_i over free multipliers, or the midpoint of
/// the feasible interval when every multiplier sits at a bound.
inline SvmModel train_svm(const std::vector<SparseVector>& vectors, std::span<const int> labels, const TrainSpec& spec,
                          const KernelSpec& kernel, const StepObserver& observer = {}) {
    spec.validate();
    kernel.validate();
    const std::size_t n = vectors.size();
    if (labels.size() != n) throw ValidationError("vectors and labels differ in length");
    if (n == 0) throw ValidationError("empty training set");
    std::size_t pos = 0, neg = 0;
    for (int y : labels) {
        if (y == 1) ++pos;
        else if (y == -1) ++neg;
        else throw ValidationError("labels must be +1 or -1");
    }
    if (pos == 0 || neg == 0) throw ValidationError("training data contains a single class");
    const std::size_t dim = vectors.front().dim();
    for (const auto& v : vectors) {
        if (v.dim() != dim) throw DimensionError(dim, v.dim());
        if (!all_finite(v)) throw ValidationError("training features must be finite");
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // G = Q alpha - 1
    std::vector<double> upper(n);
    for (std::size_t t = 0; t < n; ++t) upper[t] = spec.bound_for(labels[t]);

    detail::KernelRows rows(vectors, kernel, spec.full_gram_limit, spec.cache_mb);
    auto objective = [&] {
        double d = 0.0;
        for (std::size_t t = 0; t < n; ++t) d += alpha[t] * (1.0 - grad[t]);
        return 0.5 * d;
    };
    auto in_up = [&](std::size_t t) { return labels[t] > 0 ? alpha[t] < upper[t] : alpha[t] > 0.0; };
    auto in_low = [&](std::size_t t) { return labels[t] > 0 ? alpha[t] > 0.0 : alpha[t] < upper[t]; };

    TrainingInfo info;
    info.n_train = n;
    info.c_positive = spec.bound_for(1);
    info.c_negative = spec.bound_for(-1);

    std::size_t iter = 0;
    for (;;) {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -labels[t] * grad[t];
            if (in_up(t) && v > gmax) {
                gmax = v;
                i = t;
            }
            if (in_low(t) && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        info.final_gap = (i == n || j == n) ? 0.0 : gmax - gmin;
        if (i == n || j == n || gmax - gmin < spec.tolerance) {
            info.converged = true;
            break;
        }
        if (iter >= spec.max_iterations) break;
        ++iter;

        const double* ki = rows.row(i);
        const double* kj = rows.row(j);
        const int yi = labels[i], yj = labels[j];
        const double ci = upper[i], cj = upper[j];
        const double qij = yi * yj * ki[j];
        const double old_i = alpha[i], old_j = alpha[j];

        if (yi != yj) {
            double quad = rows.diag(i) + rows.diag(j) + 2.0 * qij;
            if (quad <= 0.0) quad = detail::kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > ci - cj) {
                if (alpha[i] > ci) {
                    alpha[i] = ci;
                    alpha[j] = ci - diff;
                }
            } else if (alpha[j] > cj) {
                alpha[j] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            double quad = rows.diag(i) + rows.diag(j) - 2.0 * qij;
            if (quad <= 0.0) quad = detail::kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > ci) {
                if (alpha[i] > ci) {
                    alpha[i] = ci;
                    alpha[j] = sum - ci;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > cj) {
                if (alpha[j] > cj) {
                    alpha[j] = cj;
                    alpha[i] = sum - cj;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += labels[t] * (yi * ki[t] * di + yj * kj[t] * dj);

        if (observer) observer(StepView{iter, i, j, alpha, labels, upper, objective()});
    }
    info.iterations = iter;
    info.objective = objective();

    // Bias from the KKT conditions.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double v = -labels[t] * grad[t];
        if (alpha[t] >= upper[t]) {
            if (labels[t] > 0) ub = std::min(ub, v);
            else lb = std::max(lb, v);
        } else if (alpha[t] <= 0.0) {
            if (labels[t] > 0) lb = std::max(lb, v);
            else ub = std::min(ub, v);
        } else {
            free_sum += v;
            ++free_count;
        }
    }
    double bias = 0.0;
    if (free_count > 0) bias = free_sum / static_cast<double>(free_count);
    else if (std::isfinite(ub) && std::isfinite(lb)) bias = 0.5 * (ub + lb);
    else if (std::isfinite(ub)) bias = ub;
    else if (std::isfinite(lb)) bias = lb;

    SvmModel model;
    model.kernel = kernel;
    model.dim = dim;
    model.bias = bias;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] <= 0.0) continue;
        model.support_vectors.push_back(vectors[t]);
        model.multipliers.push_back(alpha[t]);
        model.labels.push_back(labels[t]);
        model.coefficients.push_back(alpha[t] * labels[t]);
    }
    model.info = info;
    return model;
}

inline std::vector<int> signs(const std::vector<Sentiment>& labels) {
    std::vector<int> y;
    y.reserve(labels.size());
    for (auto s : labels) y.push_back(sign_of(s));
    return y;
}

}  // namespace revsent::svm
