#include "ganlab/dp.hpp"

#include <algorithm>
#include <cmath>

#include "ganlab/errors.hpp"

namespace ganlab::privacy {

using engine::RngStream;
using engine::Tensor;

double dp_stability_bound(double epsilon) {
    if (epsilon < 0.0) throw DomainError("stability bound: epsilon must be >= 0");
    return std::expm1(epsilon);
}

double gap_bound_from_stability(double eps_stable) {
    if (eps_stable < 0.0) throw DomainError("gap bound: stability rate must be >= 0");
    return eps_stable;
}

TailBound mcdiarmid_tail(double t, std::size_t m, double epsilon) {
    if (!(t > 0.0)) throw DomainError("mcdiarmid: t must be > 0");
    if (m < 1) throw DomainError("mcdiarmid: m must be >= 1");
    if (!(epsilon > 0.0)) throw DomainError("mcdiarmid: epsilon must be > 0");
    const double raw = 2.0 * std::exp(-2.0 * t * t / (static_cast<double>(m) * epsilon * epsilon));
    return TailBound{raw, std::min(raw, 1.0)};
}

std::vector<double> exp_mechanism_probs(std::span<const double> scores, double epsilon,
                                        double sensitivity) {
    if (scores.empty()) throw ConfigError("exp mechanism: empty hypothesis class");
    if (epsilon < 0.0) throw DomainError("exp mechanism: epsilon must be >= 0");
    if (!(sensitivity > 0.0)) throw DomainError("exp mechanism: sensitivity must be > 0");
    const double k = epsilon / (2.0 * sensitivity);
    double mx = scores[0];
    for (double s : scores) mx = std::max(mx, s);
    std::vector<double> p(scores.size());
    double z = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        p[i] = std::exp(k * (scores[i] - mx));
        z += p[i];
    }
    for (double& x : p) x /= z;
    return p;
}

std::size_t exp_mechanism_select(std::span<const double> scores, double epsilon,
                                 double sensitivity, RngStream& rng) {
    const std::vector<double> p = exp_mechanism_probs(scores, epsilon, sensitivity);
    double u = rng.uniform01();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        u -= p[i];
        if (u < 0.0) return i;
    }
    return p.size() - 1;
}

double noisy_step_epsilon(double clip_norm, std::size_t batch, double laplace_scale) {
    if (!(clip_norm > 0.0)) throw DomainError("noisy step: clip norm must be > 0");
    if (batch < 1) throw DomainError("noisy step: batch must be >= 1");
    if (!(laplace_scale > 0.0)) throw DomainError("noisy step: noise scale must be > 0");
    return clip_norm / (static_cast<double>(batch) * laplace_scale);
}

Tensor noisy_clipped_mean_gradient(const std::vector<Tensor>& per_example_grads,
                                   double clip_norm, double laplace_scale, RngStream& rng) {
    if (per_example_grads.empty()) throw ConfigError("noisy gradient: no examples");
    if (!(clip_norm > 0.0)) throw DomainError("noisy gradient: clip norm must be > 0");
    if (!(laplace_scale > 0.0)) throw DomainError("noisy gradient: noise scale must be > 0");

    Tensor mean = Tensor::zeros_like(per_example_grads.front());
    const double inv_m = 1.0 / static_cast<double>(per_example_grads.size());
    for (const Tensor& g : per_example_grads) {
        if (!g.same_shape(mean)) throw ShapeError("noisy gradient: shape mismatch");
        g.require_finite("per-example gradient");
        double norm2 = 0.0;
        for (std::size_t i = 0; i < g.numel(); ++i) norm2 += g[i] * g[i];
        const double norm = std::sqrt(norm2);
        const double scale = norm > clip_norm ? clip_norm / norm : 1.0;
        for (std::size_t i = 0; i < g.numel(); ++i) mean[i] += inv_m * scale * g[i];
    }
    for (std::size_t i = 0; i < mean.numel(); ++i) mean[i] += rng.laplace(laplace_scale);
    return mean;
}

// ---- hypothesis classes ---------------------------------------------------

HypothesisClass::HypothesisClass(std::vector<Hypothesis> hs) : hs_(std::move(hs)) {
    if (hs_.empty()) throw ConfigError("hypothesis class must be nonempty");
}

HypothesisClass HypothesisClass::two_point_grid(std::size_t n) {
    if (n < 1) throw ConfigError("hypothesis grid: n must be >= 1");
    std::vector<Hypothesis> hs;
    hs.reserve(n);
    // Losses depend on the sign of the scalar example: value la on x < 0,
    // lb on x >= 0, swept over an even grid of (la, lb) pairs in [0, 1].
    for (std::size_t i = 0; i < n; ++i) {
        const double la = (n == 1) ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
        const double lb = 1.0 - la;
        hs.push_back(Hypothesis{
            "h" + std::to_string(i), [la, lb](const Tensor& x) {
                return x[0] < 0.0 ? la : lb;
            }});
    }
    return HypothesisClass(std::move(hs));
}

// ---- learners --------------------------------------------------------------

ExpMechanismLearner::ExpMechanismLearner(HypothesisClass hs, double epsilon, std::size_t m)
    : hs_(std::move(hs)), epsilon_(epsilon) {
    if (epsilon < 0.0) throw DomainError("exp mechanism learner: epsilon must be >= 0");
    if (m < 1) throw ConfigError("exp mechanism learner: m must be >= 1");
    // Empirical mean of range-1 losses moves by at most 1/m when one
    // example is replaced.
    sensitivity_ = 1.0 / static_cast<double>(m);
}

std::vector<double> ExpMechanismLearner::scores(const std::vector<Tensor>& data) const {
    std::vector<double> s(hs_.size(), 0.0);
    for (std::size_t i = 0; i < hs_.size(); ++i) {
        double acc = 0.0;
        for (const Tensor& x : data) acc += hs_[i].loss(x);
        s[i] = acc / static_cast<double>(data.size());
    }
    return s;
}

ExpMechanismLearner::LossFn ExpMechanismLearner::fit(const std::vector<Tensor>& data,
                                                     RngStream& rng) const {
    const std::vector<double> sc = scores(data);
    const std::size_t pick = exp_mechanism_select(sc, epsilon_, sensitivity_, rng);
    return hs_[pick].loss;
}

std::optional<std::vector<double>> ExpMechanismLearner::enumerate_probs(
    const std::vector<Tensor>& data) const {
    return exp_mechanism_probs(scores(data), epsilon_, sensitivity_);
}

std::string ExpMechanismLearner::name() const {
    return "exp-mechanism(eps=" + std::to_string(epsilon_) + ")";
}

ConstantLearner::LossFn ConstantLearner::fit(const std::vector<Tensor>&, RngStream&) const {
    const double v = value_;
    return [v](const Tensor&) { return v; };
}

MemorizingLearner::LossFn MemorizingLearner::fit(const std::vector<Tensor>& data,
                                                 RngStream&) const {
    std::vector<Tensor> copy = data;
    const double radius = radius_;
    const double base = base_;
    return [copy, radius, base](const Tensor& x) {
        for (const Tensor& t : copy) {
            if (!t.same_shape(x)) continue;
            double d2 = 0.0;
            for (std::size_t i = 0; i < t.numel(); ++i) {
                const double d = t[i] - x[i];
                d2 += d * d;
            }
            if (std::sqrt(d2) <= radius) return 1.0;
        }
        return base;
    };
}

std::size_t ArgmaxLearner::argmax_index(const std::vector<Tensor>& data) const {
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < hs_.size(); ++i) {
        double acc = 0.0;
        for (const Tensor& x : data) acc += hs_[i].loss(x);
        if (acc > best_score) {
            best_score = acc;
            best = i;
        }
    }
    return best;
}

ArgmaxLearner::LossFn ArgmaxLearner::fit(const std::vector<Tensor>& data, RngStream&) const {
    return hs_[argmax_index(data)].loss;
}

std::optional<std::vector<double>> ArgmaxLearner::enumerate_probs(
    const std::vector<Tensor>& data) const {
    std::vector<double> p(hs_.size(), 0.0);
    p[argmax_index(data)] = 1.0;
    return p;
}

PostProcessedLearner::PostProcessedLearner(std::shared_ptr<const StochasticLearner> inner,
                                           std::vector<std::size_t> index_map)
    : inner_(std::move(inner)), map_(std::move(index_map)) {
    const HypothesisClass* hs = inner_->hypotheses();
    if (!hs) throw ConfigError("post-processing requires an enumerable inner mechanism");
    if (map_.size() != hs->size()) throw ConfigError("post-map size mismatch");
    for (std::size_t i : map_) {
        if (i >= hs->size()) throw ConfigError("post-map index out of range");
    }
}

PostProcessedLearner::LossFn PostProcessedLearner::fit(const std::vector<Tensor>& data,
                                                       RngStream& rng) const {
    // Select via the inner mechanism, then remap the outcome.
    const auto probs = inner_->enumerate_probs(data);
    if (!probs) {
        // fall back: run the inner learner; cannot remap opaque outputs
        return inner_->fit(data, rng);
    }
    double u = rng.uniform01();
    std::size_t pick = probs->size() - 1;
    for (std::size_t i = 0; i + 1 < probs->size(); ++i) {
        u -= (*probs)[i];
        if (u < 0.0) {
            pick = i;
            break;
        }
    }
    return (*inner_->hypotheses())[map_[pick]].loss;
}

std::optional<std::vector<double>> PostProcessedLearner::enumerate_probs(
    const std::vector<Tensor>& data) const {
    const auto inner_probs = inner_->enumerate_probs(data);
    if (!inner_probs) return std::nullopt;
    std::vector<double> out(inner_->hypotheses()->size(), 0.0);
    for (std::size_t i = 0; i < inner_probs->size(); ++i) out[map_[i]] += (*inner_probs)[i];
    return out;
}

const HypothesisClass* PostProcessedLearner::hypotheses() const { return inner_->hypotheses(); }

}  // namespace ganlab::privacy
