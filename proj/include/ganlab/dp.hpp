#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ganlab/rng.hpp"
#include "ganlab/tensor.hpp"

namespace ganlab::privacy {

// ---- closed-form bounds -------------------------------------------------

// epsilon-DP implies (e^eps - 1)-RO-stability.
double dp_stability_bound(double epsilon);

// Uniform RO-stability at rate s bounds |F_U| by s (pass-through).
double gap_bound_from_stability(double eps_stable);

struct TailBound {
    double raw;     // 2 exp(-2 t^2 / (m eps^2)), possibly > 1
    double capped;  // min(raw, 1) for reporting
};

// Per-iteration uniform-convergence tail: P(|U - U_hat| >= t).
TailBound mcdiarmid_tail(double t, std::size_t m, double epsilon);

// ---- exponential mechanism ----------------------------------------------

// P(h) proportional to exp(eps * score_h / (2 * sensitivity)); computed with
// the max-shift so large scores cannot overflow. eps = 0 degenerates to the
// uniform distribution.
std::vector<double> exp_mechanism_probs(std::span<const double> scores, double epsilon,
                                        double sensitivity);

std::size_t exp_mechanism_select(std::span<const double> scores, double epsilon,
                                 double sensitivity, engine::RngStream& rng);

// ---- noisy clipped-gradient step -----------------------------------------

// Basic-composition accounting for the Laplace step below: each step spends
// clip_norm / (batch * laplace_scale), and steps add up.
double noisy_step_epsilon(double clip_norm, std::size_t batch, double laplace_scale);

// Clips each per-example gradient to L2 norm <= clip_norm, averages, adds
// per-coordinate Laplace(laplace_scale) noise. Returns the noisy mean
// gradient; the caller applies the optimizer update and accumulates the
// privacy cost.
engine::Tensor noisy_clipped_mean_gradient(const std::vector<engine::Tensor>& per_example_grads,
                                           double clip_norm, double laplace_scale,
                                           engine::RngStream& rng);

// ---- toy learners over a finite hypothesis class --------------------------

// A hypothesis is a per-example loss evaluator phi(d(x; theta)) with values
// in [0, 1], which keeps the stability lemma's range assumption exact.
struct Hypothesis {
    std::string name;
    std::function<double(const engine::Tensor&)> loss;
};

class HypothesisClass {
public:
    HypothesisClass() = default;
    explicit HypothesisClass(std::vector<Hypothesis> hs);

    std::size_t size() const { return hs_.size(); }
    const Hypothesis& operator[](std::size_t i) const { return hs_[i]; }

    // |H| evenly spread "two-point table" hypotheses for a support {a, b}:
    // h_i = (loss on a, loss on b) on a small grid.
    static HypothesisClass two_point_grid(std::size_t n);

private:
    std::vector<Hypothesis> hs_;
};

// Randomized learner abstraction for the stability / gap estimators: train
// on S, get back a per-example loss evaluator. Implementations may also
// expose their exact output distribution and privacy cost.
class StochasticLearner {
public:
    virtual ~StochasticLearner() = default;

    using LossFn = std::function<double(const engine::Tensor&)>;

    virtual LossFn fit(const std::vector<engine::Tensor>& data,
                       engine::RngStream& rng) const = 0;

    // (probability, hypothesis index) pairs when the output distribution is
    // exactly enumerable; used by the oracle paths.
    virtual std::optional<std::vector<double>> enumerate_probs(
        const std::vector<engine::Tensor>& data) const {
        (void)data;
        return std::nullopt;
    }
    virtual const HypothesisClass* hypotheses() const { return nullptr; }

    // Exact privacy cost when the mechanism has one.
    virtual std::optional<double> privacy_epsilon() const { return std::nullopt; }

    virtual std::string name() const = 0;
};

// Exponential mechanism over a finite class, scoring hypotheses by their
// empirical mean loss (higher is better for the selection; the mechanism
// maximizes utility = mean loss, mirroring the discriminator's ascent).
class ExpMechanismLearner : public StochasticLearner {
public:
    ExpMechanismLearner(HypothesisClass hs, double epsilon, std::size_t m);

    LossFn fit(const std::vector<engine::Tensor>& data, engine::RngStream& rng) const override;
    std::optional<std::vector<double>> enumerate_probs(
        const std::vector<engine::Tensor>& data) const override;
    const HypothesisClass* hypotheses() const override { return &hs_; }
    std::optional<double> privacy_epsilon() const override { return epsilon_; }
    std::string name() const override;

    double sensitivity() const { return sensitivity_; }

private:
    HypothesisClass hs_;
    double epsilon_;
    double sensitivity_;  // 1/m for range-1 losses under replace-one

    std::vector<double> scores(const std::vector<engine::Tensor>& data) const;
};

// Ignores its input entirely; the zero-stability control.
class ConstantLearner : public StochasticLearner {
public:
    explicit ConstantLearner(double value = 0.5) : value_(value) {}
    LossFn fit(const std::vector<engine::Tensor>&, engine::RngStream&) const override;
    std::optional<double> privacy_epsilon() const override { return 0.0; }
    std::string name() const override { return "constant"; }

private:
    double value_;
};

// Memorizes the training set: loss 1 within `radius` of any training point,
// `base` elsewhere. The non-private positive control that must show a gap.
class MemorizingLearner : public StochasticLearner {
public:
    MemorizingLearner(double radius = 1e-9, double base = 0.0)
        : radius_(radius), base_(base) {}
    LossFn fit(const std::vector<engine::Tensor>& data, engine::RngStream&) const override;
    std::string name() const override { return "memorizer"; }

private:
    double radius_;
    double base_;
};

// Deterministic empirical-loss argmax over a hypothesis class; non-private
// (no epsilon), the chain-check control path. Its output distribution is a
// point mass, so it still enumerates exactly.
class ArgmaxLearner : public StochasticLearner {
public:
    explicit ArgmaxLearner(HypothesisClass hs) : hs_(std::move(hs)) {}
    LossFn fit(const std::vector<engine::Tensor>& data, engine::RngStream&) const override;
    std::optional<std::vector<double>> enumerate_probs(
        const std::vector<engine::Tensor>& data) const override;
    const HypothesisClass* hypotheses() const override { return &hs_; }
    std::string name() const override { return "argmax"; }

private:
    HypothesisClass hs_;
    std::size_t argmax_index(const std::vector<engine::Tensor>& data) const;
};

// Composition f(A(.)) with a data-independent index remapping f; inherits
// A's privacy cost by post-processing.
class PostProcessedLearner : public StochasticLearner {
public:
    PostProcessedLearner(std::shared_ptr<const StochasticLearner> inner,
                         std::vector<std::size_t> index_map);

    LossFn fit(const std::vector<engine::Tensor>& data, engine::RngStream& rng) const override;
    std::optional<std::vector<double>> enumerate_probs(
        const std::vector<engine::Tensor>& data) const override;
    const HypothesisClass* hypotheses() const override;
    std::optional<double> privacy_epsilon() const override { return inner_->privacy_epsilon(); }
    std::string name() const override { return inner_->name() + "+postmap"; }

private:
    std::shared_ptr<const StochasticLearner> inner_;
    std::vector<std::size_t> map_;
};

}  // namespace ganlab::privacy
