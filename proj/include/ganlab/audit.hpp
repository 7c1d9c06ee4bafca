#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ganlab/dp.hpp"

namespace ganlab::privacy {

// Data distribution the estimators can draw from indefinitely; finite
// supports additionally enumerate themselves for the exact oracle paths.
class DataSampler {
public:
    virtual ~DataSampler() = default;
    virtual engine::Tensor sample(engine::RngStream& rng) const = 0;
    virtual std::optional<std::vector<std::pair<engine::Tensor, double>>> support() const {
        return std::nullopt;
    }
    virtual std::size_t dim() const = 0;
};

// {a, b} with P(a) = prob_a; scalar examples (a < 0 <= b pairs well with
// HypothesisClass::two_point_grid).
class TwoPointSampler : public DataSampler {
public:
    TwoPointSampler(double a, double b, double prob_a);
    engine::Tensor sample(engine::RngStream& rng) const override;
    std::optional<std::vector<std::pair<engine::Tensor, double>>> support() const override;
    std::size_t dim() const override { return 1; }

private:
    double a_, b_, prob_a_;
};

// Gaussian ring as a sampler (for neural-path audits).
class RingSampler : public DataSampler {
public:
    explicit RingSampler(std::size_t n_modes = 8, double radius = 2.0, double stddev = 0.25);
    engine::Tensor sample(engine::RngStream& rng) const override;
    std::size_t dim() const override { return 2; }

private:
    std::size_t n_modes_;
    double radius_, stddev_, scale_;
};

// Uniform noise box, the frozen "generator output" stand-in for noisy
// discriminator training.
class UniformBoxSampler : public DataSampler {
public:
    UniformBoxSampler(std::size_t dim, double half_width = 1.0);
    engine::Tensor sample(engine::RngStream& rng) const override;
    std::size_t dim() const override { return dim_; }

private:
    std::size_t dim_;
    double half_width_;
};

// ---- estimators -----------------------------------------------------------

struct StabilityEstimate {
    double eps_stable = 0.0;
    double ci_half_width = 0.0;   // 95% Monte Carlo half-width at the maximizer
    std::size_t n_probes = 0;
    std::size_t n_pairs = 0;
    std::size_t runs_per_side = 0;
    bool exact = false;
};

// sup over adjacent pairs and probes of |E_{A(S)} loss(x) - E_{A(S')} loss(x)|.
// Adjacent datasets replace one element of S with a fresh draw. Exact
// enumeration replaces sampling when the learner exposes its output
// distribution.
StabilityEstimate estimate_ro_stability(const StochasticLearner& learner,
                                        const std::vector<engine::Tensor>& s,
                                        const std::vector<engine::Tensor>& probes,
                                        const DataSampler& replacement, std::size_t n_pairs,
                                        std::size_t n_runs, engine::RngStream& rng);

// Exact stability for a finite-support distribution: enumerates every
// dataset composition, every adjacent move, and every support probe.
StabilityEstimate exact_stability_finite(const StochasticLearner& learner,
                                         const DataSampler& p_data, std::size_t m);

struct GapEstimate {
    double f_u = 0.0;             // E[U_hat - U]
    double ci_half_width = 0.0;
    std::size_t m = 0;
    std::size_t runs = 0;
    bool exact = false;
    double u_eval_rel_error = 0.0;  // reported sampling error of the U estimate
};

// Monte Carlo estimate of the generalization gap: draw S ~ p_data^m, train,
// compare empirical and population loss (population via exact support or a
// fresh sample of eval_factor * m points).
GapEstimate estimate_generalization_gap(const StochasticLearner& learner,
                                        const DataSampler& p_data, std::size_t m,
                                        std::size_t n_runs, std::size_t eval_factor,
                                        engine::RngStream& rng);

// Fully enumerated gap over a finite support (binomial weights over dataset
// compositions); exact, zero half-width.
GapEstimate exact_gap_finite(const StochasticLearner& learner, const DataSampler& p_data,
                             std::size_t m);

// ---- chain verification -----------------------------------------------------

struct ChainRow {
    std::string mechanism;
    bool has_epsilon = false;
    double epsilon = 0.0;
    double stability_bound = 0.0;   // e^eps - 1
    StabilityEstimate stability;
    GapEstimate gap;
    bool stability_ok = false;      // stability <= bound + ci
    bool gap_ok = false;            // |F_U| <= stability + combined ci
    bool chain_applicable = true;   // false for non-private mechanisms
};

struct ChainConfig {
    std::vector<double> eps_grid{0.1, 0.5, 1.0};
    std::size_t h_size = 8;
    std::size_t m = 16;
    double prob_a = 0.5;
    std::size_t n_runs = 200;       // sampling fallback when enumeration is off
    bool include_controls = true;   // constant + memorizer + argmax rows
};

std::vector<ChainRow> verify_dp_chain(const ChainConfig& config, engine::RngStream& rng);

// One row for an arbitrary learner over an arbitrary distribution.
ChainRow verify_chain_row(const StochasticLearner& learner, const DataSampler& p_data,
                          std::size_t m, std::size_t n_runs, engine::RngStream& rng);

void write_chain_csv(const std::string& path, const std::vector<ChainRow>& rows);
std::string chain_summary(const std::vector<ChainRow>& rows);

// ---- per-iteration uniform convergence ---------------------------------------

struct NoisyTrainConfig {
    std::size_t m = 64;               // training samples (= batch; full-batch steps)
    std::size_t steps = 200;
    std::size_t checkpoint_every = 25;
    double clip_norm = 1.0;
    double laplace_scale = 4.0;
    double lr = 0.05;
    std::vector<std::size_t> hidden{8};
    std::size_t eval_factor = 100;    // population sample = eval_factor * m
    std::vector<double> t_grid{0.1, 0.2, 0.3, 0.4, 0.5};

    double eps_per_step() const { return noisy_step_epsilon(clip_norm, m, laplace_scale); }
};

struct UcCheckpointRow {
    std::size_t k = 0;
    double eps_cum = 0.0;                  // k * eps_per_step, exact by construction
    std::vector<double> exceed_freq;       // P_hat(|U_hat - U| >= t) per grid t
    std::vector<double> bound;             // capped McDiarmid bound at eps_cum
    std::vector<double> bound_total_eps;   // bound at the final epsilon (k-free)
    double mean_abs_gap = 0.0;
    double max_abs_gap = 0.0;
    bool ok = true;                        // freq <= bound on the whole grid
};

struct UcReport {
    std::vector<double> t_grid;
    std::vector<UcCheckpointRow> rows;     // k = 0 row first
    std::size_t n_runs = 0;
    std::size_t m = 0;
    double eps_per_step = 0.0;
    double k0_mean_gap = 0.0;              // signed; sampling noise only
    double k0_se = 0.0;
    bool k0_ok = true;                     // |mean| <= 3 se
    bool pass = true;                      // every k >= 1 row ok and k0_ok
};

// Repeats seeded noisy-gradient trainings of a small sigmoid discriminator
// (real data against a frozen fake source), measuring |U_hat - U| of the
// real-data loss term at every checkpoint, and compares exceedance
// frequencies against the accounted-epsilon tail bound.
UcReport verify_uniform_convergence(const DataSampler& p_data, const DataSampler& p_fake,
                                    const NoisyTrainConfig& config, std::size_t n_runs,
                                    engine::RngStream& rng);

void write_uc_csv(const std::string& path, const UcReport& report);
std::string uc_summary(const UcReport& report);

}  // namespace ganlab::privacy
