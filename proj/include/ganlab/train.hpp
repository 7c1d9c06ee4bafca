#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ganlab/dataset.hpp"
#include "ganlab/losses.hpp"

namespace ganlab::gan {

// Table-1 strategy grid plus the two extra weight-normalization rows.
enum class Strategy { Original, Clip, Spectral, Gp, WeightNorm, Orthonormal };

Strategy strategy_from_string(const std::string& s);
std::string strategy_to_string(Strategy s);

enum class Objective { Js, Wasserstein };
Objective objective_from_string(const std::string& s);
std::string objective_to_string(Objective o);

MeasuringFunction measuring_for(Objective o);

// Adam hyperparameters per (strategy, objective): JS rows train at lr 4e-4,
// Wasserstein rows at 2e-4; beta1 is 0.5 except for the reparameterized /
// penalized strategies which use 0.0; beta2 is 0.999 throughout.
engine::AdamConfig adam_defaults(Strategy s, Objective o);

lipschitz::RegularizerSpec regularizer_for(Strategy s);

struct TrainConfig {
    Objective objective = Objective::Js;
    Strategy strategy = Strategy::Original;
    lipschitz::RegularizerSpec reg;          // resolved from strategy unless customized
    std::size_t batch = 64;
    std::size_t epochs = 25;
    engine::AdamConfig adam;                 // resolved from Table-3 defaults unless customized
    std::uint64_t seed = 1;
    int d_steps_per_g = 1;                   // 5 is the Wasserstein convention
    std::size_t checkpoint_every = 50;       // iterations
    bool non_saturating = false;             // default: literal objective
    NoisePrior noise{NoisePrior::Kind::StandardNormal, 64};
    std::vector<std::size_t> d_hidden{64, 64};
    std::vector<std::size_t> g_hidden{64, 64};
    double divergence_guard = 1e9;           // |loss| beyond this records failure
    // When set, half of each discriminator-step fake batch comes from this
    // sampler (shadow training against a target generator's output).
    std::function<engine::Tensor(std::size_t, engine::RngStream&)> extra_fake_sampler;

    static TrainConfig make(Strategy s, Objective o);
    MeasuringFunction phi() const { return measuring_for(objective); }
};

enum class Outcome { Converged, Failed };

struct LossPoint {
    std::size_t iteration;
    double train_loss_d;
    double heldout_loss_d;
    double train_loss_g;
};

// Parameter snapshot taken at checkpoint cadence; effective weights are the
// forward-pass matrices (post reparameterization) for spectral audits.
struct Checkpoint {
    std::size_t iteration;
    std::vector<engine::Tensor> d_params;
    std::vector<engine::Tensor> effective_weights;
    double max_abs_weight;
};

struct TrainResult {
    Outcome outcome = Outcome::Converged;
    std::string failure_reason;
    Discriminator d;
    Generator g;
    std::vector<LossPoint> curve;
    std::vector<Checkpoint> checkpoints;
    std::size_t iterations_run = 0;
    // Clip audit: max |w| observed immediately after each discriminator
    // step, maximized over the whole run.
    double post_step_max_abs_weight = 0.0;
    bool zero_row_warning = false;

    double final_gap() const;          // |heldout - train| at the last checkpoint
    double final_gap_signed() const;   // heldout - train
};

// One ascent step on U_hat for the discriminator (descent on -U_hat plus
// penalties, projection afterwards). Returns the utility value.
double train_step_discriminator(Discriminator& d, const Generator& g,
                                const engine::Tensor& real_batch, const TrainConfig& config,
                                engine::AdamState& opt, engine::RngStream& rng);

// One descent step on V_hat for the generator; no regularizer, never reads
// real data. Returns the loss value.
double train_step_generator(Discriminator& d, Generator& g, const TrainConfig& config,
                            engine::AdamState& opt, engine::RngStream& rng);

// Alternates the two mechanisms for epochs * floor(train/batch) iterations,
// records loss curves at checkpoint cadence and classifies the outcome. A
// non-finite loss or divergence past the guard records Failed instead of
// throwing.
TrainResult train(const TrainConfig& config, const data::Dataset& train_split,
                  const data::Dataset& holdout_split);

// ---- checkpoint / curve files -----------------------------------------

// Versioned textual parameter dump with shape headers.
void save_checkpoint(const std::string& path, const Discriminator& d, const Generator& g);
// Loads into models of matching architecture.
void load_checkpoint(const std::string& path, Discriminator& d, Generator& g);

// CSV: iteration,train_loss_d,heldout_loss_d,train_loss_g
void write_loss_curve(const std::string& path, const std::vector<LossPoint>& curve);

}  // namespace ganlab::gan
