#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ganlab/train.hpp"

namespace ganlab::exp {

enum class AttackMode { Whitebox, Blackbox, Both };

AttackMode attack_mode_from_string(const std::string& s);
std::string attack_mode_to_string(AttackMode m);

// Flat key=value experiment description. Parsing is strict: an unknown key
// is an error, and every run is fully determined by (config, seed).
struct ExperimentConfig {
    // dataset
    std::string dataset = "ring";            // ring | patterns | folder:<path>
    std::size_t samples = 512;
    double train_fraction = 0.25;
    std::size_t ring_modes = 8;
    double ring_radius = 2.0;
    double ring_stddev = 0.25;
    std::size_t pattern_classes = 4;
    std::size_t pattern_side = 8;
    double pattern_jitter = 0.25;
    std::size_t image_side = 8;              // folder datasets

    // grid
    std::vector<gan::Strategy> strategies{gan::Strategy::Original, gan::Strategy::Clip,
                                          gan::Strategy::Spectral};
    std::vector<gan::Objective> objectives{gan::Objective::Js};
    std::vector<std::uint64_t> seeds{1, 2, 3};

    // training
    std::size_t epochs = 60;
    std::size_t batch = 64;
    std::size_t checkpoint_every = 50;
    std::size_t noise_dim = 8;
    std::vector<std::size_t> d_hidden{64, 64};
    std::vector<std::size_t> g_hidden{64, 64};
    int d_steps = 0;                         // 0 = objective default
    bool non_saturating = false;
    double lr_override = 0.0;                // 0 = Table-3 default
    double beta1_override = -1.0;            // <0 = default
    std::string noise_prior = "normal";      // normal | uniform

    // attack
    AttackMode attack = AttackMode::Whitebox;
    double aux_fraction = 0.3;

    // metrics
    std::size_t classifier_iters = 400;
    std::size_t sample_count = 512;

    // audit
    std::vector<double> eps_grid{0.1, 0.5, 1.0};
    std::size_t audit_h_size = 8;
    std::size_t audit_m = 16;
    std::size_t chain_runs = 200;
    std::size_t uc_runs = 200;
    std::size_t uc_steps = 200;
    std::size_t uc_m = 64;
    std::size_t uc_checkpoint_every = 25;
    double uc_clip = 1.0;
    double uc_noise = 4.0;
    double uc_lr = 0.05;

    // execution
    std::string out_dir = "out";
    std::size_t workers = 1;
    std::uint64_t master_seed = 0;           // offsets every per-cell seed

    // Resolved training config for one grid cell.
    gan::TrainConfig train_config(gan::Strategy s, gan::Objective o,
                                  std::uint64_t seed) const;
};

ExperimentConfig parse_config_file(const std::string& path);
// key=value override (CLI flags win over file contents).
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

}  // namespace ganlab::exp
