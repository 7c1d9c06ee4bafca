#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ganlab/attack.hpp"
#include "ganlab/audit.hpp"
#include "ganlab/config.hpp"
#include "ganlab/metrics.hpp"

namespace ganlab::exp {

// One (strategy, objective, seed, attack-mode) measurement.
struct RunRow {
    std::string strategy;
    std::string objective;
    std::string mode;             // whitebox | blackbox
    std::uint64_t seed = 0;
    bool failed = false;
    std::string failure_reason;
    double f1 = 0.0;
    double auc = 0.0;
    double gap = 0.0;
    double score = 0.0;           // classifier score of generated samples
    double threshold = 0.0;
};

// Aggregate over seeds for one (strategy, objective, mode) cell. Failed
// seeds are excluded from the means and surface in n_failed; a fully failed
// cell renders as N/A.
struct AggRow {
    std::string strategy;
    std::string objective;
    std::string mode;
    std::size_t n_seeds = 0;
    std::size_t n_failed = 0;
    double f1_mean = 0.0, f1_std = 0.0;
    double auc_mean = 0.0, auc_std = 0.0;
    double gap_mean = 0.0, gap_std = 0.0;
    double score_mean = 0.0, score_std = 0.0;

    bool all_failed() const { return n_failed == n_seeds; }
};

struct ResultsTable {
    std::vector<AggRow> rows;
    std::vector<RunRow> runs;
};

// Everything one training-plus-attack run produces.
struct CellResult {
    gan::Outcome outcome = gan::Outcome::Converged;
    std::string failure_reason;
    std::optional<attack::AttackResult> whitebox;
    std::optional<attack::AttackResult> blackbox;
    double gap = 0.0;
    double score = 0.0;
    gan::TrainResult training;
};

// Builds the per-seed dataset (identical across strategies for a fixed
// seed) and its train/holdout partition.
data::SplitPair build_dataset(const ExperimentConfig& config, std::uint64_t seed);

// Trains, attacks, computes gap and classifier score. Artifacts (loss
// curve, checkpoint, ROC sidecars, sample grid, manifest) land in out_dir
// when it is nonempty; training failure is an outcome, not an error.
CellResult run_experiment(const ExperimentConfig& config, gan::Strategy strategy,
                          gan::Objective objective, std::uint64_t seed,
                          const std::string& out_dir = "");

// Full grid, parallel across cells, deterministic aggregation. Writes
// results.csv / results.md / runs.csv under config.out_dir when write_files.
ResultsTable run_suite(const ExperimentConfig& config, bool write_files = true);

struct AuditOutputs {
    std::vector<privacy::ChainRow> chain;
    privacy::UcReport uc;
};

// DP-chain verification over the configured epsilon grid plus the
// noisy-gradient uniform-convergence sweep; writes audit.csv, uc.csv and a
// readable summary when write_files.
AuditOutputs run_audit(const ExperimentConfig& config, bool write_files = true);

std::string results_csv(const ResultsTable& table);
std::string runs_csv(const ResultsTable& table);
std::string results_markdown(const ResultsTable& table, const ExperimentConfig& config);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ganlab::exp
