#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ganlab/dataset.hpp"
#include "ganlab/train.hpp"

namespace ganlab::attack {

// Membership-labeled evaluation set built by mixing the training split with
// the held-out remainder. Views keep the storage-level instrumentation.
struct AttackTestSet {
    data::Dataset members;      // drawn from the training split
    data::Dataset nonmembers;   // drawn from the holdout split
    std::string provenance;

    std::size_t size() const { return members.size() + nonmembers.size(); }
    double member_fraction() const {
        return static_cast<double>(members.size()) / static_cast<double>(size());
    }
};

// Throws on overlapping splits; reports class balance via member_fraction.
AttackTestSet build_attack_testset(const data::Dataset& train_split,
                                   const data::Dataset& holdout_split);

struct RocPoint {
    double fpr;
    double tpr;
};

struct AucResult {
    double auc = 0.5;
    std::vector<RocPoint> roc;
};

// Threshold-sweep ROC over distinct scores plus trapezoidal area. Ties are
// grouped, which makes the area coincide with the rank statistic
// (probability a random member outscores a random nonmember, ties at 1/2).
AucResult compute_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

// 1 iff score >= t (the decision inequality is inclusive).
int attack_decide(double score, double t);

struct F1Result {
    double f1 = 0.0;
    double threshold = 0.5;
    bool degenerate = false;  // no positive predictions; f1 pinned to 0
    double precision = 0.0;
    double recall = 0.0;
};

// t = mean of the member-side calibration scores, then F1 over the test
// scores with member as the positive class.
F1Result f1_at_mean_threshold(const std::vector<double>& member_calibration_scores,
                              const std::vector<double>& test_scores,
                              const std::vector<bool>& test_labels);

struct ScoreSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct AttackResult {
    std::string mode;                   // whitebox | blackbox
    double f1 = 0.0;                    // whitebox: oracle threshold;
                                        // blackbox: attacker-estimated threshold
    double auc = 0.5;
    std::vector<RocPoint> roc;
    double threshold = 0.5;
    std::optional<double> f1_oracle;    // full-training-mean threshold variant (blackbox)
    bool degenerate_f1 = false;
    bool rescaled_scores = false;       // Wasserstein-mode min-max rescale applied
    ScoreSummary member_scores;
    ScoreSummary nonmember_scores;
    std::size_t n_members = 0;
    std::size_t n_nonmembers = 0;
};

// d(x)/b for every example of a batch. For bounded (sigmoid) discriminators
// this is the raw score; unbounded ones are min-max rescaled over the
// attacker-visible pool — a monotone map, so AUC is untouched and only the
// F1 convention depends on it (flagged in the result).
struct ScoredTestSet {
    std::vector<double> scores;       // members first, then nonmembers
    std::vector<bool> labels;
    std::vector<double> member_scores;
    std::vector<double> nonmember_scores;
    bool rescaled = false;
    double fit_lo = 0.0;              // min-max fit over the visible pool
    double fit_hi = 1.0;

    // Maps a raw d(x)/b value through the same transform the test scores
    // saw, so calibration thresholds stay comparable.
    double map(double raw) const;
};

ScoredTestSet whitebox_scores(const gan::Discriminator& d, const AttackTestSet& testset);

// Single-example convenience used by tests; requires a verified bound.
double whitebox_score(const gan::Discriminator& d, const engine::Tensor& x, double b);

// Full white-box attack: scores the test set with the target discriminator,
// thresholds at the training-set mean (oracle knowledge per the threat
// model), computes F1 / AUC / ROC.
AttackResult whitebox_attack(const gan::Discriminator& d, const AttackTestSet& testset,
                             const data::Dataset& train_split);

struct ShadowConfig {
    double aux_fraction = 0.3;          // attacker's share of both splits
    gan::TrainConfig shadow_train;      // mirrors the target's strategy
    bool use_target_samples = true;     // mix target generator output into shadow fakes
};

// Black-box attack: trains a shadow GAN on the auxiliary member images (and
// optionally target generator samples as extra fakes), then runs the
// white-box procedure with the shadow discriminator over the non-auxiliary
// remainder. The shadow pipeline never touches the target discriminator or
// non-auxiliary examples.
AttackResult blackbox_attack(const ShadowConfig& config, const gan::Generator& target_g,
                             const data::Dataset& train_split,
                             const data::Dataset& holdout_split, engine::RngStream& rng);

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& roc);

}  // namespace ganlab::attack
