#include "ganlab/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "ganlab/errors.hpp"

namespace ganlab::attack {

using data::Dataset;
using engine::RngStream;
using engine::Tensor;

AttackTestSet build_attack_testset(const Dataset& train_split, const Dataset& holdout_split) {
    if (train_split.empty() || holdout_split.empty()) {
        throw ConfigError("attack testset: both splits must be nonempty");
    }
    if (train_split.shares_storage(holdout_split)) {
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < train_split.size(); ++i) {
            seen.insert(train_split.storage_index(i));
        }
        for (std::size_t i = 0; i < holdout_split.size(); ++i) {
            if (seen.count(holdout_split.storage_index(i))) {
                throw ConfigError("attack testset: splits overlap");
            }
        }
    }
    AttackTestSet t;
    t.members = train_split;
    t.nonmembers = holdout_split;
    t.provenance = train_split.source_tag();
    return t;
}

int attack_decide(double score, double t) { return score >= t ? 1 : 0; }

AucResult compute_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw ConfigError("auc: scores and labels must match and be nonempty");
    }
    std::size_t n_pos = 0, n_neg = 0;
    for (bool b : labels) (b ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0) {
        throw ConfigError("auc: both classes must be present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    AucResult r;
    r.roc.push_back(RocPoint{0.0, 0.0});
    double auc = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // group ties: one ROC vertex per distinct score
        std::size_t j = i;
        std::size_t dtp = 0, dfp = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] ? dtp : dfp) += 1;
            ++j;
        }
        const double tpr0 = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double fpr0 = static_cast<double>(fp) / static_cast<double>(n_neg);
        tp += dtp;
        fp += dfp;
        const double tpr1 = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double fpr1 = static_cast<double>(fp) / static_cast<double>(n_neg);
        auc += (fpr1 - fpr0) * (tpr0 + tpr1) / 2.0;  // trapezoid through the tie block
        r.roc.push_back(RocPoint{fpr1, tpr1});
        i = j;
    }
    r.auc = auc;
    return r;
}

F1Result f1_at_mean_threshold(const std::vector<double>& member_calibration_scores,
                              const std::vector<double>& test_scores,
                              const std::vector<bool>& test_labels) {
    if (member_calibration_scores.empty()) {
        throw ConfigError("f1: member calibration scores must be nonempty");
    }
    if (test_scores.size() != test_labels.size() || test_scores.empty()) {
        throw ConfigError("f1: test scores and labels must match and be nonempty");
    }
    F1Result r;
    double sum = 0.0;
    for (double s : member_calibration_scores) sum += s;
    r.threshold = sum / static_cast<double>(member_calibration_scores.size());

    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < test_scores.size(); ++i) {
        const int pred = attack_decide(test_scores[i], r.threshold);
        if (pred == 1 && test_labels[i]) ++tp;
        if (pred == 1 && !test_labels[i]) ++fp;
        if (pred == 0 && test_labels[i]) ++fn;
    }
    if (tp + fp == 0) {
        r.degenerate = true;
        r.f1 = 0.0;
        return r;
    }
    r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    r.recall = (tp + fn == 0) ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    r.f1 = (r.precision + r.recall == 0.0)
               ? 0.0
               : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

namespace {

ScoreSummary summarize(const std::vector<double>& xs) {
    ScoreSummary s;
    if (xs.empty()) return s;
    s.min = s.max = xs[0];
    double sum = 0.0, sum2 = 0.0;
    for (double x : xs) {
        sum += x;
        sum2 += x * x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    const double n = static_cast<double>(xs.size());
    s.mean = sum / n;
    s.stddev = std::sqrt(std::max(0.0, sum2 / n - s.mean * s.mean));
    return s;
}

std::vector<double> raw_scores(const gan::Discriminator& d, const Dataset& ds) {
    if (ds.empty()) return {};
    std::vector<double> s = d.scores(ds.all());
    return s;
}

}  // namespace

double ScoredTestSet::map(double raw) const {
    if (!rescaled) return raw;
    const double span = fit_hi - fit_lo;
    return span > 0.0 ? (raw - fit_lo) / span : 0.5;
}

double whitebox_score(const gan::Discriminator& d, const Tensor& x, double b) {
    if (!(b > 0.0)) throw ConfigError("whitebox_score: bound must be positive");
    const double s = d.score(x) / b;
    if (d.has_sigmoid() && (s < 0.0 || s > 1.0)) {
        throw DomainError("whitebox_score: bounded score escaped [0, 1]");
    }
    return s;
}

ScoredTestSet whitebox_scores(const gan::Discriminator& d, const AttackTestSet& testset) {
    ScoredTestSet out;
    const double b = d.output_bound();
    out.member_scores = raw_scores(d, testset.members);
    out.nonmember_scores = raw_scores(d, testset.nonmembers);
    for (double& s : out.member_scores) s /= b;
    for (double& s : out.nonmember_scores) s /= b;

    if (!d.bound_verified()) {
        // Unbounded head: min-max over the attacker-visible pool. Monotone,
        // so ranking metrics are unchanged.
        double lo = out.member_scores[0], hi = out.member_scores[0];
        for (double s : out.member_scores) { lo = std::min(lo, s); hi = std::max(hi, s); }
        for (double s : out.nonmember_scores) { lo = std::min(lo, s); hi = std::max(hi, s); }
        out.fit_lo = lo;
        out.fit_hi = hi;
        out.rescaled = true;
        for (double& s : out.member_scores) s = out.map(s);
        for (double& s : out.nonmember_scores) s = out.map(s);
    }

    out.scores = out.member_scores;
    out.scores.insert(out.scores.end(), out.nonmember_scores.begin(),
                      out.nonmember_scores.end());
    out.labels.assign(out.member_scores.size(), true);
    out.labels.insert(out.labels.end(), out.nonmember_scores.size(), false);
    return out;
}

AttackResult whitebox_attack(const gan::Discriminator& d, const AttackTestSet& testset,
                             const Dataset& train_split) {
    ScoredTestSet scored = whitebox_scores(d, testset);

    // Oracle calibration: mean d(x)/b over the full training dataset,
    // mapped through the same rescale the test scores saw.
    std::vector<double> calibration = raw_scores(d, train_split);
    for (double& s : calibration) s = scored.map(s / d.output_bound());

    AttackResult r;
    r.mode = "whitebox";
    F1Result f1 = f1_at_mean_threshold(calibration, scored.scores, scored.labels);
    AucResult auc = compute_auc(scored.scores, scored.labels);
    r.f1 = f1.f1;
    r.threshold = f1.threshold;
    r.degenerate_f1 = f1.degenerate;
    r.auc = auc.auc;
    r.roc = std::move(auc.roc);
    r.rescaled_scores = scored.rescaled;
    r.member_scores = summarize(scored.member_scores);
    r.nonmember_scores = summarize(scored.nonmember_scores);
    r.n_members = testset.members.size();
    r.n_nonmembers = testset.nonmembers.size();
    return r;
}

AttackResult blackbox_attack(const ShadowConfig& config, const gan::Generator& target_g,
                             const Dataset& train_split, const Dataset& holdout_split,
                             RngStream& rng) {
    if (!(config.aux_fraction > 0.0 && config.aux_fraction < 1.0)) {
        throw ConfigError("blackbox: aux fraction must lie in (0, 1)");
    }
    const auto n_aux_members =
        static_cast<std::size_t>(config.aux_fraction * static_cast<double>(train_split.size()));
    const auto n_aux_nonmembers = static_cast<std::size_t>(
        config.aux_fraction * static_cast<double>(holdout_split.size()));
    if (n_aux_members < config.shadow_train.batch) {
        throw ConfigError("blackbox: auxiliary member set smaller than shadow batch size");
    }

    // Deterministic auxiliary selection.
    RngStream aux_rng = rng.child("aux-select");
    auto pick = [&](const Dataset& ds, std::size_t n, const std::string& tag) {
        std::vector<std::size_t> order(ds.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[aux_rng.uniform_index(i)]);
        }
        std::vector<std::size_t> head(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<std::size_t> tail(order.begin() + static_cast<std::ptrdiff_t>(n), order.end());
        return std::make_pair(ds.subset(std::move(head), tag + "-aux"),
                              ds.subset(std::move(tail), tag + "-rest"));
    };
    auto [aux_members, rest_members] = pick(train_split, n_aux_members, "member");
    auto [aux_nonmembers, rest_nonmembers] = pick(holdout_split, n_aux_nonmembers, "nonmember");

    // Shadow GAN on auxiliary members only. Target generator samples can be
    // mixed into the fake stream to imitate the target's training pressure;
    // the target discriminator is never touched.
    gan::TrainConfig shadow_cfg = config.shadow_train;
    shadow_cfg.seed = rng.child("shadow-seed").next_u64();
    if (config.use_target_samples) {
        shadow_cfg.extra_fake_sampler = [&target_g](std::size_t n, RngStream& r) {
            return target_g.sample(n, r);
        };
    }
    gan::TrainResult shadow = gan::train(shadow_cfg, aux_members, aux_nonmembers);

    AttackTestSet remainder = build_attack_testset(rest_members, rest_nonmembers);
    ScoredTestSet scored = whitebox_scores(shadow.d, remainder);

    // Attacker-estimated threshold: mean shadow score over auxiliary
    // members. Oracle threshold: mean over the full original training set.
    std::vector<double> attacker_cal = shadow.d.scores(aux_members.all());
    std::vector<double> oracle_cal = shadow.d.scores(train_split.all());
    for (double& s : attacker_cal) s = scored.map(s / shadow.d.output_bound());
    for (double& s : oracle_cal) s = scored.map(s / shadow.d.output_bound());

    AttackResult r;
    r.mode = "blackbox";
    F1Result f1_attacker = f1_at_mean_threshold(attacker_cal, scored.scores, scored.labels);
    F1Result f1_oracle = f1_at_mean_threshold(oracle_cal, scored.scores, scored.labels);
    AucResult auc = compute_auc(scored.scores, scored.labels);
    r.f1 = f1_attacker.f1;
    r.f1_oracle = f1_oracle.f1;
    r.threshold = f1_attacker.threshold;
    r.degenerate_f1 = f1_attacker.degenerate;
    r.auc = auc.auc;
    r.roc = std::move(auc.roc);
    r.rescaled_scores = scored.rescaled;
    r.member_scores = summarize(scored.member_scores);
    r.nonmember_scores = summarize(scored.nonmember_scores);
    r.n_members = remainder.members.size();
    r.n_nonmembers = remainder.nonmembers.size();
    return r;
}

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& roc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write roc csv: " + path);
    out << "fpr,tpr\n";
    out.precision(17);
    for (const RocPoint& p : roc) out << p.fpr << "," << p.tpr << "\n";
}

}  // namespace ganlab::attack
