#pragma once

#include <vector>

#include "ganlab/dataset.hpp"
#include "ganlab/nets.hpp"

namespace ganlab::data {

// |heldout - train| plus the raw signed difference, both losses computed
// under the same measuring function and discriminator.
struct LossGap {
    double absolute = 0.0;
    double signed_diff = 0.0;  // heldout - train
};

LossGap gap_from_losses(double train_loss, double heldout_loss);

// Population standard deviation per channel over all pixels of all
// examples, computed on the [0,1] scale.
std::vector<double> channel_stddev(const Dataset& dataset);

// Small frozen softmax classifier over the dataset's label classes; the
// desk-scale stand-in for a pretrained scoring network. Not comparable to
// inception-based magnitudes and not intended to be.
class ScoreClassifier {
public:
    ScoreClassifier() = default;

    // Trains on a labeled dataset (one pass interface; the instance is
    // frozen afterwards).
    static ScoreClassifier fit(const Dataset& labeled, std::size_t n_classes,
                               std::size_t iterations, engine::RngStream& rng);

    std::size_t n_classes() const { return n_classes_; }

    // p(y|x) rows for a [n, dim] batch; each row is nonnegative and sums
    // to 1 within 1e-9.
    engine::Tensor predict_probs(const engine::Tensor& batch) const;

    double accuracy(const Dataset& labeled) const;

private:
    gan::Mlp net_;
    std::size_t n_classes_ = 0;
};

// exp(mean_x KL(p(y|x) || p_bar)) for rows of conditional probabilities;
// p_bar is their mean. Lies in [1, C].
double score_from_probs(const engine::Tensor& probs);

// Convenience: classifier score of generated samples.
double classifier_score(const engine::Tensor& samples, const ScoreClassifier& clf);

}  // namespace ganlab::data
