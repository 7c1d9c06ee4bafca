#include "ganlab/metrics.hpp"

#include <cmath>

#include "ganlab/adam.hpp"
#include "ganlab/errors.hpp"

namespace ganlab::data {

using engine::Shape;
using engine::Tape;
using engine::Tensor;
using engine::Var;

LossGap gap_from_losses(double train_loss, double heldout_loss) {
    LossGap g;
    g.signed_diff = heldout_loss - train_loss;
    g.absolute = std::abs(g.signed_diff);
    return g;
}

std::vector<double> channel_stddev(const Dataset& dataset) {
    if (dataset.empty()) throw ConfigError("channel_stddev: empty dataset");
    const std::size_t channels = dataset.channels();
    const std::size_t per_channel = dataset.dim() / channels;
    std::vector<double> sum(channels, 0.0), sum2(channels, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Tensor& e = dataset.example(i);
        for (std::size_t c = 0; c < channels; ++c) {
            for (std::size_t j = 0; j < per_channel; ++j) {
                const double v01 = (e[c * per_channel + j] + 1.0) / 2.0;
                sum[c] += v01;
                sum2[c] += v01 * v01;
            }
        }
        ++count;
    }
    const double n = static_cast<double>(count * per_channel);
    std::vector<double> stddev(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        const double mean = sum[c] / n;
        const double var = std::max(0.0, sum2[c] / n - mean * mean);
        stddev[c] = std::sqrt(var);
    }
    return stddev;
}

namespace {

// Row-wise log-softmax; the max shift enters as a constant so gradients
// match the unshifted expression.
Var log_softmax_rows(Tape& tape, Var logits) {
    using namespace engine;
    const Tensor& v = tape.value(logits);
    Tensor shift(v.shape());
    for (std::size_t i = 0; i < v.rows(); ++i) {
        double mx = v.at(i, 0);
        for (std::size_t j = 1; j < v.cols(); ++j) mx = std::max(mx, v.at(i, j));
        for (std::size_t j = 0; j < v.cols(); ++j) shift.at(i, j) = mx;
    }
    Var shifted = sub(logits, tape.constant(std::move(shift)));
    Var lse = log_(row_sum(exp_(shifted)));               // [n,1]
    return sub(shifted, broadcast_cols(lse, v.cols()));
}

}  // namespace

ScoreClassifier ScoreClassifier::fit(const Dataset& labeled, std::size_t n_classes,
                                     std::size_t iterations, engine::RngStream& rng) {
    if (labeled.empty()) throw ConfigError("classifier: empty dataset");
    if (!labeled.label(0).has_value()) throw ConfigError("classifier: dataset has no labels");

    ScoreClassifier clf;
    clf.n_classes_ = n_classes;
    clf.net_ = gan::Mlp(labeled.dim(), {32}, n_classes, gan::FinalActivation::None, rng, "clf");

    engine::AdamState opt;
    engine::AdamConfig adam;
    adam.lr = 5e-3;
    const std::size_t batch = std::min<std::size_t>(64, labeled.size());
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<std::size_t> rows(batch);
        for (std::size_t i = 0; i < batch; ++i) rows[i] = rng.uniform_index(labeled.size());
        Tensor x = labeled.batch(rows);
        Tensor onehot(Shape{batch, n_classes});
        for (std::size_t i = 0; i < batch; ++i) {
            onehot.at(i, static_cast<std::size_t>(*labeled.label(rows[i]))) = 1.0;
        }
        Tape tape;
        std::vector<Var> leaves;
        Var logits = clf.net_.forward(tape, tape.leaf(x), &leaves);
        Var logp = log_softmax_rows(tape, logits);
        Var loss = engine::neg(engine::mean(engine::row_sum(
            engine::mul(tape.constant(std::move(onehot)), logp))));
        std::vector<Tensor> grads = tape.backward(loss, leaves);
        opt.step(clf.net_.params(), grads, adam);
    }
    return clf;
}

Tensor ScoreClassifier::predict_probs(const Tensor& batch) const {
    Tape tape;
    Var logits = net_.forward(tape, tape.leaf(batch));
    Var logp = log_softmax_rows(tape, logits);
    Tensor lp = tape.value(logp);
    Tensor probs(lp.shape());
    for (std::size_t i = 0; i < lp.numel(); ++i) probs[i] = std::exp(lp[i]);
    // renormalize rows against rounding drift
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < probs.cols(); ++j) s += probs.at(i, j);
        for (std::size_t j = 0; j < probs.cols(); ++j) probs.at(i, j) /= s;
    }
    return probs;
}

double ScoreClassifier::accuracy(const Dataset& labeled) const {
    Tensor probs = predict_probs(labeled.all());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        std::size_t arg = 0;
        for (std::size_t j = 1; j < probs.cols(); ++j) {
            if (probs.at(i, j) > probs.at(i, arg)) arg = j;
        }
        if (static_cast<int>(arg) == *labeled.label(i)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(labeled.size());
}

double score_from_probs(const Tensor& probs) {
    if (probs.ndim() != 2 || probs.rows() == 0) {
        throw ShapeError("score_from_probs: expected nonempty [n, C] rows");
    }
    const std::size_t n = probs.rows(), c = probs.cols();
    std::vector<double> marginal(c, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) marginal[j] += probs.at(i, j) / static_cast<double>(n);
    double mean_kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double kl = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            const double p = probs.at(i, j);
            if (p > 0.0) kl += p * std::log(p / marginal[j]);
        }
        mean_kl += kl / static_cast<double>(n);
    }
    return std::exp(mean_kl);
}

double classifier_score(const Tensor& samples, const ScoreClassifier& clf) {
    if (samples.rows() == 0) throw ConfigError("classifier_score: empty sample set");
    return score_from_probs(clf.predict_probs(samples));
}

}  // namespace ganlab::data
