#include "ganlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ganlab/errors.hpp"

namespace ganlab::data {

using engine::RngStream;
using engine::Shape;
using engine::Tensor;

Dataset Dataset::from_examples(std::vector<Tensor> examples, std::size_t channels,
                               std::string source_tag) {
    return from_examples(std::move(examples), {}, channels, std::move(source_tag));
}

Dataset Dataset::from_examples(std::vector<Tensor> examples, std::vector<int> labels,
                               std::size_t channels, std::string source_tag) {
    if (examples.empty()) throw ConfigError("dataset: no examples");
    if (!labels.empty() && labels.size() != examples.size()) {
        throw ConfigError("dataset: label count mismatch");
    }
    const Shape& shape = examples.front().shape();
    for (const Tensor& e : examples) {
        if (e.shape() != shape) {
            throw ShapeError("dataset: examples must share one shape");
        }
        for (std::size_t i = 0; i < e.numel(); ++i) {
            if (e[i] < -1.0 || e[i] > 1.0) {
                throw DomainError("dataset: example values must lie in [-1, 1]");
            }
        }
    }
    auto storage = std::make_shared<Storage>();
    storage->examples = std::move(examples);
    storage->labels = std::move(labels);
    storage->channels = channels;
    storage->source = source_tag;  // tag copied; the view keeps its own
    storage->access.assign(storage->examples.size(), 0);

    Dataset d;
    d.storage_ = std::move(storage);
    d.indices_.resize(d.storage_->examples.size());
    std::iota(d.indices_.begin(), d.indices_.end(), std::size_t{0});
    d.tag_ = std::move(source_tag);
    return d;
}

std::size_t Dataset::dim() const { return example_shape().empty() ? 0 : storage_->examples.front().numel(); }

const Shape& Dataset::example_shape() const {
    if (!storage_ || storage_->examples.empty()) {
        static const Shape kEmpty;
        return kEmpty;
    }
    return storage_->examples.front().shape();
}

std::size_t Dataset::channels() const { return storage_ ? storage_->channels : 0; }

const std::string& Dataset::source_tag() const {
    static const std::string kNone = "empty";
    return storage_ ? storage_->source : kNone;
}

const Tensor& Dataset::example(std::size_t i) const {
    const std::size_t s = indices_.at(i);
    ++storage_->access[s];
    return storage_->examples[s];
}

std::optional<int> Dataset::label(std::size_t i) const {
    if (!storage_ || storage_->labels.empty()) return std::nullopt;
    return storage_->labels[indices_.at(i)];
}

Tensor Dataset::batch(const std::vector<std::size_t>& rows) const {
    if (rows.empty()) throw ConfigError("dataset batch: no rows requested");
    const std::size_t d = dim();
    Tensor out(Shape{rows.size(), d});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Tensor& e = example(rows[r]);
        for (std::size_t j = 0; j < d; ++j) out.at(r, j) = e[j];
    }
    return out;
}

Tensor Dataset::all() const {
    std::vector<std::size_t> rows(size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return batch(rows);
}

Tensor Dataset::sample_batch(std::size_t n, RngStream& rng) const {
    if (n == 0) throw ConfigError("dataset sample_batch: n must be >= 1");
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = rng.uniform_index(size());
    return batch(rows);
}

Dataset Dataset::subset(std::vector<std::size_t> rows, std::string tag) const {
    Dataset d;
    d.storage_ = storage_;
    d.indices_.reserve(rows.size());
    for (std::size_t r : rows) d.indices_.push_back(indices_.at(r));
    d.tag_ = std::move(tag);
    return d;
}

Dataset Dataset::take(std::size_t n, std::string tag) const {
    if (n > size()) throw ConfigError("dataset take: not enough examples");
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return subset(std::move(rows), std::move(tag));
}

std::uint64_t Dataset::access_count(std::size_t i) const {
    return storage_->access[indices_.at(i)];
}

std::uint64_t Dataset::total_accesses() const {
    std::uint64_t t = 0;
    for (std::uint64_t a : storage_->access) t += a;
    return t;
}

void Dataset::reset_access_counts() const {
    std::fill(storage_->access.begin(), storage_->access.end(), 0);
}

SplitPair split_train_holdout(const Dataset& dataset, double fraction, RngStream& rng) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("split: fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = dataset.size();
    const std::size_t n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (n_train < 1 || n_train >= n) {
        throw ConfigError("split: a side would be smaller than one example");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the deterministic stream
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<std::size_t> train_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> holdout_rows(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return SplitPair{dataset.subset(std::move(train_rows), "train"),
                     dataset.subset(std::move(holdout_rows), "holdout")};
}

void write_manifest(const std::string& path, const SplitPair& split) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest: " + path);
    for (std::size_t i = 0; i < split.train.size(); ++i) {
        out << split.train.storage_index(i) << "\ttrain\n";
    }
    for (std::size_t i = 0; i < split.holdout.size(); ++i) {
        out << split.holdout.storage_index(i) << "\tholdout\n";
    }
}

double ring_scale(const GaussianRingConfig& config) {
    return 1.0 / (config.radius + 4.0 * config.stddev);
}

std::vector<std::pair<double, double>> ring_mode_centers(const GaussianRingConfig& config) {
    const double s = ring_scale(config);
    std::vector<std::pair<double, double>> centers;
    centers.reserve(config.n_modes);
    for (std::size_t k = 0; k < config.n_modes; ++k) {
        const double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(config.n_modes);
        centers.emplace_back(s * config.radius * std::cos(angle),
                             s * config.radius * std::sin(angle));
    }
    return centers;
}

Dataset synth_gaussian_ring(const GaussianRingConfig& config, RngStream& rng) {
    if (config.n_modes < 1) throw ConfigError("ring: n_modes must be >= 1");
    if (!(config.stddev > 0.0)) throw ConfigError("ring: stddev must be > 0");
    if (config.samples < 1) throw ConfigError("ring: samples must be >= 1");
    const double s = ring_scale(config);
    std::vector<Tensor> examples;
    std::vector<int> labels;
    examples.reserve(config.samples);
    labels.reserve(config.samples);
    for (std::size_t i = 0; i < config.samples; ++i) {
        const std::size_t mode = rng.uniform_index(config.n_modes);
        const double angle = 2.0 * M_PI * static_cast<double>(mode) / static_cast<double>(config.n_modes);
        double x = config.radius * std::cos(angle) + rng.normal(0.0, config.stddev);
        double y = config.radius * std::sin(angle) + rng.normal(0.0, config.stddev);
        x *= s;
        y *= s;
        x = std::clamp(x, -1.0, 1.0);
        y = std::clamp(y, -1.0, 1.0);
        examples.push_back(Tensor(Shape{2}, std::vector<double>{x, y}));
        labels.push_back(static_cast<int>(mode));
    }
    return Dataset::from_examples(std::move(examples), std::move(labels), 1, "ring");
}

namespace {

double pattern_pixel(std::size_t cls, std::size_t r, std::size_t c, std::size_t side,
                     std::size_t phase) {
    switch (cls % 6) {
        case 0:  // horizontal stripes, period 4
            return ((r + phase) / 2) % 2 == 0 ? 1.0 : -1.0;
        case 1:  // vertical stripes
            return ((c + phase) / 2) % 2 == 0 ? 1.0 : -1.0;
        case 2:  // checkerboard
            return ((r + c + phase) % 2 == 0) ? 1.0 : -1.0;
        case 3: {  // center blob
            const double cr = (static_cast<double>(side) - 1.0) / 2.0;
            const double dr = static_cast<double>(r) - cr;
            const double dc = static_cast<double>(c) - cr;
            const double d2 = (dr * dr + dc * dc) / (cr * cr);
            return std::clamp(1.0 - d2, -1.0, 1.0);
        }
        case 4:  // diagonal gradient
            return 2.0 * static_cast<double>(r + c) / (2.0 * static_cast<double>(side - 1)) - 1.0;
        default:  // diagonal stripes
            return (((r + side - c) + phase) / 2) % 2 == 0 ? 1.0 : -1.0;
    }
}

}  // namespace

Dataset synth_patterns(const PatternConfig& config, RngStream& rng) {
    if (config.n_classes < 1 || config.n_classes > 6) {
        throw ConfigError("patterns: n_classes must be in [1, 6]");
    }
    if (config.side < 2) throw ConfigError("patterns: side must be >= 2");
    std::vector<Tensor> examples;
    std::vector<int> labels;
    examples.reserve(config.samples);
    labels.reserve(config.samples);
    for (std::size_t i = 0; i < config.samples; ++i) {
        const std::size_t cls = rng.uniform_index(config.n_classes);
        const std::size_t phase = rng.uniform_index(4);
        const double amp = rng.uniform(0.6, 1.0);
        Tensor img(Shape{config.side, config.side});
        for (std::size_t r = 0; r < config.side; ++r) {
            for (std::size_t c = 0; c < config.side; ++c) {
                double v = amp * pattern_pixel(cls, r, c, config.side, phase);
                v += rng.normal(0.0, config.jitter);
                img.at(r, c) = std::clamp(v, -1.0, 1.0);
            }
        }
        examples.push_back(std::move(img));
        labels.push_back(static_cast<int>(cls));
    }
    return Dataset::from_examples(std::move(examples), std::move(labels), 1, "patterns");
}

}  // namespace ganlab::data
