#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ganlab/rng.hpp"
#include "ganlab/tensor.hpp"

namespace ganlab::data {

// Immutable collection of uniformly shaped examples, normalized to [-1, 1].
// Views (subset / split) share the underlying storage and its per-example
// access counters, so a test can verify which examples a pipeline touched.
class Dataset {
public:
    Dataset() = default;

    static Dataset from_examples(std::vector<engine::Tensor> examples, std::size_t channels,
                                 std::string source_tag);
    static Dataset from_examples(std::vector<engine::Tensor> examples, std::vector<int> labels,
                                 std::size_t channels, std::string source_tag);

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    std::size_t dim() const;                       // flattened example length
    const engine::Shape& example_shape() const;
    std::size_t channels() const;
    const std::string& source_tag() const;

    // Instrumented access: bumps the storage-level counter for the example.
    const engine::Tensor& example(std::size_t i) const;
    std::optional<int> label(std::size_t i) const;

    // [n, dim] matrix of the listed examples (flattened rows).
    engine::Tensor batch(const std::vector<std::size_t>& rows) const;
    engine::Tensor all() const;
    // Random batch of `n` rows drawn with replacement.
    engine::Tensor sample_batch(std::size_t n, engine::RngStream& rng) const;

    Dataset subset(std::vector<std::size_t> rows, std::string tag) const;
    // First `n` examples of this view.
    Dataset take(std::size_t n, std::string tag) const;
    // Identity of the underlying example in shared storage (for overlap and
    // isolation checks across views).
    std::size_t storage_index(std::size_t i) const { return indices_.at(i); }
    bool shares_storage(const Dataset& other) const { return storage_ == other.storage_; }

    std::uint64_t access_count(std::size_t i) const;   // by view position
    std::uint64_t total_accesses() const;              // whole storage
    void reset_access_counts() const;

private:
    struct Storage {
        std::vector<engine::Tensor> examples;
        std::vector<int> labels;  // empty when unlabeled
        std::size_t channels = 1;
        std::string source;
        mutable std::vector<std::uint64_t> access;
    };
    std::shared_ptr<const Storage> storage_;
    std::vector<std::size_t> indices_;
    std::string tag_;
};

// Disjoint, exhaustive partition of one dataset.
struct SplitPair {
    Dataset train;
    Dataset holdout;
};

// Seed-reproducible random split; `fraction` of examples go to train.
SplitPair split_train_holdout(const Dataset& dataset, double fraction, engine::RngStream& rng);

// One "<index-or-path>\t<train|holdout>" line per example, so attack splits
// stay auditable.
void write_manifest(const std::string& path, const SplitPair& split);

// ---- synthetic sources -------------------------------------------------

struct GaussianRingConfig {
    std::size_t n_modes = 8;
    double radius = 2.0;
    double stddev = 0.25;
    std::size_t samples = 512;
};

// Mixture of n_modes isotropic Gaussians equally spaced on a circle,
// rescaled into [-1,1] (values past the range are clamped; the clamp mass
// is below 1e-4 per sample at the default geometry). Mode index is stored
// as the example label.
Dataset synth_gaussian_ring(const GaussianRingConfig& config, engine::RngStream& rng);

// Mode centers after the [-1,1] rescale, as [n_modes] pairs.
std::vector<std::pair<double, double>> ring_mode_centers(const GaussianRingConfig& config);
// The rescale factor applied to raw ring samples.
double ring_scale(const GaussianRingConfig& config);

struct PatternConfig {
    std::size_t n_classes = 4;   // <= 6
    std::size_t side = 8;
    std::size_t samples = 512;
    double jitter = 0.25;        // additive noise stddev before clamping
};

// Labeled 8x8 grayscale pattern images (stripes, checkerboard, blob, ...)
// with per-sample amplitude and noise jitter; values in [-1, 1].
Dataset synth_patterns(const PatternConfig& config, engine::RngStream& rng);

}  // namespace ganlab::data
