#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ganlab/adam.hpp"
#include "ganlab/regularizer.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/tape.hpp"

namespace ganlab::gan {

inline constexpr double kLeakySlope = 0.2;      // DCGAN convention
inline constexpr double kInitStddev = 0.02;     // weight init N(0, 0.02)

enum class FinalActivation { None, Sigmoid, Tanh };

// Fully connected stack: affine + leaky rectifier on hidden layers, affine +
// configurable activation on the head. Parameters live in a flat vector so
// optimizers can update them in place.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::size_t in_dim, const std::vector<std::size_t>& hidden, std::size_t out_dim,
        FinalActivation final_act, engine::RngStream& rng, const std::string& name_prefix);

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    std::size_t n_layers() const { return layers_.size(); }

    std::vector<engine::Parameter>& params() { return params_; }
    const std::vector<engine::Parameter>& params() const { return params_; }

    // Records the forward pass for a [batch, in_dim] input. When `reg` is a
    // reparameterizing kind, each weight matrix is replaced by its effective
    // form; spectral power-iteration state advances only when update_state
    // is set (one round per training step). When param_leaves is given, the
    // raw parameter leaf Vars are appended in params() order so callers can
    // take gradients with respect to them.
    engine::Var forward(engine::Tape& tape, engine::Var x,
                        const lipschitz::RegularizerSpec& reg, bool update_state,
                        engine::RngStream& rng,
                        std::vector<engine::Var>* param_leaves = nullptr) const;

    // Plain forward with no regularizer (classifier / generator use).
    engine::Var forward(engine::Tape& tape, engine::Var x,
                        std::vector<engine::Var>* param_leaves = nullptr) const;

    // Effective (forward-pass) weight matrices under `reg`, without
    // advancing spectral state. Index order matches layer order.
    std::vector<engine::Tensor> effective_weights(const lipschitz::RegularizerSpec& reg,
                                                  engine::RngStream& rng) const;

    double max_abs_param() const;

    // Spectral power-iteration state, one slot per layer.
    std::vector<lipschitz::PowerIterState>& spectral_state() const { return spectral_state_; }

private:
    struct Layer {
        std::size_t w_index;  // into params_
        std::size_t b_index;
        bool hidden;          // leaky rectifier applied
    };

    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
    FinalActivation final_act_ = FinalActivation::None;
    std::vector<engine::Parameter> params_;
    std::vector<Layer> layers_;
    mutable std::vector<lipschitz::PowerIterState> spectral_state_;
};

// Noise source for the generator; i.i.d. across draws and independent of
// the training data.
struct NoisePrior {
    enum class Kind { StandardNormal, Uniform };
    Kind kind = Kind::StandardNormal;
    std::size_t dim = 64;

    engine::Tensor sample(std::size_t n, engine::RngStream& rng) const;  // [n, dim]
};

// d(x; theta_d): scalar head. With a sigmoid head the output lies in (0,1)
// and the declared bound b = 1 is valid; without one (Wasserstein mode) the
// bound is unverified and attack scoring rescales empirically.
class Discriminator {
public:
    Discriminator() = default;
    Discriminator(std::size_t in_dim, const std::vector<std::size_t>& hidden, bool with_sigmoid,
                  engine::RngStream& rng);

    bool has_sigmoid() const { return with_sigmoid_; }
    double output_bound() const { return output_bound_; }
    bool bound_verified() const { return with_sigmoid_; }
    std::size_t in_dim() const { return net_.in_dim(); }

    std::vector<engine::Parameter>& params() { return net_.params(); }
    const std::vector<engine::Parameter>& params() const { return net_.params(); }
    const Mlp& net() const { return net_; }

    lipschitz::RegularizerSpec& regularizer() { return reg_; }
    const lipschitz::RegularizerSpec& regularizer() const { return reg_; }

    // [batch, in_dim] -> [batch, 1] discriminator outputs (sigmoid applied
    // when configured). Training steps set update_state.
    engine::Var forward(engine::Tape& tape, engine::Var x, bool update_state,
                        engine::RngStream& rng,
                        std::vector<engine::Var>* param_leaves = nullptr) const;

    // Evaluation-mode scores d(x) for a batch; no state updates.
    std::vector<double> scores(const engine::Tensor& batch) const;
    double score(const engine::Tensor& example) const;

    std::vector<engine::Tensor> effective_weights() const;
    double max_abs_param() const { return net_.max_abs_param(); }

private:
    Mlp net_;
    bool with_sigmoid_ = true;
    double output_bound_ = 1.0;
    lipschitz::RegularizerSpec reg_;
    mutable engine::RngStream state_rng_{0x5eed};  // spectral u init only
};

// g(z; theta_g): tanh head keeps outputs in [-1, 1].
class Generator {
public:
    Generator() = default;
    Generator(NoisePrior prior, const std::vector<std::size_t>& hidden, std::size_t out_dim,
              engine::RngStream& rng);

    const NoisePrior& prior() const { return prior_; }
    std::size_t out_dim() const { return net_.out_dim(); }

    std::vector<engine::Parameter>& params() { return net_.params(); }
    const std::vector<engine::Parameter>& params() const { return net_.params(); }

    engine::Var forward(engine::Tape& tape, engine::Var z,
                        std::vector<engine::Var>* param_leaves = nullptr) const;

    // n i.i.d. draws g(z), z ~ prior; [n, out_dim].
    engine::Tensor sample(std::size_t n, engine::RngStream& rng) const;

private:
    NoisePrior prior_;
    Mlp net_;
};

}  // namespace ganlab::gan
