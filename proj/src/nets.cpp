#include "ganlab/nets.hpp"

#include "ganlab/errors.hpp"

namespace ganlab::gan {

using engine::Parameter;
using engine::ParamRole;
using engine::Shape;
using engine::Tape;
using engine::Tensor;
using engine::Var;
using lipschitz::RegularizerSpec;

Mlp::Mlp(std::size_t in_dim, const std::vector<std::size_t>& hidden, std::size_t out_dim,
         FinalActivation final_act, engine::RngStream& rng, const std::string& name_prefix)
    : in_dim_(in_dim), out_dim_(out_dim), final_act_(final_act) {
    if (in_dim == 0 || out_dim == 0) throw ConfigError("mlp: zero layer width");
    std::vector<std::size_t> widths;
    widths.push_back(in_dim);
    for (std::size_t h : hidden) {
        if (h == 0) throw ConfigError("mlp: zero hidden width");
        widths.push_back(h);
    }
    widths.push_back(out_dim);

    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t rows = widths[l], cols = widths[l + 1];
        Tensor w(Shape{rows, cols});
        for (std::size_t i = 0; i < w.numel(); ++i) w[i] = rng.normal(0.0, kInitStddev);
        Tensor b(Shape{1, cols});
        const int layer_index = static_cast<int>(l);
        params_.emplace_back(std::move(w), ParamRole::Weight, layer_index,
                             name_prefix + ".w" + std::to_string(l));
        params_.emplace_back(std::move(b), ParamRole::Bias, layer_index,
                             name_prefix + ".b" + std::to_string(l));
        layers_.push_back(Layer{params_.size() - 2, params_.size() - 1,
                                l + 2 < widths.size()});
    }
    spectral_state_.resize(layers_.size());
}

Var Mlp::forward(Tape& tape, Var x, const RegularizerSpec& reg, bool update_state,
                 engine::RngStream& rng, std::vector<Var>* param_leaves) const {
    using namespace engine;
    // A non-empty param_leaves vector is reused, so repeated passes within
    // one loss graph share leaves and their gradients accumulate.
    const bool reuse = param_leaves && !param_leaves->empty();
    if (reuse && param_leaves->size() != params_.size()) {
        throw TapeError("mlp forward: reused leaf count mismatch");
    }
    Var h = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        Var w_leaf = reuse ? (*param_leaves)[layer.w_index]
                           : tape.leaf(params_[layer.w_index].value);
        Var w = w_leaf;
        if (reg.kind == RegularizerSpec::Kind::SpectralNorm) {
            w = lipschitz::spectral_reparam(tape, w, spectral_state_[l], reg.power_iters,
                                            update_state, rng);
        } else if (reg.kind == RegularizerSpec::Kind::WeightNormRows) {
            w = lipschitz::weight_norm_reparam(tape, w);
        }
        Var b = reuse ? (*param_leaves)[layer.b_index]
                      : tape.leaf(params_[layer.b_index].value);
        if (param_leaves && !reuse) {
            param_leaves->push_back(w_leaf);
            param_leaves->push_back(b);
        }
        h = add_rowvec(matmul(h, w), b);
        if (layer.hidden) h = lrelu(h, kLeakySlope);
    }
    switch (final_act_) {
        case FinalActivation::None:
            break;
        case FinalActivation::Sigmoid:
            h = sigmoid(h);
            break;
        case FinalActivation::Tanh:
            h = tanh_(h);
            break;
    }
    return h;
}

Var Mlp::forward(Tape& tape, Var x, std::vector<Var>* param_leaves) const {
    engine::RngStream unused(0);
    return forward(tape, x, RegularizerSpec::none(), false, unused, param_leaves);
}

std::vector<Tensor> Mlp::effective_weights(const RegularizerSpec& reg,
                                           engine::RngStream& rng) const {
    std::vector<Tensor> out;
    out.reserve(layers_.size());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Tensor& w = params_[layers_[l].w_index].value;
        if (reg.kind == RegularizerSpec::Kind::SpectralNorm) {
            out.push_back(lipschitz::spectral_effective(w, spectral_state_[l], rng).w_hat);
        } else if (reg.kind == RegularizerSpec::Kind::WeightNormRows) {
            out.push_back(lipschitz::weight_norm_rows(w).w_hat);
        } else {
            out.push_back(w);
        }
    }
    return out;
}

double Mlp::max_abs_param() const {
    double m = 0.0;
    for (const Parameter& p : params_) {
        for (std::size_t i = 0; i < p.value.numel(); ++i) {
            const double a = std::abs(p.value[i]);
            if (a > m) m = a;
        }
    }
    return m;
}

Tensor NoisePrior::sample(std::size_t n, engine::RngStream& rng) const {
    Tensor z(Shape{n, dim});
    for (std::size_t i = 0; i < z.numel(); ++i) {
        z[i] = (kind == Kind::StandardNormal) ? rng.normal() : rng.uniform(-1.0, 1.0);
    }
    return z;
}

Discriminator::Discriminator(std::size_t in_dim, const std::vector<std::size_t>& hidden,
                             bool with_sigmoid, engine::RngStream& rng)
    : net_(in_dim, hidden, 1,
           with_sigmoid ? FinalActivation::Sigmoid : FinalActivation::None, rng, "d"),
      with_sigmoid_(with_sigmoid),
      state_rng_(rng.child("spectral-u")) {}

Var Discriminator::forward(Tape& tape, Var x, bool update_state, engine::RngStream& rng,
                           std::vector<Var>* param_leaves) const {
    return net_.forward(tape, x, reg_, update_state, rng, param_leaves);
}

std::vector<double> Discriminator::scores(const Tensor& batch) const {
    Tape tape;
    engine::RngStream rng = state_rng_;  // copy; eval never mutates state
    Var x = tape.leaf(batch);
    Var out = net_.forward(tape, x, reg_, false, rng);
    const Tensor& v = tape.value(out);
    std::vector<double> s(v.rows());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = v[i];
    return s;
}

double Discriminator::score(const Tensor& example) const {
    Tensor batch = example.reshaped(Shape{1, example.numel()});
    return scores(batch)[0];
}

std::vector<Tensor> Discriminator::effective_weights() const {
    engine::RngStream rng = state_rng_;
    return net_.effective_weights(reg_, rng);
}

Generator::Generator(NoisePrior prior, const std::vector<std::size_t>& hidden,
                     std::size_t out_dim, engine::RngStream& rng)
    : prior_(prior), net_(prior.dim, hidden, out_dim, FinalActivation::Tanh, rng, "g") {}

Var Generator::forward(Tape& tape, Var z, std::vector<Var>* param_leaves) const {
    return net_.forward(tape, z, param_leaves);
}

Tensor Generator::sample(std::size_t n, engine::RngStream& rng) const {
    if (n < 1) throw ConfigError("generator sample: n must be >= 1");
    Tape tape;
    Var z = tape.leaf(prior_.sample(n, rng));
    Var out = forward(tape, z);
    return tape.value(out);
}

}  // namespace ganlab::gan
