#include "ganlab/adam.hpp"

#include <cmath>

#include "ganlab/errors.hpp"

namespace ganlab::engine {

void AdamState::init_like(const std::vector<Parameter>& params) {
    m_.clear();
    v_.clear();
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Parameter& p : params) {
        m_.push_back(Tensor::zeros_like(p.value));
        v_.push_back(Tensor::zeros_like(p.value));
    }
}

void AdamState::step(std::vector<Parameter>& params, const std::vector<Tensor>& grads,
                     const AdamConfig& cfg) {
    if (!(cfg.lr > 0.0)) throw ConfigError("adam: lr must be > 0");
    if (cfg.beta1 < 0.0 || cfg.beta1 >= 1.0 || cfg.beta2 < 0.0 || cfg.beta2 >= 1.0) {
        throw ConfigError("adam: betas must lie in [0, 1)");
    }
    if (grads.size() != params.size()) throw ShapeError("adam: gradient count mismatch");
    if (m_.empty()) init_like(params);
    if (m_.size() != params.size()) throw ShapeError("adam: state does not match parameters");

    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i].value.same_shape(grads[i])) {
            throw ShapeError("adam: gradient shape mismatch for " + params[i].name);
        }
        if (!grads[i].all_finite()) {
            throw NonFiniteError("adam: non-finite gradient for parameter '" + params[i].name +
                                 "'");
        }
    }

    t_ += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& theta = params[i].value;
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        const Tensor& g = grads[i];
        for (std::size_t j = 0; j < theta.numel(); ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            theta[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
        theta.require_finite("adam update of '" + params[i].name + "'");
    }
}

void sgd_step(std::vector<Parameter>& params, const std::vector<Tensor>& grads, double lr) {
    if (grads.size() != params.size()) throw ShapeError("sgd: gradient count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!grads[i].all_finite()) {
            throw NonFiniteError("sgd: non-finite gradient for parameter '" + params[i].name +
                                 "'");
        }
        Tensor& theta = params[i].value;
        for (std::size_t j = 0; j < theta.numel(); ++j) theta[j] -= lr * grads[i][j];
        theta.require_finite("sgd update of '" + params[i].name + "'");
    }
}

}  // namespace ganlab::engine
