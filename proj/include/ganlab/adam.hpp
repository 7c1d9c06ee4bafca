#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ganlab/tensor.hpp"

namespace ganlab::engine {

enum class ParamRole { Weight, Bias };

// A trainable tensor. Shape is fixed at construction; values mutate in place
// across optimizer steps.
struct Parameter {
    Tensor value;
    ParamRole role = ParamRole::Weight;
    int layer = 0;
    std::string name;

    Parameter() = default;
    Parameter(Tensor v, ParamRole r, int layer_index, std::string n)
        : value(std::move(v)), role(r), layer(layer_index), name(std::move(n)) {}
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected Adam. One state per parameter set; accumulator shapes are
// pinned to the parameter shapes at first use and the step counter advances
// by exactly one per adam_step.
class AdamState {
public:
    AdamState() = default;

    std::uint64_t step_count() const { return t_; }

    // Applies one update in place. Throws NonFiniteError naming the
    // offending parameter if any gradient entry is NaN/Inf; in that case no
    // parameter is modified and the step counter does not advance.
    void step(std::vector<Parameter>& params, const std::vector<Tensor>& grads,
              const AdamConfig& cfg);

private:
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    std::uint64_t t_ = 0;

    void init_like(const std::vector<Parameter>& params);
};

// Plain SGD step, used by the noise-calibrated private trainer.
void sgd_step(std::vector<Parameter>& params, const std::vector<Tensor>& grads, double lr);

}  // namespace ganlab::engine
