#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ganlab/adam.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/tape.hpp"

namespace ganlab::lipschitz {

// How a regularizer hooks into a training step.
enum class ApplyMode {
    None,
    PostStepProjection,      // weight clipping
    LossPenalty,             // gradient penalty, orthonormal penalty
    PreForwardReparam,       // spectral normalization, row weight norm
};

struct RegularizerSpec {
    enum class Kind { None, WeightClip, SpectralNorm, GradientPenalty, WeightNormRows, Orthonormal };

    Kind kind = Kind::None;
    double clip_c = 0.01;       // WeightClip
    int power_iters = 1;        // SpectralNorm, per training step
    double gp_lambda = 10.0;    // GradientPenalty
    double ortho_beta = 1e-4;   // Orthonormal

    static RegularizerSpec none() { return {}; }
    static RegularizerSpec weight_clip(double c);
    static RegularizerSpec spectral(int n_iter = 1);
    static RegularizerSpec gradient_penalty(double lambda = 10.0);
    static RegularizerSpec weight_norm_rows();
    static RegularizerSpec orthonormal(double beta = 1e-4);

    ApplyMode mode() const;
    bool reparameterizes() const { return mode() == ApplyMode::PreForwardReparam; }
    std::string str() const;
};

// Persisted left singular-vector estimate for one weight matrix. ||u|| = 1
// after every update.
struct PowerIterState {
    std::vector<double> u;
    bool initialized = false;
    void init(std::size_t rows, engine::RngStream& rng);
};

struct SpectralResult {
    engine::Tensor w_hat;
    double sigma = 0.0;
    bool zero_matrix_warning = false;
};

// Clamps every entry of every parameter into [-c, c]; applied after each
// discriminator optimizer step.
void weight_clip(std::vector<engine::Parameter>& params, double c);
void weight_clip(engine::Tensor& w, double c);

// Runs n_iter rounds of power iteration with the persisted u and returns
// W / sigma_hat. A zero matrix is returned unchanged with the warning flag
// set.
SpectralResult spectral_normalize(const engine::Tensor& w, PowerIterState& state, int n_iter,
                                  engine::RngStream& rng);

// Estimate only; updates the state the same way.
double spectral_sigma(const engine::Tensor& w, PowerIterState& state, int n_iter,
                      engine::RngStream& rng);

// Read-only effective weight under the persisted u (exactly what a forward
// pass between state updates uses). An uninitialized state falls back to a
// fresh 20-round estimate.
SpectralResult spectral_effective(const engine::Tensor& w, const PowerIterState& state,
                                  engine::RngStream& rng);

struct WeightNormResult {
    engine::Tensor w_hat;
    bool zero_row_warning = false;
};

// Divides each row by its L2 norm; zero rows pass through untouched.
WeightNormResult weight_norm_rows(const engine::Tensor& w);

// ---- taped forms used inside training graphs ---------------------------

// Reparameterized weight for the forward pass: W / (u^T W v) with u, v held
// constant. Gradients flow to the raw W through both the numerator and the
// sigma estimate. State is updated numerically first when update_state is
// set (one round per training step by convention).
engine::Var spectral_reparam(engine::Tape& tape, engine::Var w, PowerIterState& state,
                             int n_iter, bool update_state, engine::RngStream& rng);

// Row-normalized weight, rows scaled by 1/sqrt(||row||^2 + eps).
engine::Var weight_norm_reparam(engine::Tape& tape, engine::Var w);

// beta * ||W^T W - I||_F^2 as a differentiable penalty.
engine::Var orthonormal_penalty(engine::Tape& tape, engine::Var w, double beta);

// lambda * mean_i (|| d/dx f(x_hat_i) || - 1)^2 over per-example interpolates
// x_hat = alpha x + (1 - alpha) x_tilde, alpha ~ U[0,1]. `forward` maps a
// [m,dim] batch Var to [m,1] raw discriminator outputs. The returned Var is
// differentiable with respect to the model parameters used inside `forward`
// (double backward).
engine::Var gradient_penalty(engine::Tape& tape,
                             const std::function<engine::Var(engine::Tape&, engine::Var)>& forward,
                             const engine::Tensor& real_batch, const engine::Tensor& fake_batch,
                             double lambda, engine::RngStream& rng);

}  // namespace ganlab::lipschitz
