#include "ganlab/regularizer.hpp"

#include <cmath>

#include "ganlab/errors.hpp"

namespace ganlab::lipschitz {

using engine::Shape;
using engine::Tape;
using engine::Tensor;
using engine::Var;

RegularizerSpec RegularizerSpec::weight_clip(double c) {
    if (!(c > 0.0)) throw ConfigError("weight clip bound must be > 0");
    RegularizerSpec s;
    s.kind = Kind::WeightClip;
    s.clip_c = c;
    return s;
}

RegularizerSpec RegularizerSpec::spectral(int n_iter) {
    if (n_iter < 1) throw ConfigError("spectral normalization needs n_iter >= 1");
    RegularizerSpec s;
    s.kind = Kind::SpectralNorm;
    s.power_iters = n_iter;
    return s;
}

RegularizerSpec RegularizerSpec::gradient_penalty(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("gradient penalty lambda must be > 0");
    RegularizerSpec s;
    s.kind = Kind::GradientPenalty;
    s.gp_lambda = lambda;
    return s;
}

RegularizerSpec RegularizerSpec::weight_norm_rows() {
    RegularizerSpec s;
    s.kind = Kind::WeightNormRows;
    return s;
}

RegularizerSpec RegularizerSpec::orthonormal(double beta) {
    if (!(beta > 0.0)) throw ConfigError("orthonormal beta must be > 0");
    RegularizerSpec s;
    s.kind = Kind::Orthonormal;
    s.ortho_beta = beta;
    return s;
}

ApplyMode RegularizerSpec::mode() const {
    switch (kind) {
        case Kind::None:
            return ApplyMode::None;
        case Kind::WeightClip:
            return ApplyMode::PostStepProjection;
        case Kind::GradientPenalty:
        case Kind::Orthonormal:
            return ApplyMode::LossPenalty;
        case Kind::SpectralNorm:
        case Kind::WeightNormRows:
            return ApplyMode::PreForwardReparam;
    }
    return ApplyMode::None;
}

std::string RegularizerSpec::str() const {
    switch (kind) {
        case Kind::None:
            return "none";
        case Kind::WeightClip:
            return "clip(" + std::to_string(clip_c) + ")";
        case Kind::SpectralNorm:
            return "spectral(" + std::to_string(power_iters) + ")";
        case Kind::GradientPenalty:
            return "gp(" + std::to_string(gp_lambda) + ")";
        case Kind::WeightNormRows:
            return "weightnorm";
        case Kind::Orthonormal:
            return "orthonormal(" + std::to_string(ortho_beta) + ")";
    }
    return "?";
}

void PowerIterState::init(std::size_t rows, engine::RngStream& rng) {
    u.assign(rows, 0.0);
    double norm2 = 0.0;
    for (double& x : u) {
        x = rng.normal();
        norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    if (norm > 0.0) {
        for (double& x : u) x /= norm;
    } else {
        u[0] = 1.0;
    }
    initialized = true;
}

void weight_clip(Tensor& w, double c) {
    if (!(c > 0.0)) throw ConfigError("weight clip bound must be > 0");
    for (std::size_t i = 0; i < w.numel(); ++i) {
        if (w[i] > c) w[i] = c;
        if (w[i] < -c) w[i] = -c;
    }
}

void weight_clip(std::vector<engine::Parameter>& params, double c) {
    for (engine::Parameter& p : params) weight_clip(p.value, c);
}

namespace {

constexpr double kTinyNorm = 1e-300;

// `rounds` power-iteration updates of u in place, then v = normalize(W^T u)
// and sigma = u^T W v = ||W^T u||. rounds = 0 reads the current u without
// touching it, which keeps repeated forward passes within one training step
// on identical effective weights. Returns false for a (numerically) zero
// matrix.
bool power_estimate(const Tensor& w, std::vector<double>& u, int rounds,
                    std::vector<double>& v_out, double& sigma_out) {
    const std::size_t rows = w.rows(), cols = w.cols();
    std::vector<double> v(cols, 0.0);

    auto compute_v = [&]() -> double {  // v = W^T u, returns ||v||
        double norm2 = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows; ++i) s += w.at(i, j) * u[i];
            v[j] = s;
            norm2 += s * s;
        }
        return std::sqrt(norm2);
    };

    for (int it = 0; it < rounds; ++it) {
        const double vnorm = compute_v();
        if (vnorm < kTinyNorm) return false;
        for (double& x : v) x /= vnorm;
        double unorm2 = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += w.at(i, j) * v[j];
            u[i] = s;
            unorm2 += s * s;
        }
        const double unorm = std::sqrt(unorm2);
        if (unorm < kTinyNorm) return false;
        for (double& x : u) x /= unorm;
    }

    const double sigma = compute_v();
    if (sigma < kTinyNorm) return false;
    for (double& x : v) x /= sigma;
    sigma_out = sigma;
    v_out = std::move(v);
    return true;
}

}  // namespace

SpectralResult spectral_normalize(const Tensor& w, PowerIterState& state, int n_iter,
                                  engine::RngStream& rng) {
    if (w.ndim() != 2) throw ShapeError("spectral_normalize: expected 2-D weight matrix");
    if (n_iter < 1) throw ConfigError("spectral_normalize: n_iter must be >= 1");
    if (!state.initialized || state.u.size() != w.rows()) state.init(w.rows(), rng);

    std::vector<double> v;
    double sigma = 0.0;
    if (!power_estimate(w, state.u, n_iter, v, sigma)) {
        return SpectralResult{w, 0.0, true};
    }
    Tensor w_hat(w.shape());
    for (std::size_t i = 0; i < w.numel(); ++i) w_hat[i] = w[i] / sigma;
    return SpectralResult{std::move(w_hat), sigma, false};
}

double spectral_sigma(const Tensor& w, PowerIterState& state, int n_iter,
                      engine::RngStream& rng) {
    if (!state.initialized || state.u.size() != w.rows()) state.init(w.rows(), rng);
    std::vector<double> v;
    double sigma = 0.0;
    if (!power_estimate(w, state.u, n_iter, v, sigma)) return 0.0;
    return sigma;
}

SpectralResult spectral_effective(const Tensor& w, const PowerIterState& state,
                                  engine::RngStream& rng) {
    if (w.ndim() != 2) throw ShapeError("spectral_effective: expected 2-D weight matrix");
    PowerIterState scratch = state;
    int rounds = 0;
    if (!scratch.initialized || scratch.u.size() != w.rows()) {
        scratch.init(w.rows(), rng);
        rounds = 20;
    }
    std::vector<double> v;
    double sigma = 0.0;
    if (!power_estimate(w, scratch.u, rounds, v, sigma)) {
        return SpectralResult{w, 0.0, true};
    }
    Tensor w_hat(w.shape());
    for (std::size_t i = 0; i < w.numel(); ++i) w_hat[i] = w[i] / sigma;
    return SpectralResult{std::move(w_hat), sigma, false};
}

WeightNormResult weight_norm_rows(const Tensor& w) {
    if (w.ndim() != 2) throw ShapeError("weight_norm_rows: expected 2-D weight matrix");
    WeightNormResult r{w, false};
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double norm2 = 0.0;
        for (std::size_t j = 0; j < w.cols(); ++j) norm2 += w.at(i, j) * w.at(i, j);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) {
            r.zero_row_warning = true;
            continue;
        }
        for (std::size_t j = 0; j < w.cols(); ++j) r.w_hat.at(i, j) /= norm;
    }
    return r;
}

Var spectral_reparam(Tape& tape, Var w, PowerIterState& state, int n_iter, bool update_state,
                     engine::RngStream& rng) {
    using namespace engine;
    const Tensor& wv = tape.value(w);
    if (wv.ndim() != 2) throw ShapeError("spectral_reparam: expected 2-D weight matrix");
    int rounds = update_state ? n_iter : 0;
    if (!state.initialized || state.u.size() != wv.rows()) {
        state.init(wv.rows(), rng);
        rounds = 20;  // burn-in: u must track sigma from the first forward on
    }

    std::vector<double> v;
    double sigma = 0.0;
    // With rounds = 0 the persisted u is read as-is, so every forward pass
    // between state updates sees identical effective weights.
    if (!power_estimate(wv, state.u, rounds, v, sigma)) {
        return w;  // zero matrix: pass through
    }

    // sigma as a taped scalar = u^T W v with u, v constants; the division by
    // sigma is differentiated through W.
    Var u_row = tape.constant(Tensor::row(state.u));                // [1, rows]
    Var v_col = tape.constant(Tensor::col(v));                      // [cols, 1]
    Var sigma_var = matmul(matmul(u_row, w), v_col);                // [1, 1]
    Var inv = reciprocal(reshape(sigma_var, Shape{1}));             // scalar
    return mul(w, broadcast_full(inv, wv.shape()));
}

Var weight_norm_reparam(Tape& tape, Var w) {
    using namespace engine;
    const Tensor& wv = tape.value(w);
    if (wv.ndim() != 2) throw ShapeError("weight_norm_reparam: expected 2-D weight matrix");
    Var norms = row_l2norm(w);  // [rows, 1], eps-guarded
    return mul(w, broadcast_cols(reciprocal(norms), wv.cols()));
}

Var orthonormal_penalty(Tape& tape, Var w, double beta) {
    using namespace engine;
    const Tensor& wv = tape.value(w);
    if (wv.ndim() != 2) throw ShapeError("orthonormal_penalty: expected 2-D weight matrix");
    Var gram = matmul(transpose(w), w);
    Var eye = tape.constant(Tensor::identity(wv.cols()));
    return scale(sum(square(sub(gram, eye))), beta);
}

Var gradient_penalty(Tape& tape, const std::function<Var(Tape&, Var)>& forward,
                     const Tensor& real_batch, const Tensor& fake_batch, double lambda,
                     engine::RngStream& rng) {
    using namespace engine;
    if (!(lambda > 0.0)) throw ConfigError("gradient_penalty: lambda must be > 0");
    if (!real_batch.same_shape(fake_batch)) {
        throw ShapeError("gradient_penalty: real and fake batches must match, got " +
                         shape_str(real_batch.shape()) + " vs " + shape_str(fake_batch.shape()));
    }
    const std::size_t m = real_batch.rows(), dim = real_batch.cols();

    Tensor interp(Shape{m, dim});
    for (std::size_t i = 0; i < m; ++i) {
        const double alpha = rng.uniform01();
        for (std::size_t j = 0; j < dim; ++j) {
            interp.at(i, j) = alpha * real_batch.at(i, j) + (1.0 - alpha) * fake_batch.at(i, j);
        }
    }

    Var x_hat = tape.leaf(std::move(interp));
    Var out = forward(tape, x_hat);  // [m, 1] raw outputs
    // Row i of d(sum)/dx_hat is the input gradient of example i alone.
    Var total = sum(out);
    std::vector<Var> gx = tape.gradients(total, std::span<const Var>(&x_hat, 1));
    Var norms = row_l2norm(gx[0]);                       // [m, 1]
    Var excess = add_scalar(norms, -1.0);
    return scale(mean(square(excess)), lambda);
}

}  // namespace ganlab::lipschitz
