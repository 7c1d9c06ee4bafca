#include "ganlab/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ganlab/errors.hpp"

namespace ganlab::gan {

using engine::AdamConfig;
using engine::AdamState;
using engine::RngStream;
using engine::Tape;
using engine::Tensor;
using engine::Var;
using lipschitz::RegularizerSpec;

Strategy strategy_from_string(const std::string& s) {
    if (s == "original") return Strategy::Original;
    if (s == "clip") return Strategy::Clip;
    if (s == "spectral") return Strategy::Spectral;
    if (s == "gp") return Strategy::Gp;
    if (s == "weightnorm") return Strategy::WeightNorm;
    if (s == "orthonormal") return Strategy::Orthonormal;
    throw ConfigError("unknown strategy: " + s);
}

std::string strategy_to_string(Strategy s) {
    switch (s) {
        case Strategy::Original: return "original";
        case Strategy::Clip: return "clip";
        case Strategy::Spectral: return "spectral";
        case Strategy::Gp: return "gp";
        case Strategy::WeightNorm: return "weightnorm";
        case Strategy::Orthonormal: return "orthonormal";
    }
    return "?";
}

Objective objective_from_string(const std::string& s) {
    if (s == "js") return Objective::Js;
    if (s == "wasserstein") return Objective::Wasserstein;
    throw ConfigError("unknown objective: " + s);
}

std::string objective_to_string(Objective o) {
    return o == Objective::Js ? "js" : "wasserstein";
}

MeasuringFunction measuring_for(Objective o) {
    return o == Objective::Js ? MeasuringFunction::log_phi() : MeasuringFunction::identity();
}

AdamConfig adam_defaults(Strategy s, Objective o) {
    AdamConfig a;
    a.lr = (o == Objective::Js) ? 4e-4 : 2e-4;
    switch (s) {
        case Strategy::Original:
        case Strategy::Clip:
            a.beta1 = 0.5;
            break;
        case Strategy::Spectral:
        case Strategy::Gp:
        case Strategy::WeightNorm:
        case Strategy::Orthonormal:
            a.beta1 = 0.0;
            break;
    }
    a.beta2 = 0.999;
    return a;
}

RegularizerSpec regularizer_for(Strategy s) {
    switch (s) {
        case Strategy::Original: return RegularizerSpec::none();
        case Strategy::Clip: return RegularizerSpec::weight_clip(0.01);
        case Strategy::Spectral: return RegularizerSpec::spectral(1);
        case Strategy::Gp: return RegularizerSpec::gradient_penalty(10.0);
        case Strategy::WeightNorm: return RegularizerSpec::weight_norm_rows();
        case Strategy::Orthonormal: return RegularizerSpec::orthonormal(1e-4);
    }
    return RegularizerSpec::none();
}

TrainConfig TrainConfig::make(Strategy s, Objective o) {
    TrainConfig c;
    c.strategy = s;
    c.objective = o;
    c.reg = regularizer_for(s);
    c.adam = adam_defaults(s, o);
    c.d_steps_per_g = (o == Objective::Wasserstein) ? 5 : 1;
    return c;
}

double TrainResult::final_gap() const {
    return std::abs(final_gap_signed());
}

double TrainResult::final_gap_signed() const {
    if (curve.empty()) return 0.0;
    return curve.back().heldout_loss_d - curve.back().train_loss_d;
}

namespace {

// grad = d(loss)/d(theta) for the discriminator's parameter leaves.
std::vector<Tensor> disc_loss_gradients(Discriminator& d, const Tensor& real_batch,
                                        const Tensor& fake_batch, const TrainConfig& config,
                                        RngStream& rng, double* utility_out) {
    using namespace engine;
    Tape tape;
    std::vector<Var> leaves;
    Var utility = disc_utility(tape, d, real_batch, fake_batch, config.phi(),
                               /*update_state=*/true, rng, &leaves);
    if (utility_out) *utility_out = tape.value(utility).item();
    Var loss = neg(utility);
    if (config.reg.kind == RegularizerSpec::Kind::GradientPenalty) {
        auto fwd = [&](Tape& t, Var x) { return d.forward(t, x, false, rng, &leaves); };
        Var penalty = lipschitz::gradient_penalty(tape, fwd, real_batch, fake_batch,
                                                  config.reg.gp_lambda, rng);
        loss = add(loss, penalty);
    } else if (config.reg.kind == RegularizerSpec::Kind::Orthonormal) {
        // Penalize every weight matrix; biases are left alone.
        const auto& params = d.params();
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i].role != engine::ParamRole::Weight) continue;
            loss = add(loss, lipschitz::orthonormal_penalty(tape, leaves[i],
                                                            config.reg.ortho_beta));
        }
    }
    return tape.backward(loss, leaves);
}

}  // namespace

double train_step_discriminator(Discriminator& d, const Generator& g, const Tensor& real_batch,
                                const TrainConfig& config, AdamState& opt, RngStream& rng) {
    Tensor fake_batch;
    if (config.extra_fake_sampler) {
        const std::size_t n_own = real_batch.rows() / 2;
        const std::size_t n_extra = real_batch.rows() - n_own;
        fake_batch = engine::vstack(g.sample(n_own, rng),
                                    config.extra_fake_sampler(n_extra, rng));
    } else {
        fake_batch = g.sample(real_batch.rows(), rng);
    }
    double utility = 0.0;
    std::vector<Tensor> grads =
        disc_loss_gradients(d, real_batch, fake_batch, config, rng, &utility);
    opt.step(d.params(), grads, config.adam);
    if (config.reg.kind == RegularizerSpec::Kind::WeightClip) {
        lipschitz::weight_clip(d.params(), config.reg.clip_c);
    }
    return utility;
}

double train_step_generator(Discriminator& d, Generator& g, const TrainConfig& config,
                            AdamState& opt, RngStream& rng) {
    using namespace engine;
    Tensor noise = g.prior().sample(config.batch, rng);
    Tape tape;
    std::vector<Var> leaves;
    Var loss = gen_loss(tape, d, g, noise, config.phi(), config.non_saturating, rng, &leaves);
    const double value = tape.value(loss).item();
    std::vector<Tensor> grads = tape.backward(loss, leaves);
    opt.step(g.params(), grads, config.adam);
    return value;
}

TrainResult train(const TrainConfig& config, const data::Dataset& train_split,
                  const data::Dataset& holdout_split) {
    if (train_split.size() < config.batch) {
        throw ConfigError("train: dataset smaller than the configured batch size (" +
                          std::to_string(train_split.size()) + " < " +
                          std::to_string(config.batch) + ")");
    }

    RngStream init_rng = RngStream(config.seed).child("init");
    RngStream data_rng = RngStream(config.seed).child("batches");
    RngStream noise_rng = RngStream(config.seed).child("noise");
    RngStream eval_rng = RngStream(config.seed).child("eval");

    const std::size_t dim = train_split.dim();
    TrainResult result;
    result.d = Discriminator(dim, config.d_hidden, config.objective == Objective::Js, init_rng);
    result.d.regularizer() = config.reg;
    result.g = Generator(config.noise, config.g_hidden, dim, init_rng);

    const std::size_t iters_per_epoch = train_split.size() / config.batch;
    const std::size_t total_iters = config.epochs * iters_per_epoch;

    AdamState d_opt, g_opt;
    const MeasuringFunction phi = config.phi();

    // Shared evaluation fakes per checkpoint: the common fake term cancels
    // in the train/heldout gap, leaving the real-data part the theory
    // addresses.
    const std::size_t eval_n = std::min<std::size_t>(256, holdout_split.size());

    auto record_point = [&](std::size_t iter) {
        Tensor eval_fakes = result.g.sample(eval_n, eval_rng);
        const double train_real =
            real_term_value_guarded(result.d, train_split.all(), phi);
        const double heldout_real =
            real_term_value_guarded(result.d, holdout_split.all(), phi);
        const double fake_term = fake_term_value_guarded(result.d, eval_fakes, phi);
        const double g_loss =
            gen_loss_value_guarded(result.d, eval_fakes, phi, config.non_saturating);
        result.curve.push_back(LossPoint{iter, train_real + fake_term,
                                         heldout_real + fake_term, g_loss});
        Checkpoint cp;
        cp.iteration = iter;
        for (const engine::Parameter& p : result.d.params()) cp.d_params.push_back(p.value);
        cp.effective_weights = result.d.effective_weights();
        cp.max_abs_weight = result.d.max_abs_param();
        result.checkpoints.push_back(std::move(cp));
    };

    try {
        record_point(0);
        std::size_t iter = 0;
        while (iter < total_iters) {
            for (int k = 0; k < config.d_steps_per_g; ++k) {
                Tensor real = train_split.sample_batch(config.batch, data_rng);
                const double u = train_step_discriminator(result.d, result.g, real, config,
                                                          d_opt, noise_rng);
                if (!std::isfinite(u) || std::abs(u) > config.divergence_guard) {
                    throw NonFiniteError("discriminator utility diverged");
                }
                result.post_step_max_abs_weight =
                    std::max(result.post_step_max_abs_weight, result.d.max_abs_param());
            }
            const double v = train_step_generator(result.d, result.g, config, g_opt, noise_rng);
            if (!std::isfinite(v) || std::abs(v) > config.divergence_guard) {
                throw NonFiniteError("generator loss diverged");
            }
            ++iter;
            if (iter % config.checkpoint_every == 0 || iter == total_iters) {
                record_point(iter);
            }
            result.iterations_run = iter;
        }
        result.outcome = Outcome::Converged;
    } catch (const NonFiniteError& e) {
        result.outcome = Outcome::Failed;
        result.failure_reason = e.what();
    } catch (const DomainError& e) {
        result.outcome = Outcome::Failed;
        result.failure_reason = e.what();
    }
    return result;
}

// ---- persistence -------------------------------------------------------

namespace {

void write_params(std::ostream& out, const std::vector<engine::Parameter>& params) {
    out << params.size() << "\n";
    for (const engine::Parameter& p : params) {
        out << p.name << " " << p.value.ndim();
        for (std::size_t d : p.value.shape()) out << " " << d;
        out << "\n";
        out.precision(17);
        for (std::size_t i = 0; i < p.value.numel(); ++i) {
            out << p.value[i] << (i + 1 == p.value.numel() ? '\n' : ' ');
        }
    }
}

void read_params(std::istream& in, std::vector<engine::Parameter>& params,
                 const std::string& path) {
    std::size_t count = 0;
    in >> count;
    if (count != params.size()) {
        throw ConfigError("checkpoint " + path + ": parameter count mismatch");
    }
    for (engine::Parameter& p : params) {
        std::string name;
        std::size_t ndim = 0;
        in >> name >> ndim;
        engine::Shape shape(ndim);
        for (std::size_t i = 0; i < ndim; ++i) in >> shape[i];
        if (name != p.name || shape != p.value.shape()) {
            throw ConfigError("checkpoint " + path + ": mismatched entry " + name);
        }
        for (std::size_t i = 0; i < p.value.numel(); ++i) in >> p.value[i];
    }
    if (!in) throw ConfigError("checkpoint " + path + ": truncated");
}

constexpr const char* kCheckpointMagic = "ganlab-checkpoint v1";

}  // namespace

void save_checkpoint(const std::string& path, const Discriminator& d, const Generator& g) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write checkpoint: " + path);
    out << kCheckpointMagic << "\n";
    out << (d.has_sigmoid() ? "sigmoid" : "linear") << " " << d.output_bound() << "\n";
    write_params(out, d.params());
    out << (g.prior().kind == NoisePrior::Kind::StandardNormal ? "normal" : "uniform") << " "
        << g.prior().dim << "\n";
    write_params(out, g.params());
}

void load_checkpoint(const std::string& path, Discriminator& d, Generator& g) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint: " + path);
    std::string line;
    std::getline(in, line);
    if (line != kCheckpointMagic) throw ConfigError("bad checkpoint header in " + path);
    std::string head;
    double bound = 0.0;
    in >> head >> bound;
    if ((head == "sigmoid") != d.has_sigmoid()) {
        throw ConfigError("checkpoint " + path + ": head mismatch");
    }
    read_params(in, d.params(), path);
    std::string prior;
    std::size_t dim = 0;
    in >> prior >> dim;
    if (dim != g.prior().dim) throw ConfigError("checkpoint " + path + ": noise dim mismatch");
    read_params(in, g.params(), path);
}

void write_loss_curve(const std::string& path, const std::vector<LossPoint>& curve) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write loss curve: " + path);
    out << "iteration,train_loss_d,heldout_loss_d,train_loss_g\n";
    out.precision(17);
    for (const LossPoint& p : curve) {
        out << p.iteration << "," << p.train_loss_d << "," << p.heldout_loss_d << ","
            << p.train_loss_g << "\n";
    }
}

}  // namespace ganlab::gan
