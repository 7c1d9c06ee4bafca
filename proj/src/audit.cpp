#include "ganlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ganlab/errors.hpp"
#include "ganlab/losses.hpp"
#include "ganlab/nets.hpp"

namespace ganlab::privacy {

using engine::RngStream;
using engine::Shape;
using engine::Tape;
using engine::Tensor;
using engine::Var;

// ---- samplers ---------------------------------------------------------------

TwoPointSampler::TwoPointSampler(double a, double b, double prob_a)
    : a_(a), b_(b), prob_a_(prob_a) {
    if (!(prob_a > 0.0 && prob_a < 1.0)) {
        throw ConfigError("two-point sampler: prob_a must lie in (0, 1)");
    }
}

Tensor TwoPointSampler::sample(RngStream& rng) const {
    return Tensor::scalar(rng.uniform01() < prob_a_ ? a_ : b_);
}

std::optional<std::vector<std::pair<Tensor, double>>> TwoPointSampler::support() const {
    return std::vector<std::pair<Tensor, double>>{{Tensor::scalar(a_), prob_a_},
                                                  {Tensor::scalar(b_), 1.0 - prob_a_}};
}

RingSampler::RingSampler(std::size_t n_modes, double radius, double stddev)
    : n_modes_(n_modes), radius_(radius), stddev_(stddev),
      scale_(1.0 / (radius + 4.0 * stddev)) {}

Tensor RingSampler::sample(RngStream& rng) const {
    const std::size_t mode = rng.uniform_index(n_modes_);
    const double angle = 2.0 * M_PI * static_cast<double>(mode) / static_cast<double>(n_modes_);
    double x = (radius_ * std::cos(angle) + rng.normal(0.0, stddev_)) * scale_;
    double y = (radius_ * std::sin(angle) + rng.normal(0.0, stddev_)) * scale_;
    x = std::clamp(x, -1.0, 1.0);
    y = std::clamp(y, -1.0, 1.0);
    return Tensor(Shape{2}, std::vector<double>{x, y});
}

UniformBoxSampler::UniformBoxSampler(std::size_t dim, double half_width)
    : dim_(dim), half_width_(half_width) {}

Tensor UniformBoxSampler::sample(RngStream& rng) const {
    Tensor t(Shape{dim_});
    for (std::size_t i = 0; i < dim_; ++i) t[i] = rng.uniform(-half_width_, half_width_);
    return t;
}

// ---- helpers ----------------------------------------------------------------

namespace {

double expected_loss_enumerated(const StochasticLearner& learner,
                                const std::vector<double>& probs, const Tensor& probe) {
    const HypothesisClass& hs = *learner.hypotheses();
    double e = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) e += probs[i] * hs[i].loss(probe);
    return e;
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // of the mean
};

MeanVar mean_and_se2(const std::vector<double>& xs) {
    MeanVar r;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= n;
    double acc = 0.0;
    for (double x : xs) acc += (x - r.mean) * (x - r.mean);
    r.var = xs.size() > 1 ? acc / (n - 1.0) / n : 0.0;
    return r;
}

constexpr double kZ95 = 1.959963984540054;

double binom_pmf(std::size_t m, std::size_t k, double p) {
    // stable enough for m <= a few hundred
    double log_c = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        log_c += std::log(static_cast<double>(m - i)) - std::log(static_cast<double>(i + 1));
    }
    return std::exp(log_c + static_cast<double>(k) * std::log(p) +
                    static_cast<double>(m - k) * std::log1p(-p));
}

}  // namespace

// ---- stability --------------------------------------------------------------

StabilityEstimate estimate_ro_stability(const StochasticLearner& learner,
                                        const std::vector<Tensor>& s,
                                        const std::vector<Tensor>& probes,
                                        const DataSampler& replacement, std::size_t n_pairs,
                                        std::size_t n_runs, RngStream& rng) {
    if (s.empty()) throw ConfigError("stability: S must be nonempty");
    if (probes.empty()) throw ConfigError("stability: probe set must be nonempty");
    if (n_pairs < 1) throw ConfigError("stability: need at least one adjacent pair");

    const bool enumerable = learner.enumerate_probs(s).has_value();
    if (!enumerable && n_runs < 2) {
        throw ConfigError("stability: n_runs must be >= 2 for sampled mechanisms");
    }

    StabilityEstimate est;
    est.n_probes = probes.size();
    est.n_pairs = n_pairs;
    est.runs_per_side = enumerable ? 0 : n_runs;
    est.exact = enumerable;

    // expectations per probe for a fixed dataset
    auto side_expectations = [&](const std::vector<Tensor>& data)
        -> std::pair<std::vector<double>, std::vector<double>> {
        std::vector<double> means(probes.size(), 0.0), se2(probes.size(), 0.0);
        if (auto probs = learner.enumerate_probs(data)) {
            for (std::size_t p = 0; p < probes.size(); ++p) {
                means[p] = expected_loss_enumerated(learner, *probs, probes[p]);
            }
            return {means, se2};
        }
        std::vector<std::vector<double>> draws(probes.size());
        for (std::size_t r = 0; r < n_runs; ++r) {
            RngStream run_rng = rng.child("stab-run", r);
            auto f = learner.fit(data, run_rng);
            for (std::size_t p = 0; p < probes.size(); ++p) draws[p].push_back(f(probes[p]));
        }
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const MeanVar mv = mean_and_se2(draws[p]);
            means[p] = mv.mean;
            se2[p] = mv.var;
        }
        return {means, se2};
    };

    auto [base_means, base_se2] = side_expectations(s);

    for (std::size_t pair = 0; pair < n_pairs; ++pair) {
        std::vector<Tensor> adjacent = s;
        RngStream pair_rng = rng.child("stab-pair", pair);
        adjacent[pair % s.size()] = replacement.sample(pair_rng);
        auto [adj_means, adj_se2] = side_expectations(adjacent);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double diff = std::abs(base_means[p] - adj_means[p]);
            if (diff > est.eps_stable) {
                est.eps_stable = diff;
                est.ci_half_width = kZ95 * std::sqrt(base_se2[p] + adj_se2[p]);
            }
        }
    }
    return est;
}

namespace {

std::vector<Tensor> composition_dataset(const Tensor& a, const Tensor& b, std::size_t m,
                                        std::size_t k) {
    std::vector<Tensor> s;
    s.reserve(m);
    for (std::size_t i = 0; i < k; ++i) s.push_back(a);
    for (std::size_t i = k; i < m; ++i) s.push_back(b);
    return s;
}

}  // namespace

StabilityEstimate exact_stability_finite(const StochasticLearner& learner,
                                         const DataSampler& p_data, std::size_t m) {
    const auto support = p_data.support();
    if (!support || support->size() != 2) {
        throw ConfigError("exact stability: needs a two-point support");
    }
    if (!learner.hypotheses()) {
        throw ConfigError("exact stability: learner must be enumerable");
    }
    const Tensor& a = (*support)[0].first;
    const Tensor& b = (*support)[1].first;

    // expectation per probe for composition k (k copies of a)
    std::vector<std::vector<double>> e(m + 1, std::vector<double>(2, 0.0));
    for (std::size_t k = 0; k <= m; ++k) {
        const auto probs = learner.enumerate_probs(composition_dataset(a, b, m, k));
        if (!probs) throw ConfigError("exact stability: enumeration unavailable");
        e[k][0] = expected_loss_enumerated(learner, *probs, a);
        e[k][1] = expected_loss_enumerated(learner, *probs, b);
    }

    StabilityEstimate est;
    est.exact = true;
    est.n_probes = 2;
    est.n_pairs = 2 * m;  // every composition move in both directions
    for (std::size_t k = 0; k <= m; ++k) {
        if (k + 1 <= m) {  // replace one b by a
            for (int p = 0; p < 2; ++p) {
                est.eps_stable = std::max(est.eps_stable, std::abs(e[k][p] - e[k + 1][p]));
            }
        }
    }
    return est;
}

// ---- generalization gap -----------------------------------------------------

GapEstimate estimate_generalization_gap(const StochasticLearner& learner,
                                        const DataSampler& p_data, std::size_t m,
                                        std::size_t n_runs, std::size_t eval_factor,
                                        engine::RngStream& rng) {
    if (m < 1) throw ConfigError("gap: m must be >= 1");
    if (n_runs < 2) throw ConfigError("gap: n_runs must be >= 2");

    GapEstimate est;
    est.m = m;
    est.runs = n_runs;
    const auto support = p_data.support();
    const std::size_t eval_n = std::max<std::size_t>(eval_factor * m, 100);

    std::vector<double> gaps;
    gaps.reserve(n_runs);
    double u_se_acc = 0.0;
    for (std::size_t r = 0; r < n_runs; ++r) {
        RngStream run_rng = rng.child("gap-run", r);
        std::vector<Tensor> s;
        s.reserve(m);
        for (std::size_t i = 0; i < m; ++i) s.push_back(p_data.sample(run_rng));

        double emp = 0.0, pop = 0.0;
        if (auto probs = learner.enumerate_probs(s)) {
            // average over the mechanism's randomness in closed form
            for (const Tensor& x : s) emp += expected_loss_enumerated(learner, *probs, x);
            emp /= static_cast<double>(m);
            if (support) {
                for (const auto& [x, px] : *support) {
                    pop += px * expected_loss_enumerated(learner, *probs, x);
                }
            } else {
                std::vector<double> vals;
                vals.reserve(eval_n);
                for (std::size_t i = 0; i < eval_n; ++i) {
                    vals.push_back(
                        expected_loss_enumerated(learner, *probs, p_data.sample(run_rng)));
                }
                const MeanVar mv = mean_and_se2(vals);
                pop = mv.mean;
                u_se_acc += std::sqrt(mv.var);
            }
        } else {
            auto f = learner.fit(s, run_rng);
            for (const Tensor& x : s) emp += f(x);
            emp /= static_cast<double>(m);
            if (support) {
                for (const auto& [x, px] : *support) pop += px * f(x);
            } else {
                std::vector<double> vals;
                vals.reserve(eval_n);
                for (std::size_t i = 0; i < eval_n; ++i) vals.push_back(f(p_data.sample(run_rng)));
                const MeanVar mv = mean_and_se2(vals);
                pop = mv.mean;
                u_se_acc += std::sqrt(mv.var);
            }
        }
        gaps.push_back(emp - pop);
    }
    const MeanVar mv = mean_and_se2(gaps);
    est.f_u = mv.mean;
    est.ci_half_width = kZ95 * std::sqrt(mv.var);
    est.u_eval_rel_error = u_se_acc / static_cast<double>(n_runs);
    return est;
}

GapEstimate exact_gap_finite(const StochasticLearner& learner, const DataSampler& p_data,
                             std::size_t m) {
    const auto support = p_data.support();
    if (!support || support->size() != 2) {
        throw ConfigError("exact gap: needs a two-point support");
    }
    if (!learner.hypotheses()) throw ConfigError("exact gap: learner must be enumerable");
    const Tensor& a = (*support)[0].first;
    const Tensor& b = (*support)[1].first;
    const double pa = (*support)[0].second;

    GapEstimate est;
    est.m = m;
    est.exact = true;
    est.runs = 0;
    double f_u = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const auto probs = learner.enumerate_probs(composition_dataset(a, b, m, k));
        if (!probs) throw ConfigError("exact gap: enumeration unavailable");
        const double ea = expected_loss_enumerated(learner, *probs, a);
        const double eb = expected_loss_enumerated(learner, *probs, b);
        const double emp = (static_cast<double>(k) * ea + static_cast<double>(m - k) * eb) /
                           static_cast<double>(m);
        const double pop = pa * ea + (1.0 - pa) * eb;
        f_u += binom_pmf(m, k, pa) * (emp - pop);
    }
    est.f_u = f_u;
    return est;
}

// ---- chain ------------------------------------------------------------------

ChainRow verify_chain_row(const StochasticLearner& learner, const DataSampler& p_data,
                          std::size_t m, std::size_t n_runs, RngStream& rng) {
    ChainRow row;
    row.mechanism = learner.name();
    const auto eps = learner.privacy_epsilon();
    row.has_epsilon = eps.has_value();
    row.chain_applicable = eps.has_value();

    const bool finite_two_point =
        p_data.support().has_value() && p_data.support()->size() == 2;
    const bool enumerable = learner.hypotheses() != nullptr;

    if (finite_two_point && enumerable) {
        row.stability = exact_stability_finite(learner, p_data, m);
        row.gap = exact_gap_finite(learner, p_data, m);
    } else {
        RngStream s_rng = rng.child("chain-data");
        std::vector<Tensor> s;
        for (std::size_t i = 0; i < m; ++i) s.push_back(p_data.sample(s_rng));
        std::vector<Tensor> probes = s;
        for (std::size_t i = 0; i < 4; ++i) probes.push_back(p_data.sample(s_rng));
        row.stability =
            estimate_ro_stability(learner, s, probes, p_data, std::min<std::size_t>(m, 8),
                                  n_runs, rng);
        row.gap = estimate_generalization_gap(learner, p_data, m, n_runs, 100, rng);
    }

    if (row.has_epsilon) {
        row.epsilon = *eps;
        row.stability_bound = dp_stability_bound(row.epsilon);
        row.stability_ok =
            row.stability.eps_stable <= row.stability_bound + row.stability.ci_half_width;
    }
    row.gap_ok = std::abs(row.gap.f_u) <=
                 gap_bound_from_stability(row.stability.eps_stable) +
                     row.stability.ci_half_width + row.gap.ci_half_width;
    return row;
}

std::vector<ChainRow> verify_dp_chain(const ChainConfig& config, RngStream& rng) {
    std::vector<ChainRow> rows;
    TwoPointSampler p_data(-1.0, 1.0, config.prob_a);
    HypothesisClass hs = HypothesisClass::two_point_grid(config.h_size);

    for (double eps : config.eps_grid) {
        ExpMechanismLearner learner(hs, eps, config.m);
        RngStream row_rng = rng.child("chain-eps", static_cast<std::uint64_t>(eps * 1e6));
        rows.push_back(verify_chain_row(learner, p_data, config.m, config.n_runs, row_rng));
    }
    if (config.include_controls) {
        ConstantLearner constant;
        RngStream c_rng = rng.child("chain-const");
        rows.push_back(verify_chain_row(constant, p_data, config.m, config.n_runs, c_rng));

        // The memorizer only shows its gap on a continuous distribution
        // (every two-point sample is itself a support point).
        MemorizingLearner memorizer;
        RingSampler ring;
        RngStream m_rng = rng.child("chain-memo");
        rows.push_back(verify_chain_row(memorizer, ring, config.m,
                                        std::min<std::size_t>(config.n_runs, 32), m_rng));

        ArgmaxLearner argmax(hs);
        RngStream a_rng = rng.child("chain-argmax");
        rows.push_back(verify_chain_row(argmax, p_data, config.m, config.n_runs, a_rng));
    }
    return rows;
}

void write_chain_csv(const std::string& path, const std::vector<ChainRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write chain csv: " + path);
    out << "mechanism,epsilon,stability_bound,stability_measured,stability_ci,"
           "gap_measured,gap_ci,pass\n";
    out.precision(12);
    for (const ChainRow& r : rows) {
        out << r.mechanism << ",";
        if (r.has_epsilon) {
            out << r.epsilon << "," << r.stability_bound << ",";
        } else {
            out << "N/A,N/A,";
        }
        out << r.stability.eps_stable << "," << r.stability.ci_half_width << "," << r.gap.f_u
            << "," << r.gap.ci_half_width << ",";
        if (!r.chain_applicable) {
            out << "N/A";
        } else {
            out << ((r.stability_ok && r.gap_ok) ? "pass" : "FAIL");
        }
        out << "\n";
    }
}

std::string chain_summary(const std::vector<ChainRow>& rows) {
    std::ostringstream os;
    os.precision(6);
    for (const ChainRow& r : rows) {
        os << r.mechanism << ": ";
        if (!r.chain_applicable) {
            os << "non-private mechanism, chain check N/A; measured gap " << r.gap.f_u
               << " +/- " << r.gap.ci_half_width << "\n";
            continue;
        }
        os << "eps=" << r.epsilon << " bound=" << r.stability_bound
           << " stability=" << r.stability.eps_stable;
        if (!r.stability.exact) os << " +/- " << r.stability.ci_half_width;
        os << " gap=" << r.gap.f_u;
        if (!r.gap.exact) os << " +/- " << r.gap.ci_half_width;
        os << (r.stability_ok && r.gap_ok ? "  [pass]" : "  [FAIL]") << "\n";
    }
    return os.str();
}

// ---- uniform convergence ------------------------------------------------------

namespace {

// Flattened per-example gradient of the discriminator loss
//   phi(d(x_i)) + phi(1 - d(fake_i)),   phi = identity
// with respect to every parameter (ascent direction).
Tensor per_example_gradient(const gan::Discriminator& d, const Tensor& x, const Tensor& fake,
                            engine::RngStream& rng) {
    Tape tape;
    std::vector<Var> leaves;
    Var xv = tape.leaf(x.reshaped(Shape{1, x.numel()}));
    Var fv = tape.leaf(fake.reshaped(Shape{1, fake.numel()}));
    Var dx = d.forward(tape, xv, false, rng, &leaves);
    Var df = d.forward(tape, fv, false, rng, &leaves);
    using namespace engine;
    Var loss = add(sum(dx), sum(add_scalar(neg(df), 1.0)));
    std::vector<Tensor> grads = tape.backward(loss, leaves);
    std::size_t total = 0;
    for (const Tensor& g : grads) total += g.numel();
    Tensor flat(Shape{total});
    std::size_t off = 0;
    for (const Tensor& g : grads) {
        for (std::size_t i = 0; i < g.numel(); ++i) flat[off + i] = g[i];
        off += g.numel();
    }
    return flat;
}

void apply_flat_ascent(std::vector<engine::Parameter>& params, const Tensor& flat, double lr) {
    std::size_t off = 0;
    for (engine::Parameter& p : params) {
        for (std::size_t i = 0; i < p.value.numel(); ++i) p.value[i] += lr * flat[off + i];
        off += p.value.numel();
    }
}

double real_term_mean(const gan::Discriminator& d, const Tensor& batch) {
    std::vector<double> s = d.scores(batch);
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc / static_cast<double>(s.size());
}

}  // namespace

UcReport verify_uniform_convergence(const DataSampler& p_data, const DataSampler& p_fake,
                                    const NoisyTrainConfig& config, std::size_t n_runs,
                                    RngStream& rng) {
    if (n_runs < 2) throw ConfigError("uniform convergence: n_runs must be >= 2");
    if (p_fake.dim() != p_data.dim()) {
        throw ConfigError("uniform convergence: fake and data dims differ");
    }

    UcReport report;
    report.t_grid = config.t_grid;
    report.n_runs = n_runs;
    report.m = config.m;
    report.eps_per_step = config.eps_per_step();

    std::vector<std::size_t> checkpoints{0};
    for (std::size_t k = config.checkpoint_every; k < config.steps; k += config.checkpoint_every) {
        checkpoints.push_back(k);
    }
    checkpoints.push_back(config.steps);

    // gaps[c][run] = U_hat - U of the real-data term at checkpoint c
    std::vector<std::vector<double>> gaps(checkpoints.size());

    const std::size_t dim = p_data.dim();
    const std::size_t eval_n = std::max<std::size_t>(config.eval_factor * config.m, 100);

    for (std::size_t run = 0; run < n_runs; ++run) {
        RngStream run_rng = rng.child("uc-run", run);
        RngStream data_rng = run_rng.child("data");
        RngStream noise_rng = run_rng.child("noise");
        RngStream init_rng = run_rng.child("init");

        Tensor s_batch(Shape{config.m, dim});
        for (std::size_t i = 0; i < config.m; ++i) {
            const Tensor x = p_data.sample(data_rng);
            for (std::size_t j = 0; j < dim; ++j) s_batch.at(i, j) = x[j];
        }
        // Frozen fakes per run: a fixed generator output surrogate.
        Tensor fakes(Shape{config.m, dim});
        for (std::size_t i = 0; i < config.m; ++i) {
            const Tensor x = p_fake.sample(data_rng);
            for (std::size_t j = 0; j < dim; ++j) fakes.at(i, j) = x[j];
        }
        Tensor eval_batch(Shape{eval_n, dim});
        for (std::size_t i = 0; i < eval_n; ++i) {
            const Tensor x = p_data.sample(data_rng);
            for (std::size_t j = 0; j < dim; ++j) eval_batch.at(i, j) = x[j];
        }

        gan::Discriminator d(dim, config.hidden, /*with_sigmoid=*/true, init_rng);

        std::size_t next_cp = 0;
        auto record = [&](std::size_t k) {
            if (next_cp < checkpoints.size() && checkpoints[next_cp] == k) {
                const double emp = real_term_mean(d, s_batch);
                const double pop = real_term_mean(d, eval_batch);
                gaps[next_cp].push_back(emp - pop);
                ++next_cp;
            }
        };

        record(0);
        for (std::size_t k = 1; k <= config.steps; ++k) {
            std::vector<Tensor> per_example;
            per_example.reserve(config.m);
            for (std::size_t i = 0; i < config.m; ++i) {
                Tensor x(Shape{dim}), f(Shape{dim});
                for (std::size_t j = 0; j < dim; ++j) {
                    x[j] = s_batch.at(i, j);
                    f[j] = fakes.at(i, j);
                }
                per_example.push_back(per_example_gradient(d, x, f, noise_rng));
            }
            Tensor noisy = noisy_clipped_mean_gradient(per_example, config.clip_norm,
                                                       config.laplace_scale, noise_rng);
            apply_flat_ascent(d.params(), noisy, config.lr);
            record(k);
        }
    }

    const double eps_total =
        static_cast<double>(config.steps) * report.eps_per_step;

    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        UcCheckpointRow row;
        row.k = checkpoints[c];
        row.eps_cum = static_cast<double>(row.k) * report.eps_per_step;
        double mx = 0.0, acc = 0.0;
        for (double g : gaps[c]) {
            mx = std::max(mx, std::abs(g));
            acc += std::abs(g);
        }
        row.max_abs_gap = mx;
        row.mean_abs_gap = acc / static_cast<double>(gaps[c].size());
        for (double t : config.t_grid) {
            std::size_t count = 0;
            for (double g : gaps[c]) {
                if (std::abs(g) >= t) ++count;
            }
            const double freq = static_cast<double>(count) / static_cast<double>(gaps[c].size());
            row.exceed_freq.push_back(freq);
            const double bound =
                row.k == 0 ? 0.0 : mcdiarmid_tail(t, config.m, row.eps_cum).capped;
            row.bound.push_back(bound);
            row.bound_total_eps.push_back(mcdiarmid_tail(t, config.m, eps_total).capped);
            if (row.k >= 1 && freq > bound) row.ok = false;
            if (row.k == 0 && freq > 0.0) row.ok = false;  // handled by the 3-sigma check too
        }
        report.rows.push_back(std::move(row));
    }

    // k = 0: data untouched, the gap is pure sampling noise.
    const MeanVar mv0 = mean_and_se2(gaps[0]);
    report.k0_mean_gap = mv0.mean;
    report.k0_se = std::sqrt(mv0.var);
    report.k0_ok = std::abs(mv0.mean) <= 3.0 * std::max(report.k0_se, 1e-12);

    report.pass = report.k0_ok;
    for (const UcCheckpointRow& row : report.rows) {
        if (row.k >= 1 && !row.ok) report.pass = false;
    }
    return report;
}

void write_uc_csv(const std::string& path, const UcReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write uc csv: " + path);
    out << "k,eps_cum";
    for (double t : report.t_grid) out << ",freq_t" << t << ",bound_t" << t;
    out << ",mean_abs_gap,max_abs_gap,ok\n";
    out.precision(12);
    for (const UcCheckpointRow& r : report.rows) {
        out << r.k << "," << r.eps_cum;
        for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
            out << "," << r.exceed_freq[i] << "," << r.bound[i];
        }
        out << "," << r.mean_abs_gap << "," << r.max_abs_gap << "," << (r.ok ? "1" : "0")
            << "\n";
    }
}

std::string uc_summary(const UcReport& report) {
    std::ostringstream os;
    os.precision(6);
    os << "uniform convergence: " << report.n_runs << " runs, m=" << report.m
       << ", eps/step=" << report.eps_per_step << "\n";
    os << "k=0 sampling-noise gap " << report.k0_mean_gap << " (se " << report.k0_se << ") "
       << (report.k0_ok ? "[ok]" : "[FAIL]") << "\n";
    for (const UcCheckpointRow& r : report.rows) {
        if (r.k == 0) continue;
        os << "k=" << r.k << " eps=" << r.eps_cum << " max|gap|=" << r.max_abs_gap
           << (r.ok ? "  [ok]" : "  [FAIL]") << "\n";
    }
    os << (report.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace ganlab::privacy
