#include "ganlab/losses.hpp"

#include "ganlab/errors.hpp"

namespace ganlab::gan {

using engine::Tape;
using engine::Tensor;
using engine::Var;

Var disc_utility(Tape& tape, const Discriminator& d, const Tensor& real_batch,
                 const Tensor& fake_batch, MeasuringFunction phi, bool update_state,
                 engine::RngStream& rng, std::vector<Var>* d_leaves) {
    using namespace engine;
    if (real_batch.rows() != fake_batch.rows()) {
        throw ShapeError("disc_utility: real and fake batch sizes differ");
    }
    Var xr = tape.leaf(real_batch);
    Var xf = tape.leaf(fake_batch);
    Var d_real = d.forward(tape, xr, update_state, rng, d_leaves);
    // State advanced at most once per step; the second pass reuses leaves
    // and the already-updated spectral state.
    Var d_fake = d.forward(tape, xf, false, rng, d_leaves);
    Var term_real = mean(measuring_apply(phi, d_real));
    Var term_fake = mean(measuring_apply(phi, add_scalar(neg(d_fake), 1.0)));
    return add(term_real, term_fake);
}

Var gen_loss(Tape& tape, const Discriminator& d, const Generator& g, const Tensor& noise_batch,
             MeasuringFunction phi, bool non_saturating, engine::RngStream& rng,
             std::vector<Var>* g_leaves) {
    using namespace engine;
    Var z = tape.leaf(noise_batch);
    Var fake = g.forward(tape, z, g_leaves);
    Var d_fake = d.forward(tape, fake, false, rng);
    if (non_saturating) {
        return neg(mean(measuring_apply(phi, d_fake)));
    }
    return mean(measuring_apply(phi, add_scalar(neg(d_fake), 1.0)));
}

double real_term_value(const Discriminator& d, const Tensor& batch, MeasuringFunction phi) {
    std::vector<double> s = d.scores(batch);
    double acc = 0.0;
    for (double v : s) acc += measuring_apply(phi, v);
    return acc / static_cast<double>(s.size());
}

double fake_term_value(const Discriminator& d, const Tensor& fake_batch, MeasuringFunction phi) {
    std::vector<double> s = d.scores(fake_batch);
    double acc = 0.0;
    for (double v : s) acc += measuring_apply(phi, 1.0 - v);
    return acc / static_cast<double>(s.size());
}

double disc_utility_value(const Discriminator& d, const Tensor& real_batch,
                          const Tensor& fake_batch, MeasuringFunction phi) {
    return real_term_value(d, real_batch, phi) + fake_term_value(d, fake_batch, phi);
}

double gen_loss_value(const Discriminator& d, const Tensor& fake_batch, MeasuringFunction phi,
                      bool non_saturating) {
    std::vector<double> s = d.scores(fake_batch);
    double acc = 0.0;
    for (double v : s) {
        acc += non_saturating ? -measuring_apply(phi, v) : measuring_apply(phi, 1.0 - v);
    }
    return acc / static_cast<double>(s.size());
}

namespace {

double guard(MeasuringFunction phi, double t) {
    if (phi.is_log()) {
        if (t < kLogGuardLo) t = kLogGuardLo;
        if (t > kLogGuardHi) t = kLogGuardHi;
    }
    return t;
}

}  // namespace

double real_term_value_guarded(const Discriminator& d, const Tensor& batch,
                               MeasuringFunction phi) {
    std::vector<double> s = d.scores(batch);
    double acc = 0.0;
    for (double v : s) acc += measuring_apply(phi, guard(phi, v));
    return acc / static_cast<double>(s.size());
}

double fake_term_value_guarded(const Discriminator& d, const Tensor& fake_batch,
                               MeasuringFunction phi) {
    std::vector<double> s = d.scores(fake_batch);
    double acc = 0.0;
    for (double v : s) acc += measuring_apply(phi, guard(phi, 1.0 - v));
    return acc / static_cast<double>(s.size());
}

double gen_loss_value_guarded(const Discriminator& d, const Tensor& fake_batch,
                              MeasuringFunction phi, bool non_saturating) {
    std::vector<double> s = d.scores(fake_batch);
    double acc = 0.0;
    for (double v : s) {
        acc += non_saturating ? -measuring_apply(phi, guard(phi, v))
                              : measuring_apply(phi, guard(phi, 1.0 - v));
    }
    return acc / static_cast<double>(s.size());
}

}  // namespace ganlab::gan
