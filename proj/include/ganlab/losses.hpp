#pragma once

#include "ganlab/measuring.hpp"
#include "ganlab/nets.hpp"

namespace ganlab::gan {

// Empirical discriminator utility
//   U_hat = mean_x phi(d(x)) + mean_z phi(1 - d(g(z)))
// with the generator treated as fixed (fake_batch is already g(z)). The
// discriminator ascends this; training descends on its negation. When
// d_leaves is given it receives (or reuses) the discriminator's parameter
// leaf Vars.
engine::Var disc_utility(engine::Tape& tape, const Discriminator& d,
                         const engine::Tensor& real_batch, const engine::Tensor& fake_batch,
                         MeasuringFunction phi, bool update_state, engine::RngStream& rng,
                         std::vector<engine::Var>* d_leaves = nullptr);

// Empirical generator loss V_hat = mean_z phi(1 - d(g(z))). The
// non-saturating alternative -mean_z phi(d(g(z))) shares its gradients'
// sign structure and is selectable by flag.
engine::Var gen_loss(engine::Tape& tape, const Discriminator& d, const Generator& g,
                     const engine::Tensor& noise_batch, MeasuringFunction phi,
                     bool non_saturating, engine::RngStream& rng,
                     std::vector<engine::Var>* g_leaves = nullptr);

// ---- numeric (tape-local) evaluations ---------------------------------

// mean_x phi(d(x)) over a batch; exact phi, no log clamp: a saturated
// discriminator surfaces as a DomainError here rather than a skewed value.
double real_term_value(const Discriminator& d, const engine::Tensor& batch,
                       MeasuringFunction phi);

// mean_z phi(1 - d(fake)) over an already generated batch.
double fake_term_value(const Discriminator& d, const engine::Tensor& fake_batch,
                       MeasuringFunction phi);

double disc_utility_value(const Discriminator& d, const engine::Tensor& real_batch,
                          const engine::Tensor& fake_batch, MeasuringFunction phi);

double gen_loss_value(const Discriminator& d, const engine::Tensor& fake_batch,
                      MeasuringFunction phi, bool non_saturating);

// Guarded variants mirror the training objective's Log clamp, so loss-curve
// recording survives saturated discriminators instead of aborting the run.
double real_term_value_guarded(const Discriminator& d, const engine::Tensor& batch,
                               MeasuringFunction phi);
double fake_term_value_guarded(const Discriminator& d, const engine::Tensor& fake_batch,
                               MeasuringFunction phi);
double gen_loss_value_guarded(const Discriminator& d, const engine::Tensor& fake_batch,
                              MeasuringFunction phi, bool non_saturating);

}  // namespace ganlab::gan
