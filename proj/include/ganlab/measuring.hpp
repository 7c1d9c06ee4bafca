#pragma once

#include "ganlab/tape.hpp"

namespace ganlab::gan {

// The scalar map applied to discriminator outputs inside the adversarial
// objective: log for the JS-style game, identity for the Wasserstein-style
// one.
struct MeasuringFunction {
    enum class Kind { Log, Identity };
    Kind kind = Kind::Log;

    static MeasuringFunction log_phi() { return {Kind::Log}; }
    static MeasuringFunction identity() { return {Kind::Identity}; }
    bool is_log() const { return kind == Kind::Log; }
};

// Exact pointwise application. Log requires t > 0 and throws DomainError
// otherwise; no clamping happens here.
double measuring_apply(MeasuringFunction phi, double t);

// Bounds used to keep Log away from 0 during training. The clamp width is
// the documented deviation from the exact objective.
inline constexpr double kLogGuardLo = 1e-7;
inline constexpr double kLogGuardHi = 1.0 - 1e-7;

// Taped application for loss graphs. In Log mode the argument is clamped to
// [kLogGuardLo, kLogGuardHi] first so saturated discriminators do not take
// the whole run down with log(0).
engine::Var measuring_apply(MeasuringFunction phi, engine::Var t);

}  // namespace ganlab::gan
