#include "ganlab/measuring.hpp"

#include <cmath>
#include <string>

#include "ganlab/errors.hpp"

namespace ganlab::gan {

double measuring_apply(MeasuringFunction phi, double t) {
    switch (phi.kind) {
        case MeasuringFunction::Kind::Identity:
            return t;
        case MeasuringFunction::Kind::Log:
            if (!(t > 0.0)) {
                throw DomainError("measuring function log requires t > 0, got " +
                                  std::to_string(t));
            }
            return std::log(t);
    }
    throw DomainError("unknown measuring function");
}

engine::Var measuring_apply(MeasuringFunction phi, engine::Var t) {
    using namespace engine;
    switch (phi.kind) {
        case MeasuringFunction::Kind::Identity:
            return t;
        case MeasuringFunction::Kind::Log:
            return log_(clamp(t, kLogGuardLo, kLogGuardHi));
    }
    throw DomainError("unknown measuring function");
}

}  // namespace ganlab::gan
