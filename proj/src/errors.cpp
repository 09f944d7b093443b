#include "harvestsim/errors.hpp"

namespace harvest {

const char* fault_name(Fault f) {
    switch (f) {
    case Fault::OutOfReach: return "out-of-reach";
    case Fault::LimitViolation: return "limit-violation";
    case Fault::InvalidHorizon: return "invalid-horizon";
    case Fault::SingularityGuard: return "singularity-guard";
    case Fault::NoValidDepth: return "no-valid-depth";
    case Fault::OutOfView: return "out-of-view";
    case Fault::InvalidTransform: return "invalid-transform";
    case Fault::LimitBreach: return "limit-breach";
    case Fault::ConfigError: return "config-error";
    case Fault::IoError: return "io-error";
    }
    return "unknown";
}

} // namespace harvest
