#pragma once

#include <stdexcept>
#include <string>

namespace harvest {

enum class Fault {
    OutOfReach,       // target outside the reachable workspace
    LimitViolation,   // joint value outside configured limits
    InvalidHorizon,   // nonpositive trajectory duration
    SingularityGuard, // commanded through a pose too close to cos() = 0
    NoValidDepth,     // range matrix held no usable samples
    OutOfView,        // target projects outside the image
    InvalidTransform, // rotation fails orthonormality checks
    LimitBreach,      // integration drove a joint past hard limits
    ConfigError,      // malformed or contradictory configuration
    IoError,
};

class Error : public std::runtime_error {
  public:
    Error(Fault fault, const std::string& what) : std::runtime_error(what), fault_(fault) {}

    Fault fault() const { return fault_; }

  private:
    Fault fault_;
};

const char* fault_name(Fault f);

} // namespace harvest
