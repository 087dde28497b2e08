#pragma once

#include <stdexcept>
#include <string>

namespace neei {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario / input validation
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};

// Channel layer
struct TargetOnElement : Error {
    using Error::Error;
};
struct ZeroChannel : Error {
    using Error::Error;
};
struct ZeroGain : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};

// Kinematics / planning
struct ControlLimitViolation : Error {
    using Error::Error;
};
struct NoFeasiblePlan : Error {
    using Error::Error;
};

// Solvers / oracles
struct TooManyFramesForExact : Error {
    using Error::Error;
};
struct InstanceTooLarge : Error {
    using Error::Error;
};

} // namespace neei
