#pragma once

#include <stdexcept>
#include <string>

namespace paranls {

// One exception type per failure class so callers and the CLI can map them
// to exit codes without parsing messages.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct StructureError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct RepresentationError : Error { using Error::Error; };
struct CapabilityError : Error { using Error::Error; };
struct MeasurementError : Error { using Error::Error; };
struct SmallDataViolation : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct SmallDivisorError : Error { using Error::Error; };
struct HypothesisViolation : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct BudgetError : Error { using Error::Error; };

}  // namespace paranls
