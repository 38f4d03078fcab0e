#pragma once

#include <stdexcept>
#include <string>

namespace evifuse {

/// Base class for every error raised by this library. Catching this is enough
/// to distinguish library failures from programming errors (std::logic_error)
/// or OS-level trouble.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- frame / evidence -------------------------------------------------------

struct DuplicateLabelError : Error {
    using Error::Error;
};
struct TooFewLabelsError : Error {
    using Error::Error;
};
struct LabelNotInFrameError : Error {
    using Error::Error;
};
struct FrameMismatchError : Error {
    using Error::Error;
};
/// Dempster combination of two irreconcilable sources (conflict >= 1 - eps).
struct TotalConflictError : Error {
    using Error::Error;
};
struct EmptyListError : Error {
    using Error::Error;
};

// --- mass construction ------------------------------------------------------

struct InvalidMassError : Error {
    using Error::Error;
};
/// Sensitivity exponent below the supported floor (F >= 2).
struct SensitivityTooSmallError : Error {
    using Error::Error;
};
struct InvalidWeightError : Error {
    using Error::Error;
};

// --- data handling ----------------------------------------------------------

struct FileNotFoundError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct MissingLabelColumnError : Error {
    using Error::Error;
};
struct ClassTooSmallError : Error {
    using Error::Error;
};
struct FeatureMismatchError : Error {
    using Error::Error;
};

// --- classifiers ------------------------------------------------------------

struct EmptyTrainingSetError : Error {
    using Error::Error;
};
struct UnknownLabelError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct EmptyGridError : Error {
    using Error::Error;
};

// --- rule engine / knowledge base -------------------------------------------

struct MissingVariableError : Error {
    using Error::Error;
};
struct DuplicateTupleError : Error {
    using Error::Error;
};

// --- update / metrics -------------------------------------------------------

/// Retraining requested while the detector has not collected enough data.
struct NotReadyError : Error {
    using Error::Error;
};
struct LengthMismatchError : Error {
    using Error::Error;
};

// --- configuration ----------------------------------------------------------

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace evifuse
