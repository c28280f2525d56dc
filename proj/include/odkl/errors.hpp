#pragma once

#include <stdexcept>
#include <string>

namespace odkl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConnectivityFailure : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct CodeOutOfRange : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct EmptyDataset : Error {
    using Error::Error;
};
struct TooFewSamples : Error {
    using Error::Error;
};
struct UnsupportedLoss : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct MismatchedExperiment : Error {
    using Error::Error;
};
struct DegenerateRegret : Error {
    using Error::Error;
};

} // namespace odkl
