#pragma once

#include <stdexcept>
#include <string>

namespace shufflecast {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model-core
struct EmptyInput : Error { using Error::Error; };
struct InconsistentDimension : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };

// metrics
struct LengthMismatch : Error { using Error::Error; };
struct ZeroActual : Error { using Error::Error; };
struct DegenerateActuals : Error { using Error::Error; };

// shuffle-sim
struct InvalidConfig : Error { using Error::Error; };
struct ExhaustedSpace : Error { using Error::Error; };

// ingest
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& field, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ", " + field + ": " + what),
          line(line), field(field) {}
    explicit ParseError(const std::string& what) : Error(what), line(0) {}
    std::size_t line;
    std::string field;
};
struct MissingHeader : Error { using Error::Error; };
struct NegativeValue : Error { using Error::Error; };
struct UnknownInterface : Error { using Error::Error; };
struct NonMonotonicTimestamps : Error { using Error::Error; };
struct WindowOutOfRange : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct MixedInputSize : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };

}  // namespace shufflecast
