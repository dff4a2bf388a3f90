#pragma once

#include <stdexcept>
#include <string>

namespace grasplite {

// Contract violations surface as typed exceptions so callers (and tests)
// can distinguish them from generic runtime failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct DegenerateRepresentation : Error {
  using Error::Error;
};
struct WrongHorizon : Error {
  using Error::Error;
};
struct EmptyBuffer : Error {
  using Error::Error;
};
struct MaskMismatch : Error {
  using Error::Error;
};
struct Uninitialized : Error {
  using Error::Error;
};
struct EpisodeOver : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct InvalidCount : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct RaggedRows : Error {
  using Error::Error;
};
struct TooFewSamples : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct CheckpointError : Error {
  using Error::Error;
};

}  // namespace grasplite
