#pragma once

#include <stdexcept>
#include <string>

namespace sigmark {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pattern construction.
struct InvalidSpec : Error {
  using Error::Error;
};
struct NyquistViolation : InvalidSpec {
  using InvalidSpec::InvalidSpec;
};

// Providers.
struct ProviderError : Error {
  using Error::Error;
};
struct RemoteError : ProviderError {
  using ProviderError::ProviderError;
};
struct EmptyVocabulary : ProviderError {
  using ProviderError::ProviderError;
};

// Re-computation and detection.
struct EmptyText : Error {
  using Error::Error;
};
struct SeriesTooShort : Error {
  using Error::Error;
};
struct TextTooShort : Error {
  using Error::Error;
};
struct EmptyKeySet : Error {
  using Error::Error;
};

// Metrics and harness.
struct EmptyClass : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct UnknownExperiment : Error {
  using Error::Error;
};
struct FileError : Error {
  using Error::Error;
};

}  // namespace sigmark
