#pragma once

#include <stdexcept>
#include <string>

namespace qaforge {

// Base class for all toolkit errors. `kind()` is a stable machine-readable
// name used by the CLI when emitting error JSON on stderr.
class Error : public std::runtime_error {
public:
  explicit Error(std::string message) : std::runtime_error(std::move(message)) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define QAFORGE_DEFINE_ERROR(Name)                                             \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
    const char* kind() const noexcept override { return #Name; }               \
  }

QAFORGE_DEFINE_ERROR(ParseError);
QAFORGE_DEFINE_ERROR(IoError);
QAFORGE_DEFINE_ERROR(EmptyCorpus);
QAFORGE_DEFINE_ERROR(DimensionMismatch);
QAFORGE_DEFINE_ERROR(OffsetError);
QAFORGE_DEFINE_ERROR(ProviderUnavailable);
QAFORGE_DEFINE_ERROR(MissingResult);
QAFORGE_DEFINE_ERROR(UnresolvedSource);
QAFORGE_DEFINE_ERROR(MissingPrediction);
QAFORGE_DEFINE_ERROR(ConfigError);

#undef QAFORGE_DEFINE_ERROR

} // namespace qaforge
