#pragma once

#include <stdexcept>
#include <string>

namespace gazecone {

// Base class for every error raised by the library. Each subclass names one
// failure mode so callers can catch exactly what they can recover from.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GAZECONE_DEFINE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

GAZECONE_DEFINE_ERROR(InvalidRotation);
GAZECONE_DEFINE_ERROR(BehindCamera);
GAZECONE_DEFINE_ERROR(DegenerateSkeleton);
GAZECONE_DEFINE_ERROR(DegenerateHead);
GAZECONE_DEFINE_ERROR(DegenerateInit);
GAZECONE_DEFINE_ERROR(DegenerateProblem);
GAZECONE_DEFINE_ERROR(NumericalFailure);
GAZECONE_DEFINE_ERROR(NotInFront);
GAZECONE_DEFINE_ERROR(ConfigError);
GAZECONE_DEFINE_ERROR(AlignmentError);
GAZECONE_DEFINE_ERROR(IoError);

#undef GAZECONE_DEFINE_ERROR

// Malformed structured input. Carries the 1-based line number when known.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace gazecone
