#pragma once

#include <stdexcept>
#include <string>

namespace evrisk {

/// Base class for all library errors. Every subclass carries a
/// human-readable message with input context (file, row, snapshot key).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define EVRISK_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

// data ingestion
EVRISK_DEFINE_ERROR(MalformedRow);
EVRISK_DEFINE_ERROR(InvariantViolation);
EVRISK_DEFINE_ERROR(EmptyFile);
EVRISK_DEFINE_ERROR(AmbiguousPhase);
EVRISK_DEFINE_ERROR(MissingPhase);

// grid construction
EVRISK_DEFINE_ERROR(CollisionError);
EVRISK_DEFINE_ERROR(StepTooCoarse);
EVRISK_DEFINE_ERROR(GridTooSmall);

// fitting
EVRISK_DEFINE_ERROR(SingularSystem);

// pricing
EVRISK_DEFINE_ERROR(DomainError);

// density
EVRISK_DEFINE_ERROR(DegenerateDensity);

// shape
EVRISK_DEFINE_ERROR(TooFewObservations);
EVRISK_DEFINE_ERROR(OffGridOffset);

// strategies
EVRISK_DEFINE_ERROR(ZeroPrice);
EVRISK_DEFINE_ERROR(GridTooNarrow);

// reporting / io
EVRISK_DEFINE_ERROR(UnknownMetric);
EVRISK_DEFINE_ERROR(IoError);

#undef EVRISK_DEFINE_ERROR

}  // namespace evrisk
