#pragma once

#include <stdexcept>
#include <string>

namespace smap {

/// Base class for every failure raised by the library. `name()` is the stable
/// identifier printed by the CLI when a numeric error aborts a run.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define SMAP_DEFINE_ERROR(Type)                                  \
  class Type : public Error {                                    \
   public:                                                       \
    explicit Type(const std::string& what) : Error(#Type, what) {} \
  }

SMAP_DEFINE_ERROR(ChartViolation);
SMAP_DEFINE_ERROR(RepresentationMismatch);
SMAP_DEFINE_ERROR(AxisOutOfRange);
SMAP_DEFINE_ERROR(GridMismatch);
SMAP_DEFINE_ERROR(NoContraction);
SMAP_DEFINE_ERROR(MaxIterExceeded);
SMAP_DEFINE_ERROR(InnerDivergence);
SMAP_DEFINE_ERROR(DegenerateInput);
SMAP_DEFINE_ERROR(WindowTooShort);
SMAP_DEFINE_ERROR(UnsupportedDirection);
SMAP_DEFINE_ERROR(EmptyEnsemble);
SMAP_DEFINE_ERROR(InvalidGrid);
SMAP_DEFINE_ERROR(FormatError);
SMAP_DEFINE_ERROR(ConfigError);
SMAP_DEFINE_ERROR(ValidationFailure);

#undef SMAP_DEFINE_ERROR

}  // namespace smap
