#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loggas {

// Base error carrying a stable machine-readable kind tag. The CLI maps
// kinds to exit codes and error JSON; tests match on concrete types.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LOGGAS_DEFINE_ERROR(NAME)                                      \
  struct NAME final : Error {                                          \
    explicit NAME(const std::string& m) : Error(#NAME, m) {}           \
  }

// torus_config
LOGGAS_DEFINE_ERROR(DuplicatePoint);
LOGGAS_DEFINE_ERROR(BadLength);
LOGGAS_DEFINE_ERROR(AmplitudeTooLarge);
LOGGAS_DEFINE_ERROR(NonFiniteInput);

// renorm_energy
LOGGAS_DEFINE_ERROR(NearCoincidence);
LOGGAS_DEFINE_ERROR(NonpositiveDensity);
LOGGAS_DEFINE_ERROR(ZeroDefect);
LOGGAS_DEFINE_ERROR(MaxIterations);

// electric_field
LOGGAS_DEFINE_ERROR(AtCharge);
LOGGAS_DEFINE_ERROR(MeshTooCoarse);
LOGGAS_DEFINE_ERROR(InvalidSpec);

// point_process
LOGGAS_DEFINE_ERROR(WindowTooSmall);
LOGGAS_DEFINE_ERROR(QuadratureFailure);
LOGGAS_DEFINE_ERROR(ZeroGap);

// gibbs
LOGGAS_DEFINE_ERROR(Coincidence);
LOGGAS_DEFINE_ERROR(OrderingCollapse);
LOGGAS_DEFINE_ERROR(BadSchedule);
LOGGAS_DEFINE_ERROR(EmptyWindow);
LOGGAS_DEFINE_ERROR(SolverFailure);

// cli / io
LOGGAS_DEFINE_ERROR(ParseError);
LOGGAS_DEFINE_ERROR(FileNotFound);

#undef LOGGAS_DEFINE_ERROR

}  // namespace loggas
