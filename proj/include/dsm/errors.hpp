#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };
struct BoxViolation : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct PoleHit : Error { using Error::Error; };
struct ContourInfeasible : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularPoint : Error { using Error::Error; };
struct DivergentIntegral : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };
struct RootCountMismatch : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct CriticalRegime : Error { using Error::Error; };
struct NotCritical : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };

}  // namespace dsm
