#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptsym {

enum class ErrorKind {
  Dimension,
  InvalidInput,
  NotPsd,
  IllConditioned,
  Validation,
  Precondition,
  NotPtSymmetric,
  BrokenHamiltonian,
  CriticalPoint,
  DegeneratePostSelection,
  Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::NotPsd: return "not_psd";
    case ErrorKind::IllConditioned: return "ill_conditioned";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::NotPtSymmetric: return "not_pt_symmetric";
    case ErrorKind::BrokenHamiltonian: return "broken_hamiltonian";
    case ErrorKind::CriticalPoint: return "critical_point";
    case ErrorKind::DegeneratePostSelection: return "degenerate_postselection";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

/// Base of every exception thrown by the library. `kind()` is stable and
/// machine readable; `what()` carries a human readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical failure that carries the residual actually achieved.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& message, double achieved_residual)
      : Error(ErrorKind::IllConditioned, message), residual_(achieved_residual) {}

  double achieved_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ptsym
