#include "raisac/error.hpp"

namespace raisac {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InfeasibleSensing: return "InfeasibleSensing";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ZeroHoverTime: return "ZeroHoverTime";
    case ErrorKind::DegenerateSensing: return "DegenerateSensing";
    case ErrorKind::InfeasiblePair: return "InfeasiblePair";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace raisac
