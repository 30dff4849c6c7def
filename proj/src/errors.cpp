#include "iddm/errors.hpp"

namespace iddm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid_parameter";
        case ErrorKind::NonPositiveF1: return "non_positive_f1";
        case ErrorKind::ZeroDetuning: return "zero_detuning";
        case ErrorKind::DomainError: return "domain_error";
        case ErrorKind::ChiUnsupported: return "chi_unsupported";
        case ErrorKind::UnboundedPhase: return "unbounded_phase";
        case ErrorKind::ZeroKappa: return "zero_kappa";
        case ErrorKind::ConvergenceFailure: return "convergence_failure";
        case ErrorKind::UnstableEquilibrium: return "unstable_equilibrium";
        case ErrorKind::DimensionTooLarge: return "dimension_too_large";
        case ErrorKind::ZeroProbabilityOutcome: return "zero_probability_outcome";
        case ErrorKind::Unreachable: return "unreachable";
    }
    return "unknown";
}

}  // namespace iddm
