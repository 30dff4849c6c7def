#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iddm {

enum class ErrorKind {
    InvalidParameter,
    NonPositiveF1,
    ZeroDetuning,
    DomainError,
    ChiUnsupported,
    UnboundedPhase,
    ZeroKappa,
    ConvergenceFailure,
    UnstableEquilibrium,
    DimensionTooLarge,
    ZeroProbabilityOutcome,
    Unreachable,
};

/// Snake-case tag for an error kind, used in CSV error columns and CLI messages.
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace iddm
