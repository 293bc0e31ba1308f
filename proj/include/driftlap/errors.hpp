#pragma once

#include <stdexcept>
#include <string>

namespace driftlap {

// Reasons an evaluation can be refused rather than silently producing junk.
enum class ErrorKind {
    ZeroBase,           // complex power/log at base 0 (the singular point itself)
    BranchGuard,        // base argument within guard_margin of the principal cut
    SingularPoint,      // candidate evaluated where it is not defined
    ExcludedParameter,  // (p, L) on the excluded locus where the exponent degenerates
    DegenerateGradient, // horizontal gradient vanishes where the operator needs it
    DegenerateLine,     // Grushin point too close to the degenerate line
    ConfigInvalid,      // malformed configuration (bad p, shape, tolerance, ...)
    ResolutionTooLow,   // quadrature resolution below the trusted minimum
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::ZeroBase: return "ZeroBase";
        case ErrorKind::BranchGuard: return "BranchGuard";
        case ErrorKind::SingularPoint: return "SingularPoint";
        case ErrorKind::ExcludedParameter: return "ExcludedParameter";
        case ErrorKind::DegenerateGradient: return "DegenerateGradient";
        case ErrorKind::DegenerateLine: return "DegenerateLine";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
    }
    return "Unknown";
}

class EvalError : public std::runtime_error {
public:
    EvalError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace driftlap
