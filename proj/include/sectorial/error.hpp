#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sectorial {

enum class ErrorKind {
    SingularMatrix,
    NoConvergence,
    ClusterOverlap,
    Overflow,
    OnCut,
    BadParameters,
    SpectrumOnCut,
    FormsDisagree,
    SingularOperator,
    BranchViolation,
    DiagonalDivergence,
    TooSlowDecay,
    SpectrumHit,
    TailUnknown,
    IllConditionedFit,
    PoleHit,
    IndexViolation,
    UnknownExperiment,
    InvalidParameters,
};

std::string_view to_string(ErrorKind kind);

/// Every numerical failure in the library is reported through this type.
class NumericError : public std::runtime_error {
public:
    NumericError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw NumericError(kind, what);
}

} // namespace sectorial
