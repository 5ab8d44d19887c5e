#ifndef PHICONV_ERRORS_HPP
#define PHICONV_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace phiconv {

/// Stable machine-readable failure kinds. The CLI maps these 1:1 onto the
/// report's error `kind` string, so renaming one is a format change.
enum class ErrorKind {
    InvalidArgument,
    SizeMismatch,
    RankDeficientBasis,
    GridMismatch,
    IterationLimit,
    SolverNoConvergence,
    NotPhiConvex,
    EmptyIntersection,
    NoExposedPoint,
    NonSeparatingFamily,
    PointNotMaximizer,
    BadEpsilon,
    DegenerateGap,
    WitnessNotExtremal,
    ParseError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidArgument:     return "InvalidArgument";
    case ErrorKind::SizeMismatch:        return "SizeMismatch";
    case ErrorKind::RankDeficientBasis:  return "RankDeficientBasis";
    case ErrorKind::GridMismatch:        return "GridMismatch";
    case ErrorKind::IterationLimit:      return "IterationLimit";
    case ErrorKind::SolverNoConvergence: return "SolverNoConvergence";
    case ErrorKind::NotPhiConvex:        return "NotPhiConvex";
    case ErrorKind::EmptyIntersection:   return "EmptyIntersection";
    case ErrorKind::NoExposedPoint:      return "NoExposedPoint";
    case ErrorKind::NonSeparatingFamily: return "NonSeparatingFamily";
    case ErrorKind::PointNotMaximizer:   return "PointNotMaximizer";
    case ErrorKind::BadEpsilon:          return "BadEpsilon";
    case ErrorKind::DegenerateGap:       return "DegenerateGap";
    case ErrorKind::WitnessNotExtremal:  return "WitnessNotExtremal";
    case ErrorKind::ParseError:          return "ParseError";
    }
    return "Unknown";
}

class PhiError : public std::runtime_error {
public:
    PhiError(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
          kind_(kind), detail_(detail) {}

    PhiError(ErrorKind kind, const std::string& detail, std::vector<int> indices)
        : PhiError(kind, detail) {
        indices_ = std::move(indices);
    }

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Offending cloud/function indices, when the failure points at specific
    /// ones (e.g. a Phi-convexity violation triple).
    const std::vector<int>& indices() const noexcept { return indices_; }

private:
    ErrorKind kind_;
    std::string detail_;
    std::vector<int> indices_;
};

} // namespace phiconv

#endif // PHICONV_ERRORS_HPP
