#pragma once

#include <stdexcept>
#include <string>

namespace homoglab {

/// Base class for all homoglab errors.  `code()` gives a stable,
/// machine-readable identifier used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define HOMOGLAB_DEFINE_ERROR(NAME)                                     \
    class NAME : public Error {                                         \
    public:                                                             \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}  \
    }

// grid_fields
HOMOGLAB_DEFINE_ERROR(EllipticityViolation);
HOMOGLAB_DEFINE_ERROR(NonFinite);
HOMOGLAB_DEFINE_ERROR(BadGrid);
HOMOGLAB_DEFINE_ERROR(IoError);

// discrete_calculus / periodic_extraction
HOMOGLAB_DEFINE_ERROR(GridTooSmall);
HOMOGLAB_DEFINE_ERROR(ExponentOutOfRange);
HOMOGLAB_DEFINE_ERROR(IncompatibleField);
HOMOGLAB_DEFINE_ERROR(InsufficientRadii);
HOMOGLAB_DEFINE_ERROR(DomainTooSmall);

// elliptic_solver
HOMOGLAB_DEFINE_ERROR(Singular);
HOMOGLAB_DEFINE_ERROR(NoConvergence);

// corrector
HOMOGLAB_DEFINE_ERROR(ResolutionMismatch);
HOMOGLAB_DEFINE_ERROR(TruncationUnstable);
HOMOGLAB_DEFINE_ERROR(NotContracting);

// homogenize_harness
HOMOGLAB_DEFINE_ERROR(ResolutionInsufficient);
HOMOGLAB_DEFINE_ERROR(InsufficientPoints);

// cli
HOMOGLAB_DEFINE_ERROR(ConfigInvalid);
HOMOGLAB_DEFINE_ERROR(ScenarioUnknown);

#undef HOMOGLAB_DEFINE_ERROR

} // namespace homoglab
