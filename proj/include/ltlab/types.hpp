#ifndef LTLAB_TYPES_HPP
#define LTLAB_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ltlab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Error taxonomy used across modules. `kind()` is stable for machine use.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error("DomainError", w) {}
};
struct RegimeUnsupported : Error {
    explicit RegimeUnsupported(const std::string& w) : Error("RegimeUnsupported", w) {}
};
struct OutsideRegion : Error {
    explicit OutsideRegion(const std::string& w) : Error("OutsideRegion", w) {}
};
struct BranchAmbiguity : Error {
    explicit BranchAmbiguity(const std::string& w) : Error("BranchAmbiguity", w) {}
};
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& w) : Error("NoConvergence", w) {}
};
struct EscapedBall : Error {
    explicit EscapedBall(const std::string& w) : Error("EscapedBall", w) {}
};
struct PoleProximity : Error {
    explicit PoleProximity(const std::string& w) : Error("PoleProximity", w) {}
};
struct WindowInvalid : Error {
    explicit WindowInvalid(const std::string& w) : Error("WindowInvalid", w) {}
};
struct OracleTooLarge : Error {
    explicit OracleTooLarge(const std::string& w) : Error("OracleTooLarge", w) {}
};
struct MixedParameter : Error {
    explicit MixedParameter(const std::string& w) : Error("MixedParameter", w) {}
};
struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& w) : Error("HypothesisViolated", w) {}
};

// A complex value stored as value * exp(log_scale), log_scale real, so that
// magnitudes far beyond double range stay representable. est_err is a relative
// error estimate the caller is expected to check against its own tolerance.
struct SpecialValue {
    cplx value{0.0, 0.0};
    double log_scale = 0.0;
    double est_err = 0.0;

    // Collapses the scale; may overflow/underflow for extreme log_scale.
    cplx full() const { return value * std::exp(log_scale); }
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace ltlab

#endif
