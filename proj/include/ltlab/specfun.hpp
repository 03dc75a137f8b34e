#ifndef LTLAB_SPECFUN_HPP
#define LTLAB_SPECFUN_HPP

#include <optional>

#include "ltlab/types.hpp"

// Bessel J_nu, Y_nu and Hankel H1_nu for real order nu >= 0 and complex
// argument with Re z > 0, in the regimes the eigenvalue solvers visit
// (moderate nu with |z| up to ~1e6, and large nu with |z|/nu bounded away
// from 1). Every evaluation carries a relative error estimate; callers must
// check est_err against their own tolerance.

namespace ltlab::specfun {

struct BesselOrder {
    double nu = 0.0;
};

// J, Y and the z-derivatives J', Y', each on its own scale (J can be
// exponentially smaller than Y in the evanescent zone). When the evaluation
// went through the Hankel-pair representation, H1 and H1' are carried
// directly; reconstructing them from J + iY would lose the recessive
// component for Im z >> 1.
struct BesselQuad {
    SpecialValue j, jp, y, yp;
    SpecialValue h1_direct, h1p_direct;
    SpecialValue h2_direct, h2p_direct;
    bool has_direct_h1 = false;

    SpecialValue h1() const;
    SpecialValue h1p() const;
    SpecialValue h2() const;
    SpecialValue h2p() const;
};

// value_a*exp(ls_a) + value_b*exp(ls_b) as a SpecialValue; tracks the
// cancellation in est_err.
SpecialValue scaled_add(const SpecialValue& a, const SpecialValue& b);

// Core evaluator; dispatches between power series, Debye large-order
// expansion, amplitude-phase expansion and an order-recurrence chain.
BesselQuad bessel_quad(double nu, cplx z);

SpecialValue bessel_j(BesselOrder nu, cplx z);
SpecialValue bessel_y(BesselOrder nu, cplx z);
SpecialValue hankel1(BesselOrder nu, cplx z);
SpecialValue d_bessel_j(BesselOrder nu, cplx z);
SpecialValue d_bessel_y(BesselOrder nu, cplx z);
SpecialValue d_hankel1(BesselOrder nu, cplx z);

// Scale-free ratios, the fast path for characteristic-equation work.
// ratio_dj_j = J'_nu(z)/J_nu(z); ratio_h1_dh1 = H1_nu(z)/H1'_nu(z).
cplx ratio_dj_j(double nu, cplx z, double* est_err = nullptr);
cplx ratio_h1_dh1(double nu, cplx z, double* est_err = nullptr);

struct PhaseOptions {
    double region_a = 3.0;     // region test: region_a * nu < Re z and |z| < 2 Re z
    bool strict_region = false;  // throw OutsideRegion instead of warning flag
};

struct PhaseValue {
    cplx theta;
    cplx theta_prime;
    double est_err = 0.0;
    bool inside_region = true;
};

// Branch of theta_nu(z) = arctan(Y_nu/J_nu) continued from the real ray with
// theta_nu(x) -> -pi/2 as x -> 0+. Explicit (branch-exact) in the asymptotic
// regimes; path-tracked from a real anchor otherwise.
PhaseValue phase_theta(BesselOrder nu, cplx z, const PhaseOptions& opt = {});

// Explicit asymptotic phase, defined when (nu, z) lies in a regime where the
// Debye or amplitude-phase representation meets `tol`. Used internally and by
// the solvers; returns nullopt outside the regime.
std::optional<PhaseValue> phase_theta_explicit(double nu, cplx z, double tol = 1e-11);

// Amplitude-phase pieces needed by spectral diagnostics, all scale-free:
//   tan(theta), e^{ i theta}/cos(theta), computed from the same H1/H2
//   representation as phase_theta.
struct PhaseParts {
    cplx tan_theta;
    cplx exp_over_cos;  // e^{i theta} / cos(theta)
    double est_err = 0.0;
};
PhaseParts phase_parts(double nu, cplx z);

}  // namespace ltlab::specfun

#endif
