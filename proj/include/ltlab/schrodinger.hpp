#ifndef LTLAB_SCHRODINGER_HPP
#define LTLAB_SCHRODINGER_HPP

#include <functional>
#include <string>
#include <vector>

#include "ltlab/types.hpp"

// Constructed eigenvalues lambda_{l,j} = i h + m^2 of -Laplace + i h X_{B_1(0)}
// in dimension d >= 2, via the three-stage pipeline: closed-form guess, phase
// equation zero, characteristic equation root.

namespace ltlab::schrodinger {

struct Config {
    int d = 2;
    double h = 1e4;
    double p = 2.0;

    void validate() const;  // dimension/exponent admissibility
};

// Exponent windows and slow functions that define which (l, j) modes are
// enumerated. alpha(h) in (0, beta), beta < gamma < 1/2, g in (0,1] with
// g(h) >= 2 h^{beta-gamma}.
struct Windows {
    double eps = 0.02;   // divergence-rate exponent; beta = eps/2
    double beta = 0.01;
    double gamma = 0.0902;
    std::function<double(double)> alpha_of_h;
    std::function<double(double)> g_of_h;
    std::function<double(double)> w_of_h;

    static Windows defaults();
    // windows for a prescribed eps (beta = eps/2), desk-viable gamma gap
    static Windows for_eps(double eps, double alpha0 = 0.005, double gamma_gap = 0.0802);
    // modified ordering for the cone-sharpness schedule:
    // 0 < alpha < gamma/2 < 3 gamma/4 < beta < gamma < 1/2
    static Windows cone(double gamma = 0.48, double beta = 0.37);

    void validate(double h) const;  // throws WindowInvalid
};

struct ModeIndex {
    long ell = 0;
    long j = 0;
    double nu = 0.0;
};

double nu_of(long ell, int d);
// dim of the degree-l harmonic eigenspace; exact while below 2^53
double multiplicity(long ell, int d);

struct IndexSets {
    long ell_lo = 0, ell_hi = -1;  // empty when lo > hi
    long j_hi = -1;
    long jt_lo = 0, jt_hi = -1;
    double g = 1.0;

    long j_lo(long ell) const;                      // ceil(l / g)
    long lt_lo = 0;                                 // tilde-L lower bound
    long lt_hi(long j) const;                       // floor(j g)
    bool ell_empty() const { return ell_lo > ell_hi; }
    unsigned long long lattice_count() const;       // exact |{(l,j)}|
};

IndexSets index_sets(double h, const Windows& w);

cplx initial_guess(double nu, long j, double h);

struct StageResult {
    cplx m;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool within_half_ball = false;  // |m1 - m0| < nu/2
};

// Newton for the phase-equation zero near the closed-form guess. Throws
// EscapedBall when the iterate leaves the radius-nu ball, NoConvergence after
// the iteration cap.
StageResult aux_zero(double nu, long j, double h, cplx guess);

// same solve against a caller-supplied phase (theta, theta') model
using PhaseModel = std::function<std::pair<cplx, cplx>(cplx)>;
StageResult aux_zero_with(const PhaseModel& phase, double nu, long j, double h, cplx guess);

// k/m - [J'(m)/J(m)] [H1(k)/H1'(k)], scale-free
cplx char_residual(cplx m, double nu, double h, double* est_err = nullptr);

enum class ModeStatus { accepted, inadmissible, no_convergence, escaped_ball, failed };

struct EigenvalueRecord {
    ModeIndex mode;
    cplx m0, m1, m;
    cplx k;
    cplx lambda;
    double multiplicity = 0.0;
    double residual = 0.0;
    bool admissible = false;
    bool stage2_half_ball = false;
    ModeStatus status = ModeStatus::failed;
    std::string message;
    double weight = 1.0;  // lattice cell size when subsampled
};

EigenvalueRecord solve_mode(const Config& cfg, long ell, long j);

bool bound_check(const EigenvalueRecord& rec, double h);

struct PhaseDiagnostics {
    cplx xi;
    cplx err;
    cplx tow_residual;  // residual of the rearranged characteristic identity
};
PhaseDiagnostics diagnostics_xi_err(cplx m, double nu, long j, double h);

struct EnumOptions {
    long ell_samples = 56;
    long j_samples = 56;
    int workers = 1;
};

// Attempts every (l, j) lattice point when the lattice fits the sampling
// budget, otherwise a deterministic block subsample with exact cell weights.
// Records are ordered by (l, j) ascending regardless of worker count.
std::vector<EigenvalueRecord> enumerate_spectrum(const Config& cfg, const Windows& w,
                                                 const EnumOptions& opt = {});

}  // namespace ltlab::schrodinger

#endif
