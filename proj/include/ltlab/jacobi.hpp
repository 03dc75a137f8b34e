#ifndef LTLAB_JACOBI_HPP
#define LTLAB_JACOBI_HPP

#include <functional>
#include <string>
#include <vector>

#include "ltlab/types.hpp"

// Discrete Schrodinger (Jacobi) operator with the imaginary step potential
// b_k = i n^{-2/3} on k = 1..n: eigenvalues lambda = i n^{-2/3} + z + 1/z for
// roots z of the polynomial characteristic equation, localized per angular
// slot, with two independent oracles (polynomial linearization eigenvalues and
// truncated-operator eigenvalues).

namespace ltlab::jacobi {

struct Config {
    long n = 1000;
    double p = 1.0;
    double gamma = 0.8;  // in (2/3, 1)
    std::function<double(double)> g_of_n;

    static Config with_g(long n, double g, double gamma = 0.8, double p = 1.0);
    static Config defaults(long n);  // g(n) = max(2, log log n)
    double g() const { return g_of_n(static_cast<double>(n)); }
    double coupling() const;  // n^{-2/3}
    void validate() const;
};

// annular sector around the j-th angular slot
struct Region {
    double phi_lo = 0.0, phi_hi = 0.0;
    double r_lo = 0.0, r_hi = 0.0;

    bool contains(cplx z) const;
};

struct Window {
    long j_lo = 0, j_hi = -1;
    long n = 0;
    double gamma = 0.0, g = 1.0;

    bool empty() const { return j_lo > j_hi; }
    double x_of(long j) const;  // slot center angle (4j-1) pi / (2n)
    Region d_of(long j) const;  // localization box
    Region wide_of(long j) const;  // same slot, pre-asymptotic radial floor 1 - 1/sqrt(n)
};

Window mode_window(long n, double gamma, double g);

// LHS - RHS of the polynomial characteristic equation; powers via exp(k log z)
cplx char_poly_residual(cplx z, long n);
// same value with powers by repeated squaring (internal consistency probe)
cplx char_poly_residual_pow(cplx z, long n);

cplx initial_guess(long j, long n);

struct RootRecord {
    long j = 0;
    cplx z;
    cplx lambda;
    double phi = 0.0, r = 0.0;
    double residual = 0.0;
    double kj_abs = 0.0;
    bool admissible = false;  // eigenvalue criterion + inside the slot (wide radial)
    bool in_dj = false;       // full localization-box membership
    bool converged = false;
    std::string message;
};

RootRecord solve_mode(long j, const Config& cfg);

std::vector<RootRecord> enumerate_spectrum(const Config& cfg);

// All 2n roots of the degree-2n characteristic polynomial via a balanced
// Hessenberg eigensolve of the half-degree Chebyshev linearization (the
// polynomial is exactly self-reciprocal, z^{2n} P(1/z) = P(z)).
std::vector<cplx> companion_roots(long n);
// filtered per the eigenvalue criterion |z|<1, Im z>0, |z^{n+1}-1|<|z^n-z|
std::vector<cplx> companion_oracle(long n);
// literal monomial-basis degree-2n companion (cross-validation; small n only)
std::vector<cplx> companion_roots_monomial(long n);

// eigenvalues of a complex symmetric tridiagonal matrix (unit off-diagonals)
std::vector<cplx> tridiag_eigenvalues(std::vector<cplx> diag);

// (2N+1) x (2N+1) truncation of the operator, indices -N..N
std::vector<cplx> truncated_matrix_all(long n, long N);
// filtered above the truncation-pollution floor 3 n^{-2/3} N^{-1/4} + extra
std::vector<cplx> truncated_matrix_oracle(long n, long N, double extra_floor = 0.0);

struct AsymptoticReport {
    double dist_segment = 0.0;       // Im lambda
    double dist_endpoints = 0.0;     // min |lambda -+ 2|
    double mod_sq_minus4 = 0.0;      // |lambda^2 - 4|
    double dev_endpoints = 0.0;      // rel. deviation from 2(1 - cos phi)
    double dev_modsq = 0.0;          // rel. deviation from 4 sin^2 phi
    double lambda_dev_over_gap = 0.0;  // |lambda - 2cos(phi) - i n^{-2/3}| / n^{-gamma}
    double im_ratio = 0.0;           // Im lambda / n^{-2/3}
};

AsymptoticReport asymptotic_report(const RootRecord& rec, const Config& cfg);

}  // namespace ltlab::jacobi

#endif
