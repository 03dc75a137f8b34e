#include "ltlab/jacobi.hpp"

#include <algorithm>
#include <cmath>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace ltlab::jacobi {

namespace {

const cplx kI{0.0, 1.0};
constexpr double kRootTol = 1e-10;
constexpr long kCompanionCap = 4000;
constexpr long kTridiagCap = 40001;

long ceil_of(double v) { return static_cast<long>(std::ceil(v - 1e-9 * std::abs(v))); }
long floor_of(double v) { return static_cast<long>(std::floor(v + 1e-9 * std::abs(v))); }

}  // namespace

Config Config::with_g(long n, double g, double gamma, double p) {
    Config c;
    c.n = n;
    c.p = p;
    c.gamma = gamma;
    c.g_of_n = [g](double) { return g; };
    c.validate();
    return c;
}

Config Config::defaults(long n) {
    Config c;
    c.n = n;
    c.g_of_n = [](double nn) { return std::max(2.0, std::log(std::log(nn))); };
    c.validate();
    return c;
}

double Config::coupling() const { return std::pow(static_cast<double>(n), -2.0 / 3.0); }

void Config::validate() const {
    if (n < 2) throw DomainError("n must be >= 2");
    if (p < 1.0) throw DomainError("p must be >= 1");
    if (!(gamma > 2.0 / 3.0 && gamma < 1.0)) throw DomainError("gamma must lie in (2/3, 1)");
    if (!g_of_n) throw DomainError("g function not set");
    if (g_of_n(static_cast<double>(n)) < 1.0) throw DomainError("g(n) must be >= 1");
}

bool Region::contains(cplx z) const {
    double phi = std::arg(z);
    double r = std::abs(z);
    return phi >= phi_lo - 1e-13 && phi <= phi_hi + 1e-13 && r >= r_lo - 1e-13 &&
           r <= r_hi + 1e-13;
}

double Window::x_of(long j) const { return (4.0 * j - 1.0) * pi / (2.0 * n); }

Region Window::d_of(long j) const {
    Region r;
    double x = x_of(j);
    r.phi_lo = x - pi / n;
    r.phi_hi = x + pi / n;
    r.r_lo = 1.0 - std::pow(static_cast<double>(n), -gamma);
    r.r_hi = 1.0 - std::log(g) / n;
    return r;
}

Region Window::wide_of(long j) const {
    Region r = d_of(j);
    r.r_lo = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
    return r;
}

Window mode_window(long n, double gamma, double g) {
    Window w;
    w.n = n;
    w.gamma = gamma;
    w.g = g;
    double nn = static_cast<double>(n);
    w.j_lo = ceil_of(0.5 * std::pow(nn, 2.0 / 3.0) * g + 0.75);
    w.j_hi = floor_of(nn / 8.0 - 0.25);
    return w;  // empty window is a valid (logged by callers) outcome
}

cplx char_poly_residual(cplx z, long n) {
    if (std::abs(z) == 0.0) throw DomainError("z = 0");
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    cplx u = std::log(z);
    auto zp = [&](long k) { return std::exp(static_cast<double>(k) * u); };
    cplx lhs = kI * a * (zp(n + 1) - 1.0) * (zp(n - 1) - 1.0);
    cplx rhs = zp(n - 2) * (z * z - 1.0) * (z * z - 1.0);
    return lhs - rhs;
}

cplx char_poly_residual_pow(cplx z, long n) {
    if (std::abs(z) == 0.0) throw DomainError("z = 0");
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    auto zp = [&](long k) {
        cplx acc{1.0, 0.0}, base = z;
        long e = k;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    };
    cplx lhs = kI * a * (zp(n + 1) - 1.0) * (zp(n - 1) - 1.0);
    cplx rhs = zp(n - 2) * (z * z - 1.0) * (z * z - 1.0);
    return lhs - rhs;
}

cplx initial_guess(long j, long n) {
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    double x = (4.0 * j - 1.0) * pi / (2.0 * n);
    double s = std::sin(x);
    double radius = std::pow(a / (4.0 * s * s), 1.0 / static_cast<double>(n));
    return radius * std::exp(kI * x);
}

namespace {

// P and z P' evaluated through u = log z (the Newton variable)
std::pair<cplx, cplx> poly_and_slope(cplx u, long n, double a) {
    auto ep = [&](long k) { return std::exp(static_cast<double>(k) * u); };
    cplx z = std::exp(u);
    cplx zn1 = ep(n + 1), znm1 = ep(n - 1), znm2 = ep(n - 2), zn = ep(n);
    cplx z2m1 = z * z - 1.0;
    cplx P = kI * a * (zn1 - 1.0) * (znm1 - 1.0) - znm2 * z2m1 * z2m1;
    cplx dP = kI * a * (static_cast<double>(n + 1) * zn * (znm1 - 1.0) +
                        static_cast<double>(n - 1) * znm2 * (zn1 - 1.0)) -
              (static_cast<double>(n - 2) * ep(n - 3) * z2m1 * z2m1 +
               4.0 * znm1 * z2m1);
    return {P, dP * z};  // dG/du = z P'(z)
}

}  // namespace

RootRecord solve_mode(long j, const Config& cfg) {
    RootRecord rec;
    rec.j = j;
    long n = cfg.n;
    double a = cfg.coupling();
    cplx u = std::log(initial_guess(j, n));
    auto [f, fp] = poly_and_slope(u, n, a);
    double af = std::abs(f);
    for (int it = 0; it < 60 && af > kRootTol * 1e-4; ++it) {
        cplx step = -f / fp;
        // thin annulus: keep radial moves modest
        if (std::abs(step.real()) > 10.0 / n) step *= (10.0 / n) / std::abs(step.real());
        cplx unew = u + step;
        cplx fnew = f, fpnew = fp;
        double afnew = af;
        for (int half = 0; half < 12; ++half) {
            auto [g1, g2] = poly_and_slope(unew, n, a);
            afnew = std::abs(g1);
            fnew = g1;
            fpnew = g2;
            if (afnew < af) break;
            step *= 0.5;
            unew = u + step;
        }
        if (afnew >= af && af <= kRootTol) break;
        u = unew;
        f = fnew;
        fp = fpnew;
        af = afnew;
    }
    rec.z = std::exp(u);
    rec.residual = af;
    rec.converged = af <= kRootTol;
    rec.phi = std::arg(rec.z);
    rec.r = std::abs(rec.z);
    rec.lambda = kI * a + rec.z + 1.0 / rec.z;

    cplx zn = std::exp(static_cast<double>(n) * u);
    cplx kj = (1.0 - zn * rec.z) / (rec.z - zn);
    rec.kj_abs = std::abs(kj);

    Window w = mode_window(n, cfg.gamma, cfg.g());
    rec.in_dj = rec.converged && w.d_of(j).contains(rec.z);
    bool eig = rec.r < 1.0 && rec.z.imag() > 0.0 && rec.kj_abs < 1.0;
    rec.admissible = rec.converged && eig && w.wide_of(j).contains(rec.z);
    if (!rec.converged) {
        rec.message = "Newton stalled at residual " + std::to_string(af);
    } else if (!rec.admissible) {
        rec.message = eig ? "root outside the angular slot" : "eigenvalue criterion failed";
    }
    return rec;
}

std::vector<RootRecord> enumerate_spectrum(const Config& cfg) {
    Window w = mode_window(cfg.n, cfg.gamma, cfg.g());
    std::vector<RootRecord> out;
    if (w.empty()) return out;
    out.reserve(w.j_hi - w.j_lo + 1);
    for (long j = w.j_lo; j <= w.j_hi; ++j) out.push_back(solve_mode(j, cfg));
    return out;
}

namespace {

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx>& h, lapack_int n) {
    lapack_int ilo = 1, ihi = n;
    std::vector<double> scale(n);
    lapack_int info = LAPACKE_zgebal(LAPACK_COL_MAJOR, 'S', n, h.data(), n, &ilo, &ihi,
                                     scale.data());
    if (info != 0) throw NoConvergence("balancing failed");
    std::vector<cplx> wv(n);
    info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, h.data(), n, wv.data(), nullptr,
                          1);
    if (info != 0) throw NoConvergence("Hessenberg QR failed to converge");
    return wv;
}

}  // namespace

std::vector<cplx> companion_roots(long n) {
    if (n > kCompanionCap) throw OracleTooLarge("polynomial degree beyond the oracle cap");
    if (n < 3) throw DomainError("need n >= 3");
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    // S(x) = 2ia T_n(x) - 2ia T_1(x) - 2 T_2(x) + 2 T_0(x), roots x = u/2
    cplx cn = 2.0 * kI * a;
    std::vector<cplx> c(n, cplx{0.0, 0.0});
    c[0] = 2.0;
    c[1] = -2.0 * kI * a;
    c[2] = -2.0;
    // colleague matrix, transposed to upper Hessenberg, column-major
    lapack_int nn = static_cast<lapack_int>(n);
    std::vector<cplx> H(static_cast<size_t>(n) * n, cplx{0.0, 0.0});
    auto at = [&](long i, long jj) -> cplx& { return H[static_cast<size_t>(jj) * n + i]; };
    at(1, 0) = 1.0;
    for (long k = 1; k <= n - 2; ++k) {
        at(k - 1, k) = 0.5;
        if (k + 1 < n) at(k + 1, k) = 0.5;
    }
    for (long k = 0; k < n; ++k) at(k, n - 1) -= c[k] / (2.0 * cn);
    at(n - 2, n - 1) += 0.5;

    std::vector<cplx> x = hessenberg_eigenvalues(H, nn);
    std::vector<cplx> roots;
    roots.reserve(2 * n);
    for (cplx xv : x) {
        cplx u = 2.0 * xv;
        cplx s = std::sqrt(u * u - 4.0);
        if ((std::conj(u) * s).real() < 0.0) s = -s;
        cplx big = 0.5 * (u + s);  // |big| >= 1
        roots.push_back(big);
        roots.push_back(1.0 / big);
    }
    return roots;
}

namespace {

bool eigenvalue_filter(cplx z, long n) {
    if (!(std::abs(z) < 1.0 && z.imag() > 0.0)) return false;
    cplx u = std::log(z);
    cplx zn = std::exp(static_cast<double>(n) * u);
    return std::abs(zn * z - 1.0) < std::abs(zn - z);
}

}  // namespace

std::vector<cplx> companion_oracle(long n) {
    std::vector<cplx> all = companion_roots(n);
    std::vector<cplx> keep;
    for (cplx z : all) {
        if (eigenvalue_filter(z, n)) keep.push_back(z);
    }
    std::sort(keep.begin(), keep.end(),
              [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
    return keep;
}

std::vector<cplx> companion_roots_monomial(long n) {
    if (n > 700) throw OracleTooLarge("monomial companion reserved for small n");
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    long deg = 2 * n;
    // monic coefficients of P / (i a)
    std::vector<cplx> c(deg, cplx{0.0, 0.0});
    c[0] = 1.0;
    c[n + 2] = kI / a;
    c[n + 1] = -1.0;
    c[n] = -2.0 * kI / a;
    c[n - 1] = -1.0;
    c[n - 2] = kI / a;
    std::vector<cplx> H(static_cast<size_t>(deg) * deg, cplx{0.0, 0.0});
    auto at = [&](long i, long jj) -> cplx& { return H[static_cast<size_t>(jj) * deg + i]; };
    for (long k = 1; k < deg; ++k) at(k, k - 1) = 1.0;
    for (long k = 0; k < deg; ++k) at(k, deg - 1) = -c[k];
    return hessenberg_eigenvalues(H, static_cast<lapack_int>(deg));
}

// ---------------------------------------------------------------------------
// complex symmetric tridiagonal eigenvalues, implicit-shift QL. The rotations
// satisfy c^2 + s^2 = 1 (complex, non-unitary); fine for near-normal input.

std::vector<cplx> tridiag_eigenvalues(std::vector<cplx> d) {
    long m = static_cast<long>(d.size());
    if (m > kTridiagCap) throw OracleTooLarge("tridiagonal size beyond the oracle cap");
    if (m == 0) return {};
    std::vector<cplx> e(m, cplx{1.0, 0.0});
    e[m - 1] = 0.0;

    auto small = [&](long i) {
        double s = std::abs(d[i]) + std::abs(d[i + 1]);
        return std::abs(e[i]) <= 1e-16 * s;
    };

    for (long l = 0; l < m; ++l) {
        int iter = 0;
        for (;;) {
            long mm = l;
            while (mm < m - 1 && !small(mm)) ++mm;
            if (mm == l) break;
            if (++iter > 80) throw NoConvergence("tridiagonal QL exceeded iteration cap");
            cplx g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            cplx r = std::sqrt(g * g + 1.0);
            cplx denom = (std::abs(g + r) >= std::abs(g - r)) ? (g + r) : (g - r);
            g = d[mm] - d[l] + e[l] / denom;
            cplx s{1.0, 0.0}, c{1.0, 0.0}, p{0.0, 0.0};
            bool underflow = false;
            for (long i = mm - 1; i >= l; --i) {
                cplx f = s * e[i];
                cplx b = c * e[i];
                r = std::sqrt(f * f + g * g);
                e[i + 1] = r;
                if (std::abs(r) == 0.0) {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (!underflow) {
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        }
    }
    return d;
}

std::vector<cplx> truncated_matrix_all(long n, long N) {
    if (N < 4 * n) throw DomainError("truncation needs N >= 4 n");
    long size = 2 * N + 1;
    if (size > kTridiagCap) throw OracleTooLarge("truncation size beyond the oracle cap");
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    std::vector<cplx> d(size, cplx{0.0, 0.0});
    for (long idx = 0; idx < size; ++idx) {
        long k = idx - N;
        if (k >= 1 && k <= n) d[idx] = kI * a;
    }
    return tridiag_eigenvalues(std::move(d));
}

namespace {

double dist_segment(cplx z) {
    if (z.real() < -2.0) return std::abs(z - cplx{-2.0, 0.0});
    if (z.real() > 2.0) return std::abs(z - cplx{2.0, 0.0});
    return std::abs(z.imag());
}

}  // namespace

std::vector<cplx> truncated_matrix_oracle(long n, long N, double extra_floor) {
    std::vector<cplx> all = truncated_matrix_all(n, N);
    double a = std::pow(static_cast<double>(n), -2.0 / 3.0);
    double floor = 3.0 * a * std::pow(static_cast<double>(N), -0.25) + extra_floor;
    std::vector<cplx> keep;
    for (cplx z : all) {
        if (dist_segment(z) > floor) keep.push_back(z);
    }
    std::sort(keep.begin(), keep.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    return keep;
}

AsymptoticReport asymptotic_report(const RootRecord& rec, const Config& cfg) {
    if (!rec.admissible) throw DomainError("asymptotic report needs an admissible record");
    AsymptoticReport rep;
    double a = cfg.coupling();
    double n = static_cast<double>(cfg.n);
    cplx lam = rec.lambda;
    rep.dist_segment = lam.imag();
    rep.dist_endpoints = std::min(std::abs(lam - 2.0), std::abs(lam + 2.0));
    rep.mod_sq_minus4 = std::abs(lam * lam - 4.0);
    double pred_end = 2.0 * (1.0 - std::cos(rec.phi));
    double pred_mod = 4.0 * std::sin(rec.phi) * std::sin(rec.phi);
    rep.dev_endpoints = std::abs(rep.dist_endpoints - pred_end) / pred_end;
    rep.dev_modsq = std::abs(rep.mod_sq_minus4 - pred_mod) / pred_mod;
    rep.lambda_dev_over_gap =
        std::abs(lam - 2.0 * std::cos(rec.phi) - kI * a) / std::pow(n, -cfg.gamma);
    rep.im_ratio = lam.imag() / a;
    return rep;
}

}  // namespace ltlab::jacobi
