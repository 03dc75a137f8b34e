#ifndef LTLAB_LTRATIO_HPP
#define LTLAB_LTRATIO_HPP

#include <string>
#include <vector>

#include "ltlab/jacobi.hpp"
#include "ltlab/schrodinger.hpp"
#include "ltlab/types.hpp"

// Weight functions, the eigenvalue-sum functionals they weight, and the
// divergence / sharpness experiment schedules.

namespace ltlab::ltratio {

struct Weight {
    enum class Kind { constant, exp_decay, exp_growth, tabulated };
    Kind kind = Kind::constant;
    double level = 1.0;  // constant value
    double rate = 0.0;   // kappa (decay) or xi (growth)
    std::vector<std::pair<double, double>> points;  // tabulated, t ascending

    double f(double t) const;
    double F(double x) const;       // integral of f over [0, x]
    double f_prime(double t) const;
    bool non_increasing() const;
    bool non_decreasing() const;
    bool integrable() const;  // finite integral over [0, inf)

    static Weight constant(double c = 1.0);
    static Weight exp_decay(double kappa);
    static Weight exp_growth(double xi);
    static Weight tabulated(std::vector<std::pair<double, double>> pts);
    // "const:1", "exp_decay:0.5", "exp_growth:0.3"
    static Weight parse(const std::string& spec);
    std::string describe() const;
};

double weight_F(const Weight& w, double x);

struct RatioReport {
    double parameter = 0.0;  // h or n
    double ratio_value = 0.0;
    double lower_bound_predictor = 0.0;
    double mode_count = 0.0;  // weighted admissible count
    unsigned long long lattice_count = 0;
    std::string notes;
};

// (mu_d h^p)^{-1} sum mult * (Im lam)^p / |lam|^{d/2} * f(log(|lam|/Im lam))
// over admissible records; a constructed-mode lower bound on the full ratio.
RatioReport schrodinger_ratio(const std::vector<schrodinger::EigenvalueRecord>& recs,
                              const schrodinger::Config& cfg, const Weight& f);

// n^{2p/3-1} sum (Im lam)^p / |lam^2-4|^{1/2} * f(log(dist(lam,{-2,2})/Im lam))
RatioReport jacobi_lt_functional(const std::vector<jacobi::RootRecord>& recs,
                                 const jacobi::Config& cfg, const Weight& f);

double unit_ball_volume(int d);

// sector sums, both normalized by the potential norm
double cone_sum(const std::vector<schrodinger::EigenvalueRecord>& recs, double tau,
                const schrodinger::Config& cfg);
double diamond_sum(const std::vector<cplx>& lambdas, double omega, double p, long n);

enum class DivergenceKind {
    schrodinger_decreasing,
    schrodinger_increasing,
    jacobi_decreasing,
    jacobi_increasing
};

struct ExperimentPlan {
    DivergenceKind kind = DivergenceKind::schrodinger_decreasing;
    std::vector<double> sweep;  // ascending h (or n) values
    Weight f;
    int d = 2;
    double p = 2.0;
    schrodinger::Windows windows = schrodinger::Windows::defaults();
    schrodinger::EnumOptions enum_opts;
    double jacobi_gamma = 0.8;
    double jacobi_g = 2.0;
    double jacobi_eps = 0.5;  // in (0, 2/3) for the non-decreasing schedule
};

struct DivergenceResult {
    std::vector<RatioReport> points;
    double slope = 0.0;  // least squares through the origin, ratio vs predictor
};

DivergenceResult divergence_experiment(const ExperimentPlan& plan);

enum class SharpnessKind { cone, diamond };

struct SharpnessPoint {
    double parameter = 0.0;
    double schedule = 0.0;  // tau(h) or omega(n)
    double raw_sum = 0.0;
    double phi_value = 0.0;
    double quantity = 0.0;  // raw_sum / phi
};

struct SharpnessResult {
    std::vector<SharpnessPoint> points;
    bool strictly_increasing = false;
    double max_over_min = 0.0;
};

// cone: tau(h) = h^{-2 beta}/(32 pi^2) over the modified window ordering;
// diamond: omega(n) = arctan(4(2-sqrt 2) n^{2/3}).
// critical_phi swaps the default test function (with its logarithmic slack)
// for the critical one.
SharpnessResult sharpness_experiment(SharpnessKind kind, const std::vector<double>& sweep,
                                     double p, int d, bool critical_phi,
                                     const schrodinger::EnumOptions& opts = {});

struct SumPlanRow {
    double n = 0.0;
    double c_n = 0.0;
    double k_log_n = 0.0;
    double s_a = 0.0;
    double s_b = 0.0;
};

struct SumPlan {
    std::vector<SumPlanRow> rows;  // geometrically thinned when the range is long
    double s_a_total = 0.0;
    double s_b_total = 0.0;
    double s_b_tail_fraction = 0.0;  // tail over the last half of the range
    double sqrt_F_at_end = 0.0;      // (F(eps log n_max))^{1/2}
    bool k_non_increasing = true;
};

// Partial sums S_A = sum F(eps log n) k(log n)/n and S_B = sum k(log n)/n for
// n0 <= n <= n0 + N_terms, with c_n = (k(log n)/(n ||V_n||_p^p))^{1/(2p-d)}.
// Exact summation for a large head, Euler-Maclaurin closed-form tail beyond
// (the integrands telescope: int F k = d(F^{1/2}), int k = -d(F^{-1/2})).
SumPlan sum_construction_plan(const Weight& f, double eps, double p, int d, double n0,
                              double n_terms);

}  // namespace ltlab::ltratio

#endif
