// Reference solvers used to check the production algorithms. They share no
// code with the solvers they check beyond the plain data types: slow,
// direct formulations only.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rismec/channel.hpp"
#include "rismec/precoder.hpp"

namespace rismec::oracle {

// --- RIS objective and gradient ----------------------------------------

/// Radio part of the per-slot objective for a set of users sharing one RIS.
struct RadioInstance {
    std::vector<ChannelTriple<double>> triples;
    std::vector<CMatrixd> covariances;
    std::vector<double> weights;       // tau W_k (B_l,k - B_r,k)
    std::vector<double> direct_gain;   // 1 - beta_a or 1 - p_a
    std::vector<double> indirect_gain; // 1 - beta_r or 1 - p_r
    std::vector<double> noise_power;
    double v = 0.0;
    int ris_elements = 0;
};

RadioInstance random_radio_instance(Rng& rng, int users, int user_antennas, int ap_antennas, int ris_elements);

/// sum_k V tr Q_k - w_k log2 det(I + H_k Q_k H_k^H / s_k^2) at an arbitrary
/// (not necessarily unit-modulus) r, with an explicit determinant.
double radio_objective(const RadioInstance& inst, const CVectord& r);

/// Central differences over the 2M real coordinates, packed as
/// d/dRe r_i + j d/dIm r_i; step h relative to max(1, |r_i|).
CVectord finite_difference_gradient(const RadioInstance& inst, const CVectord& r, double h = 1e-6);

/// <a, b> / (|a| |b|) with the real inner product on C^M = R^2M.
double cosine_similarity(const CVectord& a, const CVectord& b);

// --- per-user covariance ------------------------------------------------

/// Scale-free random subproblem: noise 1, W = tau = 1, random V, budget,
/// backlogs and channel gain (a fraction of instances has B_l <= B_r).
PrecoderInput<double> random_precoder_instance(Rng& rng, int user_antennas, int ap_antennas);

/// f(Q) = V tr Q - w ln det(I + H Q H^H / s^2), w = tau W (B_l - B_r) / ln 2.
double covariance_objective(const PrecoderInput<double>& in, const CMatrixd& q);

/// Euclidean projection onto {Q = Q^H >= 0, tr Q <= budget}; the
/// eigenvalue shift is found by bisection.
CMatrixd project_psd_trace(const CMatrixd& x, double budget);

struct CovarianceOracle {
    CMatrixd covariance;
    double objective = 0.0;
    int iterations = 0;
};

/// Accelerated projected gradient (FISTA with restart) on the full matrix
/// variable, step 1 / L with L = w lambda_max(H^H H / s^2)^2.
CovarianceOracle projected_gradient_covariance(const PrecoderInput<double>& in, int max_iterations = 20000,
                                               double tolerance = 1e-14);

/// Scaled KKT residuals of a candidate Q. The multiplier of the trace
/// constraint is recovered from Q itself, mu = -tr(G Q) / tr Q with
/// G = grad f(Q). Each residual is divided by s = V + |w| lambda_max.
struct KktResiduals {
    double stationarity = 0.0;     // ||(G + mu I) Q||_F / (s max(tr Q, P))
    double dual_feasibility = 0.0; // max(0, -lambda_min(G + mu I)) / s
    double slackness = 0.0;        // |mu (P - tr Q)| / (s P)
    double multiplier_sign = 0.0;  // max(0, -mu) / s
    double primal = 0.0;           // max(0, tr Q - P) / P and PSD violation

    double max() const;
};
KktResiduals kkt_residuals(const PrecoderInput<double>& in, const CMatrixd& q);

// --- CPU allocation -----------------------------------------------------

/// Optimum of max sum_k B_r,k f_k / J_k s.t. 0 <= f_k <= cap_k,
/// sum_k f_k <= f_max, by enumerating the vertices of the polytope (every
/// variable at a bound except at most one). Exponential; N <= 8.
double cpu_lp_optimum(std::span<const double> remote_backlog, std::span<const double> cycles_per_bit, double max_cpu,
                      double slot_duration);

// --- checks -------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Analytic RIS gradient vs central differences on random instances with
/// N <= 2, K <= 2, N_a <= 2, M <= 8; passes at min cosine >= 0.999 and
/// norms agreeing to 1e-4 (the cosine alone is blind to a constant factor).
CheckResult check_gradient(std::uint64_t seed, int instances);

/// Water-filling vs the projected-gradient oracle (relative gap <= 1e-6)
/// and KKT residuals <= 1e-6 on random instances with K <= 3.
CheckResult check_covariance(std::uint64_t seed, int instances);

/// Greedy CPU allocation vs the LP vertex oracle, relative 1e-9, N <= 4.
CheckResult check_cpu(std::uint64_t seed, int instances);

/// Two users, five slots of fixed rates / arrivals / frequencies against a
/// hand-computed trace, compared with ==.
CheckResult check_queue_trace();

// --- self-test ----------------------------------------------------------

struct SelftestOptions {
    std::uint64_t seed = 1;
    int gradient_instances = 50;
    int covariance_instances = 100;
    int cpu_instances = 200;
};

/// Oracle and invariant checks; one line per check on `out`. Returns the
/// number of failed checks.
int run_selftest(std::ostream& out, const SelftestOptions& options = {});

} // namespace rismec::oracle
