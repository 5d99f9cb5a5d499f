#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rismec/oracles.hpp"
#include "rismec/queues.hpp"
#include "rismec/ris.hpp"
#include "rismec/scheduler.hpp"

namespace rismec::oracle {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string seconds_since(std::chrono::steady_clock::time_point start) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream os;
    os.precision(3);
    os << s << " s";
    return os.str();
}

} // namespace

CheckResult check_gradient(std::uint64_t seed, int instances) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    double worst = 1.0;
    double worst_scale = 0.0; // | |analytic| / |numeric| - 1 |
    for (int i = 0; i < instances; ++i) {
        const int n = uniform_int(rng, 1, 2);
        const int k = uniform_int(rng, 1, 2);
        const int na = uniform_int(rng, 1, 2);
        const int m = uniform_int(rng, 1, 8);
        const RadioInstance inst = random_radio_instance(rng, n, k, na, m);
        const RisConfig<double> ris = random_phases<double>(m, rng);

        std::vector<CMatrixd> effective(n);
        std::vector<GradientTerm<double>> terms(n);
        for (int u = 0; u < n; ++u) {
            effective[u] = compose_weighted(inst.triples[u], ris, inst.direct_gain[u], inst.indirect_gain[u]);
            terms[u] = {&inst.triples[u], &effective[u], &inst.covariances[u], inst.weights[u],
                        inst.indirect_gain[u], inst.noise_power[u]};
        }
        const CVectord analytic = gradient_wrt_ris<double>(terms, m);
        const CVectord numeric = finite_difference_gradient(inst, ris.reflection());
        worst = std::min(worst, cosine_similarity(analytic, numeric));
        if (numeric.norm() > 0.0) worst_scale = std::max(worst_scale, std::abs(analytic.norm() / numeric.norm() - 1.0));
    }
    std::ostringstream os;
    os << instances << " instances, min cosine " << worst << " (>= 0.999), max norm ratio error " << worst_scale
       << " (<= 1e-4), " << seconds_since(start);
    return {"gradient vs finite differences", worst >= 0.999 && worst_scale <= 1e-4, os.str()};
}

CheckResult check_covariance(std::uint64_t seed, int instances) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    double worst_gap = 0.0;
    double worst_kkt = 0.0;
    for (int i = 0; i < instances; ++i) {
        const PrecoderInput<double> in = random_precoder_instance(rng, uniform_int(rng, 1, 3), uniform_int(rng, 1, 3));
        const CovarianceResult<double> wf = optimize_covariance(in);
        const CovarianceOracle ref = projected_gradient_covariance(in);
        const double f = covariance_objective(in, wf.covariance);
        // positive gap: water-filling worse than the oracle
        const double gap = (f - ref.objective) / std::max(std::abs(ref.objective), 1e-12);
        worst_gap = std::max(worst_gap, gap);
        worst_kkt = std::max(worst_kkt, kkt_residuals(in, wf.covariance).max());
    }
    std::ostringstream os;
    os << instances << " instances, max relative gap " << worst_gap << ", max KKT residual " << worst_kkt
       << " (<= 1e-6), " << seconds_since(start);
    return {"water-filling vs projected-gradient oracle", worst_gap <= 1e-6 && worst_kkt <= 1e-6, os.str()};
}

CheckResult check_cpu(std::uint64_t seed, int instances) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        const int n = uniform_int(rng, 1, 4);
        std::vector<double> remote(n);
        std::vector<double> cycles(n);
        for (int k = 0; k < n; ++k) {
            // some empty queues and some exact ties
            remote[k] = u(rng) < 0.15 ? 0.0 : std::floor(1e5 * u(rng));
            cycles[k] = u(rng) < 0.3 ? 500.0 : 100.0 + std::floor(900.0 * u(rng));
        }
        if (n > 1 && u(rng) < 0.2) {
            remote[1] = remote[0];
            cycles[1] = cycles[0];
        }
        const double tau = 0.01;
        const double fmax = 1e9 * (0.1 + 5.0 * u(rng));
        const ComputeAllocation a = allocate_cpu(remote, cycles, fmax, tau);
        const double greedy = cpu_objective(remote, cycles, a.frequency);
        const double lp = cpu_lp_optimum(remote, cycles, fmax, tau);
        bool feasible = a.total() <= fmax;
        for (int k = 0; k < n; ++k)
            feasible = feasible && a.frequency[k] >= 0.0 && a.frequency[k] <= remote[k] * cycles[k] / tau * (1 + 1e-15);
        const double gap = feasible ? std::abs(greedy - lp) / std::max(std::abs(lp), 1e-300) : 1.0;
        worst = std::max(worst, lp == 0.0 && greedy == 0.0 ? 0.0 : gap);
    }
    std::ostringstream os;
    os << instances << " instances, max relative gap " << worst << " (<= 1e-9), " << seconds_since(start);
    return {"CPU greedy vs LP vertex enumeration", worst <= 1e-9, os.str()};
}

CheckResult check_queue_trace() {
    SystemConfig c = SystemConfig::defaults(2);
    c.slot_duration = 0.25;
    c.cycles_per_bit = {2.0, 4.0};

    // per slot: rates (bits/s), arrivals (bits), frequencies (cycles/s)
    const double rates[5][2] = {{400, 0}, {1000, 1600}, {2000, 4000}, {0, 40}, {502, 0}};
    const double arrivals[5][2] = {{300, 1000}, {50, 0}, {0, 10}, {125.5, 0.5}, {7.25, 0}};
    const double freqs[5][2] = {{800, 0}, {400, 3200}, {1200, 1600}, {2000, 16000}, {0, 32}};

    // B(t+1) worked out by hand:
    //   user 0: tau R = 100, 250, 500, 0, 125.5;  tau f / J = 100, 50, 150, 250, 0
    //   user 1: tau R = 0, 400, 1000, 10, 0;      tau f / J = 0, 200, 100, 1000, 2
    const double local[5][2] = {{300, 1000}, {100, 600}, {0, 10}, {125.5, 0.5}, {7.25, 0.5}};
    const double remote[5][2] = {{0, 0}, {250, 400}, {200, 900}, {0, 10}, {125.5, 8}};
    const double moved[5][2] = {{0, 0}, {250, 400}, {100, 600}, {0, 10}, {125.5, 0}};

    QueueState q = QueueState::empty(2);
    int mismatches = 0;
    for (int t = 0; t < 5; ++t) {
        const std::vector<double> r(rates[t], rates[t] + 2);
        const std::vector<double> a(arrivals[t], arrivals[t] + 2);
        const std::vector<double> f(freqs[t], freqs[t] + 2);
        const std::vector<double> transferred = advance_queues(q, r, a, f, c);
        for (int k = 0; k < 2; ++k)
            if (q.local[k] != local[t][k] || q.remote[k] != remote[t][k] || transferred[k] != moved[t][k])
                ++mismatches;
    }
    std::ostringstream os;
    os << "5 slots x 2 users, " << mismatches << " mismatching entries";
    return {"queue recursion hand trace", mismatches == 0, os.str()};
}

int run_selftest(std::ostream& out, const SelftestOptions& options) {
    std::vector<CheckResult> results;
    results.push_back(check_gradient(options.seed, options.gradient_instances));
    results.push_back(check_covariance(options.seed + 1, options.covariance_instances));
    results.push_back(check_cpu(options.seed + 2, options.cpu_instances));
    results.push_back(check_queue_trace());

    {
        // hand-checkable projection / step / quantization / rate values
        CVectord r(3);
        r << Complex<double>(2, 0), Complex<double>(3, 4), Complex<double>(0, 0);
        const auto p = project_unit_circle<double>(r).reflection();
        const bool projection = std::abs(p(0) - Complex<double>(1, 0)) < 1e-15 &&
                                std::abs(p(1) - Complex<double>(0.6, 0.8)) < 1e-15 && p(2) == Complex<double>(1, 0);

        CVectord grad(1);
        grad << Complex<double>(0, -1);
        const auto stepped = pgm_step(RisConfig<double>(1), grad, 1.0).reflection();
        const bool step = std::abs(stepped(0) - std::polar(1.0, std::numbers::pi / 4)) < 1e-15;

        RVector<double> theta(1);
        theta << std::numbers::pi / 3;
        const auto snapped = quantize_phases(RisConfig<double>::from_phases(theta), 2).phases();
        const bool quant = std::abs(snapped(0) - std::numbers::pi / 2) < 1e-12;

        const CMatrixd h = CMatrixd::Ones(1, 1);
        const CMatrixd q = CMatrixd::Constant(1, 1, 0.5);
        const bool rate = std::abs(achievable_rate(h, q, 1.0, 0.5) - 1.0) < 1e-15;

        std::ostringstream os;
        os << "projection " << projection << ", pgm step " << step << ", 2-bit quantization " << quant
           << ", scalar rate " << rate;
        results.push_back({"closed-form examples", projection && step && quant && rate, os.str()});
    }

    int failed = 0;
    for (const auto& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        failed += r.pass ? 0 : 1;
    }
    return failed;
}

} // namespace rismec::oracle
