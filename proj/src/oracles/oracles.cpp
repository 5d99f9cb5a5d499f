#include "rismec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rismec::oracle {

namespace {

CMatrixd complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    CMatrixd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
    return m;
}

double log_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

CMatrixd hermitian(const CMatrixd& x) { return (x + x.adjoint()) / 2.0; }

double max_gain(const PrecoderInput<double>& in) {
    const CMatrixd g = hermitian(in.channel.adjoint() * in.channel / in.noise_power);
    Eigen::SelfAdjointEigenSolver<CMatrixd> es(g, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

double log_weight(const PrecoderInput<double>& in) {
    return in.slot_duration * in.bandwidth * (in.local_backlog - in.remote_backlog) / std::numbers::ln2;
}

CMatrixd covariance_gradient(const PrecoderInput<double>& in, const CMatrixd& q) {
    const Eigen::Index k = q.rows();
    const CMatrixd z = in.channel / std::sqrt(in.noise_power);
    const CMatrixd a = CMatrixd::Identity(z.rows(), z.rows()) + z * q * z.adjoint();
    const CMatrixd g = in.v * CMatrixd::Identity(k, k) - log_weight(in) * z.adjoint() * a.inverse() * z;
    return hermitian(g);
}

} // namespace

RadioInstance random_radio_instance(Rng& rng, int users, int user_antennas, int ap_antennas, int ris_elements) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RadioInstance inst;
    inst.ris_elements = ris_elements;
    inst.v = log_uniform(rng, 0.1, 10.0);
    const CMatrixd ris_to_ap = complex_gaussian(rng, ap_antennas, ris_elements, log_uniform(rng, 0.2, 2.0));
    for (int k = 0; k < users; ++k) {
        ChannelTriple<double> t;
        t.direct = complex_gaussian(rng, ap_antennas, user_antennas, log_uniform(rng, 0.1, 2.0));
        t.user_to_ris = complex_gaussian(rng, ris_elements, user_antennas, log_uniform(rng, 0.2, 2.0));
        t.ris_to_ap = ris_to_ap;
        inst.triples.push_back(std::move(t));

        const CMatrixd a = complex_gaussian(rng, user_antennas, user_antennas, 1.0);
        CMatrixd q = a * a.adjoint();
        q *= log_uniform(rng, 0.1, 2.0) / q.trace().real();
        inst.covariances.push_back(hermitian(q));

        // Mostly positive weights (B_l > B_r), some negative.
        inst.weights.push_back(u(rng) < 0.8 ? log_uniform(rng, 0.5, 5.0) : -log_uniform(rng, 0.5, 5.0));
        inst.direct_gain.push_back(u(rng) < 0.25 ? 0.0 : u(rng));
        inst.indirect_gain.push_back(0.2 + 0.8 * u(rng));
        inst.noise_power.push_back(log_uniform(rng, 0.5, 2.0));
    }
    return inst;
}

double radio_objective(const RadioInstance& inst, const CVectord& r) {
    double value = 0.0;
    for (std::size_t k = 0; k < inst.triples.size(); ++k) {
        const auto& t = inst.triples[k];
        const CMatrixd cascade = t.ris_to_ap * r.asDiagonal() * t.user_to_ris;
        const CMatrixd h = inst.direct_gain[k] * t.direct + inst.indirect_gain[k] * cascade;
        const CMatrixd& q = inst.covariances[k];
        const CMatrixd m = CMatrixd::Identity(h.rows(), h.rows()) + h * q * h.adjoint() / inst.noise_power[k];
        const double log2det = std::log2(m.determinant().real());
        value += inst.v * q.trace().real() - inst.weights[k] * log2det;
    }
    return value;
}

CVectord finite_difference_gradient(const RadioInstance& inst, const CVectord& r, double h) {
    CVectord g(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(r(i)));
        double parts[2];
        for (int part = 0; part < 2; ++part) {
            const std::complex<double> e = part == 0 ? std::complex<double>(step, 0) : std::complex<double>(0, step);
            CVectord plus = r;
            CVectord minus = r;
            plus(i) += e;
            minus(i) -= e;
            parts[part] = (radio_objective(inst, plus) - radio_objective(inst, minus)) / (2.0 * step);
        }
        g(i) = {parts[0], parts[1]};
    }
    return g;
}

double cosine_similarity(const CVectord& a, const CVectord& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return na == nb ? 1.0 : 0.0;
    return (a.adjoint() * b)(0, 0).real() / (na * nb);
}

PrecoderInput<double> random_precoder_instance(Rng& rng, int user_antennas, int ap_antennas) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PrecoderInput<double> in;
    in.channel = complex_gaussian(rng, ap_antennas, user_antennas, log_uniform(rng, 0.05, 20.0));
    in.noise_power = 1.0;
    in.bandwidth = 1.0;
    in.slot_duration = 1.0;
    in.remote_backlog = 10.0 * u(rng);
    in.local_backlog = u(rng) < 0.85 ? in.remote_backlog + log_uniform(rng, 0.1, 10.0) : in.remote_backlog * u(rng);
    in.v = log_uniform(rng, 0.05, 5.0);
    in.max_power = log_uniform(rng, 0.1, 10.0);
    return in;
}

double covariance_objective(const PrecoderInput<double>& in, const CMatrixd& q) {
    const CMatrixd z = in.channel / std::sqrt(in.noise_power);
    const CMatrixd m = CMatrixd::Identity(z.rows(), z.rows()) + z * q * z.adjoint();
    return in.v * q.trace().real() - log_weight(in) * std::log(m.determinant().real());
}

CMatrixd project_psd_trace(const CMatrixd& x, double budget) {
    Eigen::SelfAdjointEigenSolver<CMatrixd> es(hermitian(x));
    const Eigen::VectorXd lambda = es.eigenvalues();
    auto mass = [&](double shift) { return (lambda.array() - shift).max(0.0).sum(); };

    double shift = 0.0;
    if (mass(0.0) > budget) {
        double lo = 0.0;
        double hi = lambda.maxCoeff();
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (mass(mid) > budget ? lo : hi) = mid;
        }
        shift = hi;
    }
    const Eigen::VectorXd kept = (lambda.array() - shift).max(0.0);
    return hermitian(es.eigenvectors() * kept.cast<std::complex<double>>().asDiagonal() *
                     es.eigenvectors().adjoint());
}

CovarianceOracle projected_gradient_covariance(const PrecoderInput<double>& in, int max_iterations,
                                               double tolerance) {
    const Eigen::Index k = in.channel.cols();
    const double g = max_gain(in);
    double lipschitz = std::abs(log_weight(in)) * g * g;
    if (!(lipschitz > 0.0)) lipschitz = 1.0;

    CMatrixd x = CMatrixd::Zero(k, k);
    CMatrixd y = x;
    double fx = covariance_objective(in, x);
    double t = 1.0;
    CovarianceOracle out;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        const CMatrixd next = project_psd_trace(y - covariance_gradient(in, y) / lipschitz, in.max_power);
        const double fn = covariance_objective(in, next);
        if (fn > fx) {
            if (t == 1.0) break; // a plain gradient step no longer descends
            t = 1.0;             // restart the momentum
            y = x;
            continue;
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double moved = (next - x).norm();
        y = next + ((t - 1.0) / tn) * (next - x);
        x = next;
        t = tn;
        fx = fn;
        if (moved <= tolerance * std::max(1.0, x.norm())) break;
    }
    out.covariance = x;
    out.objective = fx;
    return out;
}

double KktResiduals::max() const {
    return std::max({stationarity, dual_feasibility, slackness, multiplier_sign, primal});
}

KktResiduals kkt_residuals(const PrecoderInput<double>& in, const CMatrixd& q) {
    const Eigen::Index k = q.rows();
    const double scale = in.v + std::abs(log_weight(in)) * max_gain(in);
    const double power = q.trace().real();
    const CMatrixd g = covariance_gradient(in, q);

    const double mu = power > 0.0 ? -(g * q).trace().real() / power : 0.0;
    const CMatrixd shifted = hermitian(g + mu * CMatrixd::Identity(k, k));
    Eigen::SelfAdjointEigenSolver<CMatrixd> dual(shifted, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<CMatrixd> primal(hermitian(q), Eigen::EigenvaluesOnly);

    KktResiduals r;
    r.stationarity = (shifted * q).norm() / (scale * std::max(power, in.max_power));
    r.dual_feasibility = std::max(0.0, -dual.eigenvalues().minCoeff()) / scale;
    r.slackness = std::abs(mu * (in.max_power - power)) / (scale * in.max_power);
    r.multiplier_sign = std::max(0.0, -mu) / scale;
    r.primal = std::max(std::max(0.0, power - in.max_power), std::max(0.0, -primal.eigenvalues().minCoeff())) /
               in.max_power;
    return r;
}

double cpu_lp_optimum(std::span<const double> remote_backlog, std::span<const double> cycles_per_bit, double max_cpu,
                      double slot_duration) {
    const std::size_t n = remote_backlog.size();
    if (n > 8) throw InvalidInput("LP vertex enumeration is limited to 8 users");
    std::vector<double> cap(n);
    std::vector<double> gain(n);
    for (std::size_t k = 0; k < n; ++k) {
        cap[k] = std::min(max_cpu, remote_backlog[k] * cycles_per_bit[k] / slot_duration);
        gain[k] = remote_backlog[k] / cycles_per_bit[k];
    }

    // state per variable: 0 lower bound, 1 upper bound, 2 set by the budget
    std::size_t combos = 1;
    for (std::size_t k = 0; k < n; ++k) combos *= 3;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> state(n);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        int free_count = 0;
        std::size_t free_index = 0;
        for (std::size_t k = 0; k < n; ++k) {
            state[k] = static_cast<int>(rest % 3);
            rest /= 3;
            if (state[k] == 2) {
                ++free_count;
                free_index = k;
            }
        }
        if (free_count > 1) continue;
        double used = 0.0;
        double value = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (state[k] == 1) {
                used += cap[k];
                value += gain[k] * cap[k];
            }
        if (free_count == 1) {
            const double f = max_cpu - used;
            if (f < 0.0 || f > cap[free_index]) continue;
            used += f;
            value += gain[free_index] * f;
        }
        if (used > max_cpu * (1.0 + 1e-12)) continue;
        best = std::max(best, value);
    }
    return best;
}

} // namespace rismec::oracle
