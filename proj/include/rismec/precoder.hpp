// Per-user uplink covariance: zero-transmit rule and water-filling.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "rismec/channel.hpp"

namespace rismec {

template <typename Scalar>
struct PrecoderInput {
    CMatrix<Scalar> channel; // effective H_k, N_a x K
    Scalar local_backlog = 0;  // B_l,k, bits
    Scalar remote_backlog = 0; // B_r,k, bits
    Scalar v = 0;
    Scalar slot_duration = 0;
    Scalar bandwidth = 0;
    Scalar noise_power = 0;
    Scalar max_power = 0;

    void validate() const {
        if (!(local_backlog >= 0) || !(remote_backlog >= 0)) throw InvalidInput("backlogs must be nonnegative");
        if (!(v >= 0)) throw InvalidInput("V must be nonnegative");
        if (!(slot_duration > 0) || !(bandwidth > 0)) throw InvalidInput("slot duration and bandwidth must be positive");
        if (!(noise_power > 0)) throw InvalidInput("noise power must be positive");
        if (!(max_power > 0)) throw InvalidInput("power budget must be positive");
        if (!channel.allFinite()) throw InvalidInput("channel has non-finite entries");
    }
};

template <typename Scalar>
struct CovarianceResult {
    CMatrix<Scalar> covariance;  // Q_k
    Scalar tx_power = 0;         // tr(Q_k)
    RVector<Scalar> mode_gains;  // eigenvalues of H^H H / s^2
    RVector<Scalar> eigen_powers; // lambda_i*, aligned with mode_gains
    CMatrix<Scalar> basis;       // eigenvectors (columns) of H^H H
    Scalar water_level_dual = 0; // mu*
};

/// Weight w of ln det(I + H Q H^H / s^2) in the per-user objective:
/// tau * W * (B_l - B_r) / ln 2.
template <typename Scalar>
Scalar rate_weight(const PrecoderInput<Scalar>& in) {
    return in.slot_duration * in.bandwidth * (in.local_backlog - in.remote_backlog) / std::numbers::ln2_v<Scalar>;
}

/// Minimizes V tr(Q) - tau (B_l - B_r) R(Q) over {Q >= 0, tr Q <= P_max}.
///
/// Q = 0 when B_l <= B_r or the channel is zero. Otherwise the eigenmodes
/// s_i of H^H H / s^2 are water-filled: lambda_i = max(0, w/V - 1/s_i) if
/// that fits the budget, else lambda_i = max(0, 1/(mu + V/w) - 1/s_i) with
/// mu found by sweeping the modes in decreasing gain order. V = 0 spends
/// the full budget.
template <typename Scalar>
CovarianceResult<Scalar> optimize_covariance(const PrecoderInput<Scalar>& in) {
    in.validate();
    const Eigen::Index k = in.channel.cols();
    CovarianceResult<Scalar> out;
    out.covariance = CMatrix<Scalar>::Zero(k, k);
    out.eigen_powers = RVector<Scalar>::Zero(k);
    out.mode_gains = RVector<Scalar>::Zero(k);
    out.basis = CMatrix<Scalar>::Identity(k, k);

    if (in.local_backlog <= in.remote_backlog || k == 0) return out;

    CMatrix<Scalar> gram = in.channel.adjoint() * in.channel / in.noise_power;
    gram = (gram + gram.adjoint()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(gram);
    out.mode_gains = es.eigenvalues();
    out.basis = es.eigenvectors();
    if (!(out.mode_gains.maxCoeff() > 0)) return out;

    const Scalar w = rate_weight(in);
    const Scalar inv_level = in.v / w; // V / w
    const Scalar budget = in.max_power;

    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < k; ++i)
        if (out.mode_gains(i) > 0) active.push_back(i);

    Scalar level = 0; // 1 / (mu + V/w)
    bool unconstrained = false;
    if (in.v > 0) {
        level = 1 / inv_level;
        Scalar total = 0;
        for (auto i : active) total += std::max(Scalar(0), level - 1 / out.mode_gains(i));
        unconstrained = total <= budget;
    }

    if (unconstrained) {
        out.water_level_dual = 0;
    } else {
        // Decreasing gain order; stable so tied modes keep index order.
        std::stable_sort(active.begin(), active.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return out.mode_gains(a) > out.mode_gains(b); });
        const std::size_t n = active.size();
        Scalar s = 0;
        std::size_t count = n;
        for (std::size_t i = 0; i < n; ++i) {
            s += 1 / out.mode_gains(active[i]);
            const Scalar candidate = (s + budget) / Scalar(i + 1);
            const bool covers_current = candidate - 1 / out.mode_gains(active[i]) >= 0;
            const bool excludes_next = i + 1 == n || candidate - 1 / out.mode_gains(active[i + 1]) <= 0;
            if (covers_current && excludes_next) {
                count = i + 1;
                break;
            }
        }
        s = 0;
        for (std::size_t i = 0; i < count; ++i) s += 1 / out.mode_gains(active[i]);
        level = (s + budget) / Scalar(count);
        out.water_level_dual = std::max(Scalar(0), 1 / level - inv_level);
    }

    Scalar total = 0;
    for (auto i : active) {
        out.eigen_powers(i) = std::max(Scalar(0), level - 1 / out.mode_gains(i));
        total += out.eigen_powers(i);
    }
    if (total > budget) {
        out.eigen_powers *= budget / total;
        total = out.eigen_powers.sum();
    }
    out.tx_power = total;
    out.covariance = out.basis * out.eigen_powers.template cast<Complex<Scalar>>().asDiagonal() * out.basis.adjoint();
    out.covariance = (out.covariance + out.covariance.adjoint()) / Scalar(2);
    return out;
}

/// V tr(Q) - tau (B_l - B_r) R(Q).
template <typename Scalar>
Scalar wf_objective(const PrecoderInput<Scalar>& in, const CMatrix<Scalar>& q) {
    const Scalar rate = achievable_rate(in.channel, q, in.bandwidth, in.noise_power);
    return in.v * q.trace().real() - in.slot_duration * (in.local_backlog - in.remote_backlog) * rate;
}

} // namespace rismec
