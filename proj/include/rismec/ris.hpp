// RIS phase control: projected-gradient update, quantization, random phases.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>

#include "rismec/channel.hpp"
#include "rismec/ris_config.hpp"

namespace rismec {

/// Per-user contribution to the RIS gradient. Pointers are non-owning and
/// must outlive the gradient call.
template <typename Scalar>
struct GradientTerm {
    const ChannelTriple<Scalar>* channels = nullptr;
    const CMatrix<Scalar>* effective = nullptr;  // H_k composed at the r being differentiated
    const CMatrix<Scalar>* covariance = nullptr; // Q_k
    Scalar weight = 0;        // tau * W_k * (B_l,k - B_r,k)
    Scalar indirect_gain = 0; // multiplier of the cascaded term: 1 - beta_r, 1 - p_r, or 0
    Scalar noise_power = 1;
};

/// Gradient of
///   f(r) = sum_k V tr(Q_k) - tau (B_l,k - B_r,k) W_k log2 det(I + H_k Q_k H_k^H / s_k^2)
/// with respect to the 2M real coordinates (Re r, Im r), packed as
/// d f / d Re r_i + j d f / d Im r_i. That is 2/ln2 times the Wirtinger
/// derivative
///   -sum_k w_k diag(H_ra^H (I + Z Q Z^H)^{-1} Z Q Hbar_kr^H),
/// Z = H_k / s_k, Hbar_kr = H_kr / s_k. Users with zero weight or zero
/// indirect gain contribute nothing.
template <typename Scalar>
CVector<Scalar> gradient_wrt_ris(std::span<const GradientTerm<Scalar>> terms, Eigen::Index ris_size) {
    CVector<Scalar> grad = CVector<Scalar>::Zero(ris_size);
    for (const auto& term : terms) {
        if (term.weight == Scalar(0) || term.indirect_gain == Scalar(0)) continue;
        const auto& t = *term.channels;
        const auto& h = *term.effective;
        const auto& q = *term.covariance;
        check_dimensions(t, ris_size);
        if (h.rows() != t.direct.rows() || h.cols() != t.direct.cols() || q.rows() != h.cols() || q.cols() != h.cols())
            throw InvalidInput("gradient term dimensions are inconsistent");
        if (!(term.noise_power > 0)) throw InvalidInput("noise power must be positive");

        const Scalar sigma = std::sqrt(term.noise_power);
        const CMatrix<Scalar> z = h / sigma;
        const CMatrix<Scalar> zq = z.lazyProduct(q);
        CMatrix<Scalar> a = CMatrix<Scalar>::Identity(h.rows(), h.rows()) + zq.lazyProduct(z.adjoint());
        a = (a + a.adjoint()) / Scalar(2);
        // X = A^{-1} Z Q Hbar_kr^H, N_a x M; solve against the narrow N_a x K side first.
        const CMatrix<Scalar> y = a.llt().solve(zq);
        const CMatrix<Scalar> x = y.lazyProduct(t.user_to_ris.adjoint()) / sigma;
        // diag(H_ra^H X)_i = sum_n conj(H_ra(n, i)) X(n, i)
        const CVector<Scalar> d = t.ris_to_ap.conjugate().cwiseProduct(x).colwise().sum().transpose();
        grad -= (Scalar(2) / std::numbers::ln2_v<Scalar>) * term.weight * term.indirect_gain * d;
    }
    return grad;
}

/// r <- P(r - step * grad).
template <typename Scalar>
RisConfig<Scalar> pgm_step(const RisConfig<Scalar>& r, const CVector<Scalar>& grad, Scalar step) {
    if (grad.size() != r.size()) throw InvalidInput("gradient size does not match the RIS");
    return project_unit_circle<Scalar>(r.reflection() - step * grad);
}

/// Snaps every phase to the nearest of 2^bits uniform levels 2 pi m / 2^bits;
/// exact ties go to the lower level.
template <typename Scalar>
RisConfig<Scalar> quantize_phases(const RisConfig<Scalar>& r, int bits) {
    if (bits < 1) throw InvalidInput("quantization needs at least one bit");
    const long long levels = 1LL << bits;
    const Scalar spacing = 2 * std::numbers::pi_v<Scalar> / Scalar(levels);
    RVector<Scalar> theta = r.phases();
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        long long m = static_cast<long long>(std::ceil(theta(i) / spacing - Scalar(0.5)));
        m = ((m % levels) + levels) % levels;
        theta(i) = spacing * Scalar(m);
    }
    return RisConfig<Scalar>::from_phases(theta);
}

/// I.i.d. phases uniform on [0, 2 pi).
template <typename Scalar, typename Generator>
RisConfig<Scalar> random_phases(Eigen::Index elements, Generator& rng) {
    std::uniform_real_distribution<Scalar> u(0, 2 * std::numbers::pi_v<Scalar>);
    RVector<Scalar> theta(elements);
    for (Eigen::Index i = 0; i < elements; ++i) theta(i) = u(rng);
    return RisConfig<Scalar>::from_phases(theta);
}

} // namespace rismec
