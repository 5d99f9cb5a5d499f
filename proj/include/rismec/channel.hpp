// Channel composition, uplink rate, and the geometric mmWave channel sampler.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "rismec/config.hpp"
#include "rismec/ris_config.hpp"
#include "rismec/types.hpp"

namespace rismec {

using Rng = std::mt19937_64;

/// Raw per-user channels of one slot.
///   direct:      N_a x K  (user -> AP)
///   user_to_ris: M x K    (user -> RIS)
///   ris_to_ap:   N_a x M  (RIS -> AP)
template <typename Scalar>
struct ChannelTriple {
    CMatrix<Scalar> direct;
    CMatrix<Scalar> user_to_ris;
    CMatrix<Scalar> ris_to_ap;
};

/// Per-user blocking flags of one slot (1 = blocked).
struct LinkState {
    std::vector<std::uint8_t> direct_blocked;
    std::vector<std::uint8_t> indirect_blocked;

    static LinkState clear(int num_users) {
        return {std::vector<std::uint8_t>(num_users, 0), std::vector<std::uint8_t>(num_users, 0)};
    }
};

struct NodeGeometry {
    Position ap;
    Position ris;
    std::vector<Position> users;
};

template <typename Scalar>
void check_dimensions(const ChannelTriple<Scalar>& t, Eigen::Index ris_size) {
    const auto na = t.direct.rows();
    const auto k = t.direct.cols();
    if (t.user_to_ris.cols() != k || t.ris_to_ap.rows() != na || t.ris_to_ap.cols() != t.user_to_ris.rows())
        throw InvalidInput("channel triple dimensions are inconsistent");
    if (ris_size != t.user_to_ris.rows()) throw InvalidInput("RIS size does not match the channel triple");
}

/// direct_weight * H_d + indirect_weight * H_ra diag(r) H_kr.
/// The cascaded product is skipped when indirect_weight is zero.
template <typename Scalar>
CMatrix<Scalar> compose_weighted(const ChannelTriple<Scalar>& t, const RisConfig<Scalar>& ris,
                                 Scalar direct_weight, Scalar indirect_weight) {
    check_dimensions(t, ris.size());
    CMatrix<Scalar> h = direct_weight * t.direct;
    if (indirect_weight != Scalar(0))
        h.noalias() += indirect_weight * (t.ris_to_ap * ris.reflection().asDiagonal()).lazyProduct(t.user_to_ris);
    return h;
}

/// Effective channel under the realized blocking flags.
template <typename Scalar>
CMatrix<Scalar> compose_channel(const ChannelTriple<Scalar>& t, const RisConfig<Scalar>& ris,
                                bool direct_blocked, bool indirect_blocked) {
    return compose_weighted(t, ris, Scalar(direct_blocked ? 0 : 1), Scalar(indirect_blocked ? 0 : 1));
}

template <typename Scalar>
CMatrix<Scalar> compose_channel(const ChannelTriple<Scalar>& t, const RisConfig<Scalar>& ris,
                                const LinkState& state, int user) {
    return compose_channel(t, ris, state.direct_blocked.at(user) != 0, state.indirect_blocked.at(user) != 0);
}

/// Expected channel given only the blocking probabilities.
template <typename Scalar>
CMatrix<Scalar> compose_channel_statistical(const ChannelTriple<Scalar>& t, const RisConfig<Scalar>& ris,
                                            Scalar p_direct, Scalar p_indirect) {
    return compose_weighted(t, ris, Scalar(1) - p_direct, Scalar(1) - p_indirect);
}

/// ln det(I + A) for Hermitian PSD A via Cholesky; round-off below zero
/// is clamped.
template <typename Scalar>
Scalar log_det_identity_plus(const CMatrix<Scalar>& a) {
    CMatrix<Scalar> m = CMatrix<Scalar>::Identity(a.rows(), a.cols()) + a;
    Eigen::LLT<CMatrix<Scalar>> llt(m);
    Scalar value = 0;
    if (llt.info() == Eigen::Success) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) value += std::log(llt.matrixL()(i, i).real());
        value *= 2;
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(m, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < m.rows(); ++i) value += std::log(std::max(es.eigenvalues()(i), Scalar(1)));
    }
    return std::max(value, Scalar(0));
}

/// Throws InvalidInput unless q is square, finite, Hermitian and PSD up to
/// a relative tolerance.
template <typename Scalar>
void check_psd(const CMatrix<Scalar>& q) {
    if (q.rows() != q.cols()) throw InvalidInput("covariance must be square");
    if (!q.allFinite()) throw InvalidInput("covariance has non-finite entries");
    const Scalar scale = std::max(Scalar(1), q.norm());
    const Scalar tol = Scalar(1e3) * std::numeric_limits<Scalar>::epsilon() * scale;
    if ((q - q.adjoint()).norm() > tol) throw InvalidInput("covariance is not Hermitian");
    if (q.rows() == 0) return;
    Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw InvalidInput("covariance is not positive semidefinite");
}

/// W log2 det(I + H Q H^H / noise_power), bits/s.
template <typename Scalar>
Scalar achievable_rate(const CMatrix<Scalar>& h, const CMatrix<Scalar>& q, Scalar bandwidth, Scalar noise_power) {
    if (!(noise_power > 0)) throw InvalidInput("noise power must be positive");
    if (h.cols() != q.rows()) throw InvalidInput("channel/covariance dimension mismatch");
    if (!h.allFinite()) throw InvalidInput("channel has non-finite entries");
    check_psd(q);
    const CMatrix<Scalar> gram = (h * q * h.adjoint()) / noise_power;
    const CMatrix<Scalar> herm = (gram + gram.adjoint()) / Scalar(2);
    return bandwidth * log_det_identity_plus(herm) / std::numbers::ln2_v<Scalar>;
}

// --- sampling (double precision) ---------------------------------------

/// Power gain (lambda / (4 pi))^2 d^-exponent; exponent 2 is free space.
double path_loss(double distance, double wavelength, double exponent = 2.0);

/// Half-wavelength ULA response exp(j pi n cos_angle), n = 0..n-1.
CVectord ula_response(int elements, double cos_angle);

/// AP and RIS at their configured anchors, users uniform over the
/// [0, area_width] x [0, area_depth] square at user_height.
NodeGeometry generate_geometry(const SystemConfig& config, Rng& rng);

/// One Rician draw (factor `rician_k_db`, +inf for pure LoS) of an rx x tx
/// channel between two ULAs with axes along x, scaled so that
/// E||H||_F^2 = gain * rx * tx.
CMatrixd sample_link(const Position& tx, const Position& rx, int tx_elements, int rx_elements, double gain,
                     double rician_k_db, double wavelength, Rng& rng);

/// Independent draw of all three matrices for one user.
ChannelTriple<double> sample_channel_triple(const NodeGeometry& geometry, const SystemConfig& config,
                                            int user, Rng& rng);

/// One slot of channels: a single RIS->AP draw shared by all users plus
/// independent direct and user->RIS draws per user.
std::vector<ChannelTriple<double>> sample_slot_channels(const NodeGeometry& geometry, const SystemConfig& config,
                                                        Rng& rng);

/// Bernoulli(p) blocking per user and link.
LinkState sample_blocking(const SystemConfig& config, Rng& rng);

} // namespace rismec
