// Small shared fixtures for the unit tests.
#pragma once

#include <random>

#include "rismec/channel.hpp"
#include "rismec/config.hpp"

namespace rismec::test {

inline CMatrixd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    CMatrixd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
    return m;
}

inline ChannelTriple<double> random_triple(Rng& rng, int na, int k, int m, double scale = 1.0) {
    return {random_matrix(rng, na, k, scale), random_matrix(rng, m, k, scale), random_matrix(rng, na, m, scale)};
}

inline CMatrixd random_psd(Rng& rng, int k, double trace) {
    const CMatrixd a = random_matrix(rng, k, k);
    CMatrixd q = a * a.adjoint();
    q *= trace / q.trace().real();
    return (q + q.adjoint()) / 2.0;
}

/// A small, fast scenario: 2 users, 2x2 MIMO, 8 RIS elements.
inline SystemConfig small_config(int slots = 200) {
    SystemConfig c = SystemConfig::defaults(2);
    c.user_antennas = 2;
    c.ap_antennas = 2;
    c.ris_elements = 8;
    c.ris_position = {5.0, 5.0, 6.0};
    c.slots = slots;
    c.pgm_iterations = 5;
    c.lyapunov_v = 1e11;
    return c;
}

} // namespace rismec::test
