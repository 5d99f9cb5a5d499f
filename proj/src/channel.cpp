#include "rismec/channel.hpp"

namespace rismec {

namespace {

double distance(const Position& a, const Position& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace

double path_loss(double d, double wavelength, double exponent) {
    if (!(d > 0)) throw InvalidInput("path loss needs a positive distance");
    const double a = wavelength / (4.0 * std::numbers::pi);
    return a * a * std::pow(d, -exponent);
}

CVectord ula_response(int elements, double cos_angle) {
    CVectord a(elements);
    for (int n = 0; n < elements; ++n) a(n) = std::polar(1.0, std::numbers::pi * n * cos_angle);
    return a;
}

NodeGeometry generate_geometry(const SystemConfig& config, Rng& rng) {
    NodeGeometry g;
    g.ap = config.ap_position;
    g.ris = config.ris_position;
    std::uniform_real_distribution<double> ux(0.0, config.area_width);
    std::uniform_real_distribution<double> uy(0.0, config.area_depth);
    g.users.reserve(config.num_users);
    for (int k = 0; k < config.num_users; ++k) {
        const double x = ux(rng);
        const double y = uy(rng);
        g.users.push_back({x, y, config.user_height});
    }
    return g;
}

CMatrixd sample_link(const Position& tx, const Position& rx, int tx_elements, int rx_elements, double gain,
                     double rician_k_db, double lambda, Rng& rng) {
    const double d = distance(tx, rx);
    // Unit vector tx -> rx projected on the x-aligned array axes.
    const double cos_tx = (rx[0] - tx[0]) / d;
    const double cos_rx = (tx[0] - rx[0]) / d;

    double los_weight = 1.0;
    double nlos_weight = 0.0;
    if (!std::isinf(rician_k_db)) {
        const double kappa = linear_from_db(rician_k_db);
        los_weight = std::sqrt(kappa / (kappa + 1.0));
        nlos_weight = std::sqrt(1.0 / (kappa + 1.0));
    }

    const std::complex<double> phase = std::polar(1.0, -2.0 * std::numbers::pi * d / lambda);
    CMatrixd h = (phase * los_weight) * ula_response(rx_elements, cos_rx) * ula_response(tx_elements, cos_tx).adjoint();

    if (nlos_weight > 0.0) {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            for (Eigen::Index i = 0; i < h.rows(); ++i) {
                const double re = normal(rng);
                const double im = normal(rng);
                h(i, j) += nlos_weight * std::complex<double>(re, im);
            }
    }
    return std::sqrt(gain) * h;
}

namespace {

CMatrixd sample_ris_to_ap(const NodeGeometry& g, const SystemConfig& c, Rng& rng) {
    const double lambda = c.wavelength();
    const double gain =
        path_loss(distance(g.ris, g.ap), lambda, c.path_loss_exponent) * linear_from_db(c.ris_element_gain_db);
    return sample_link(g.ris, g.ap, c.ris_elements, c.ap_antennas, gain, c.rician_k_db, lambda, rng);
}

void sample_user_links(ChannelTriple<double>& t, const NodeGeometry& g, const SystemConfig& c, int user,
                       Rng& rng) {
    const Position& u = g.users.at(user);
    const double lambda = c.wavelength();
    const double direct_gain = path_loss(distance(u, g.ap), lambda, c.direct_path_loss_exponent);
    t.direct = sample_link(u, g.ap, c.user_antennas, c.ap_antennas, direct_gain, c.direct_rician_k_db, lambda, rng);
    const double ris_gain =
        path_loss(distance(u, g.ris), lambda, c.path_loss_exponent) * linear_from_db(c.ris_element_gain_db);
    t.user_to_ris = sample_link(u, g.ris, c.user_antennas, c.ris_elements, ris_gain, c.rician_k_db, lambda, rng);
}

} // namespace

ChannelTriple<double> sample_channel_triple(const NodeGeometry& geometry, const SystemConfig& config, int user,
                                            Rng& rng) {
    if (user < 0 || user >= static_cast<int>(geometry.users.size())) throw InvalidInput("user index out of range");
    ChannelTriple<double> t;
    sample_user_links(t, geometry, config, user, rng);
    t.ris_to_ap = sample_ris_to_ap(geometry, config, rng);
    return t;
}

std::vector<ChannelTriple<double>> sample_slot_channels(const NodeGeometry& geometry, const SystemConfig& config,
                                                        Rng& rng) {
    const CMatrixd ris_to_ap = sample_ris_to_ap(geometry, config, rng);
    std::vector<ChannelTriple<double>> out(geometry.users.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        sample_user_links(out[k], geometry, config, static_cast<int>(k), rng);
        out[k].ris_to_ap = ris_to_ap;
    }
    return out;
}

LinkState sample_blocking(const SystemConfig& config, Rng& rng) {
    LinkState s;
    s.direct_blocked.resize(config.num_users);
    s.indirect_blocked.resize(config.num_users);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < config.num_users; ++k) {
        // u < p: exactly never for p = 0, always for p = 1.
        s.direct_blocked[k] = u(rng) < config.block_prob_direct.at(k) ? 1 : 0;
        s.indirect_blocked[k] = u(rng) < config.block_prob_indirect.at(k) ? 1 : 0;
    }
    return s;
}

} // namespace rismec
