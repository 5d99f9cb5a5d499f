#include "rismec/controller.hpp"

#include <algorithm>
#include <cmath>

#include "rismec/precoder.hpp"
#include "rismec/ris.hpp"

namespace rismec {

namespace {

double rate_unchecked(const CMatrixd& h, const CMatrixd& q, double bandwidth, double noise_power) {
    const CMatrixd hq = h.lazyProduct(q);
    CMatrixd gram = hq.lazyProduct(h.adjoint()) / noise_power;
    gram = (gram + gram.adjoint()) / 2.0;
    return bandwidth * log_det_identity_plus(gram) / std::numbers::ln2;
}

std::vector<CMatrixd> compose_all(std::span<const ChannelTriple<double>> triples, std::span<const LinkGains> gains,
                                  const RisConfig<double>& ris) {
    std::vector<CMatrixd> out(triples.size());
    for (std::size_t k = 0; k < triples.size(); ++k)
        out[k] = compose_weighted(triples[k], ris, gains[k].direct, gains[k].indirect);
    return out;
}

double objective_from_channels(const QueueState& queues, std::span<const CMatrixd> channels,
                               std::span<const CMatrixd> covariances, const SystemConfig& config) {
    double value = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const double power = covariances[k].trace().real();
        if (power == 0.0) continue;
        const double rate = rate_unchecked(channels[k], covariances[k], config.bandwidth[k], config.noise_power(k));
        value += config.lyapunov_v * power - config.slot_duration * (queues.local[k] - queues.remote[k]) * rate;
    }
    return value;
}

CovarianceResult<double> water_fill(const QueueState& queues, const CMatrixd& channel, const SystemConfig& config,
                                    std::size_t k) {
    PrecoderInput<double> in;
    in.channel = channel;
    in.local_backlog = queues.local[k];
    in.remote_backlog = queues.remote[k];
    in.v = config.lyapunov_v;
    in.slot_duration = config.slot_duration;
    in.bandwidth = config.bandwidth[k];
    in.noise_power = config.noise_power(static_cast<int>(k));
    in.max_power = config.max_tx_power[k];
    return optimize_covariance(in);
}

void update_covariances(SlotDecision& d, const QueueState& queues, std::span<const CMatrixd> channels,
                        const SystemConfig& config) {
    for (std::size_t k = 0; k < channels.size(); ++k) {
        auto wf = water_fill(queues, channels[k], config, k);
        d.covariances[k] = std::move(wf.covariance);
        d.tx_power[k] = wf.tx_power;
    }
}

void check_inputs(const QueueState& queues, std::span<const ChannelTriple<double>> triples, std::size_t gains,
                  const SystemConfig& config) {
    const auto n = static_cast<std::size_t>(config.num_users);
    if (queues.local.size() != n || queues.remote.size() != n || triples.size() != n || gains != n)
        throw InvalidInput("controller: per-user sizes do not match num_users");
    for (std::size_t k = 0; k < n; ++k)
        if (!(queues.local[k] >= 0) || !(queues.remote[k] >= 0)) throw InvalidInput("controller: negative backlog");
}

} // namespace

std::vector<LinkGains> statistical_gains(const Strategy& strategy, const SystemConfig& config) {
    std::vector<LinkGains> g(config.num_users);
    for (int k = 0; k < config.num_users; ++k) {
        g[k].direct = 1.0 - config.block_prob_direct[k];
        g[k].indirect = strategy.ris_mode == RisMode::absent ? 0.0 : 1.0 - config.block_prob_indirect[k];
    }
    return g;
}

std::vector<LinkGains> realized_gains(const Strategy& strategy, const LinkState& state) {
    std::vector<LinkGains> g(state.direct_blocked.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        g[k].direct = state.direct_blocked[k] ? 0.0 : 1.0;
        g[k].indirect = strategy.ris_mode == RisMode::absent || state.indirect_blocked.at(k) ? 0.0 : 1.0;
    }
    return g;
}

std::vector<LinkGains> optimizer_gains(const Strategy& strategy, const LinkState& state, const SystemConfig& config) {
    if (strategy.knowledge_mode == KnowledgeMode::statistical) return statistical_gains(strategy, config);
    return realized_gains(strategy, state);
}

double radio_objective(const QueueState& queues, std::span<const ChannelTriple<double>> triples,
                       std::span<const LinkGains> gains, const RisConfig<double>& ris,
                       std::span<const CMatrixd> covariances, const SystemConfig& config) {
    const auto channels = compose_all(triples, gains, ris);
    return objective_from_channels(queues, channels, covariances, config);
}

SlotDecision plan_slot(const QueueState& queues, std::span<const ChannelTriple<double>> triples,
                       std::span<const LinkGains> gains, const Strategy& strategy, const SystemConfig& config,
                       const RisConfig<double>& warm_ris) {
    check_inputs(queues, triples, gains.size(), config);
    const std::size_t n = triples.size();
    const Eigen::Index m = config.ris_elements;
    if (warm_ris.size() != m) throw InvalidInput("controller: warm RIS size does not match ris_elements");

    SlotDecision d;
    d.covariances.resize(n);
    d.tx_power.assign(n, 0.0);
    d.ris = warm_ris;
    d.ris_continuous = warm_ris;

    auto channels = compose_all(triples, gains, d.ris);
    update_covariances(d, queues, channels, config);
    double current = objective_from_channels(queues, channels, d.covariances, config);
    d.objective_trace.push_back(current);

    if (strategy.ris_mode == RisMode::optimized) {
        std::vector<GradientTerm<double>> terms(n);
        for (int it = 0; it < config.pgm_iterations; ++it) {
            // step 1.1: projected gradient on r, Q fixed
            for (std::size_t k = 0; k < n; ++k) {
                terms[k].channels = &triples[k];
                terms[k].effective = &channels[k];
                terms[k].covariance = &d.covariances[k];
                terms[k].weight = config.slot_duration * config.bandwidth[k] * (queues.local[k] - queues.remote[k]);
                terms[k].indirect_gain = gains[k].indirect;
                terms[k].noise_power = config.noise_power(static_cast<int>(k));
                if (d.tx_power[k] == 0.0) terms[k].weight = 0.0;
            }
            const CVectord grad = gradient_wrt_ris<double>(terms, m);
            const double scale = std::sqrt(grad.cwiseAbs2().maxCoeff());
            if (!(scale > 0.0) || !std::isfinite(scale)) break;

            double step = config.pgm_step / scale;
            bool accepted = false;
            RisConfig<double> next;
            std::vector<CMatrixd> next_channels;
            for (int bt = 0; bt <= config.pgm_backtracks; ++bt, step *= 0.5) {
                next = pgm_step(d.ris, grad, step);
                next_channels = compose_all(triples, gains, next);
                const double candidate = objective_from_channels(queues, next_channels, d.covariances, config);
                if (candidate <= current) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;

            const double moved = std::sqrt((next.reflection() - d.ris.reflection()).cwiseAbs2().maxCoeff());
            d.ris = std::move(next);
            channels = std::move(next_channels);

            // step 1.2: water-filling for every user at the new r
            update_covariances(d, queues, channels, config);
            current = objective_from_channels(queues, channels, d.covariances, config);
            d.objective_trace.push_back(current);
            ++d.iterations;
            if (moved < config.pgm_tolerance) break;
        }
        d.ris_continuous = d.ris;

        if (strategy.phase_bits > 0) {
            d.ris = quantize_phases(d.ris, strategy.phase_bits);
            channels = compose_all(triples, gains, d.ris);
            update_covariances(d, queues, channels, config);
        }
    }

    d.planned_rates.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        d.planned_rates[k] = d.tx_power[k] == 0.0 ? 0.0
                                                  : rate_unchecked(channels[k], d.covariances[k], config.bandwidth[k],
                                                                   config.noise_power(static_cast<int>(k)));

    d.cpu = allocate_cpu(queues.remote, config.cycles_per_bit, config.max_cpu, config.slot_duration);
    return d;
}

void realize_rates(SlotDecision& d, std::span<const ChannelTriple<double>> triples, std::span<const LinkGains> realized,
                   const SystemConfig& config) {
    d.rates.assign(triples.size(), 0.0);
    for (std::size_t k = 0; k < triples.size(); ++k) {
        if (d.tx_power[k] == 0.0) continue;
        const CMatrixd h = compose_weighted(triples[k], d.ris, realized[k].direct, realized[k].indirect);
        d.rates[k] = rate_unchecked(h, d.covariances[k], config.bandwidth[k], config.noise_power(static_cast<int>(k)));
    }
}

SlotDecision optimize_slot(const QueueState& queues, std::span<const ChannelTriple<double>> triples,
                           const LinkState& link_state, const Strategy& strategy, const SystemConfig& config,
                           const RisConfig<double>& warm_ris) {
    const auto gains = optimizer_gains(strategy, link_state, config);
    SlotDecision d = plan_slot(queues, triples, gains, strategy, config, warm_ris);
    realize_rates(d, triples, realized_gains(strategy, link_state), config);
    return d;
}

} // namespace rismec
