#include "rismec/simulation.hpp"

#include <algorithm>
#include <random>

#include "rismec/controller.hpp"
#include "rismec/ris.hpp"

namespace rismec {

namespace {

Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, 0x5eedu};
    return Rng(seq);
}

} // namespace

RngStreams RngStreams::derive(std::uint64_t seed) {
    return {make_stream(seed, 1), make_stream(seed, 2), make_stream(seed, 3), make_stream(seed, 4),
            make_stream(seed, 5)};
}

std::uint64_t replica_seed(std::uint64_t master_seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index), 0xa11ceu};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double sample_arrivals(double rate, double slot_duration, Rng& rng) {
    if (!(rate >= 0.0)) throw InvalidInput("arrival rate must be nonnegative");
    const double mean = rate * slot_duration;
    if (mean == 0.0) return 0.0;
    std::poisson_distribution<long long> poisson(mean);
    return static_cast<double>(poisson(rng));
}

std::vector<double> sample_arrivals(const SystemConfig& config, Rng& rng) {
    std::vector<double> a(config.num_users);
    for (int k = 0; k < config.num_users; ++k) a[k] = sample_arrivals(config.arrival_rate[k], config.slot_duration, rng);
    return a;
}

bool plateau_stable(const std::vector<double>& backlog, double margin) {
    const std::size_t n = backlog.size();
    if (n < 4) return true;
    const std::size_t q = n / 4;
    auto mean = [&](std::size_t from, std::size_t to) {
        double s = 0.0;
        for (std::size_t i = from; i < to; ++i) s += backlog[i];
        return s / static_cast<double>(to - from);
    };
    const double second = mean(q, 2 * q);
    const double last = mean(n - q, n);
    return last <= (1.0 + margin) * second;
}

bool plateau_stable(const MetricsLog& log, double margin) {
    // Summed over users; per-user series of a few-bit queue are too noisy.
    std::vector<double> total(log.rows.size(), 0.0);
    for (std::size_t t = 0; t < log.rows.size(); ++t)
        for (int k = 0; k < log.num_users; ++k) total[t] += log.rows[t].local[k] + log.rows[t].remote[k];
    return plateau_stable(total, margin);
}

RunSummary MetricsLog::summarize() const {
    RunSummary s;
    s.mean_local.assign(num_users, 0.0);
    s.mean_remote.assign(num_users, 0.0);
    s.mean_arrivals.assign(num_users, 0.0);
    const auto first = static_cast<std::size_t>(warmup_fraction * static_cast<double>(rows.size()));
    const std::size_t count = rows.size() - std::min(first, rows.size());
    if (count == 0) return s;
    for (std::size_t t = first; t < rows.size(); ++t) {
        const auto& r = rows[t];
        for (int k = 0; k < num_users; ++k) {
            s.mean_power += r.tx_power[k];
            s.mean_local[k] += r.local[k];
            s.mean_remote[k] += r.remote[k];
            s.mean_arrivals[k] += r.arrivals[k];
        }
    }
    const double inv = 1.0 / static_cast<double>(count);
    s.mean_power *= inv;
    for (int k = 0; k < num_users; ++k) {
        s.mean_local[k] *= inv;
        s.mean_remote[k] *= inv;
        s.mean_arrivals[k] *= inv;
    }
    s.user_delay = average_delay(s.mean_local, s.mean_remote, s.mean_arrivals, slot_duration);
    for (double d : s.user_delay) s.mean_delay += d;
    s.mean_delay /= static_cast<double>(num_users);
    s.stable = plateau_stable(*this);
    return s;
}

MetricsLog run_simulation(const SystemConfig& config, const Strategy& strategy, std::uint64_t seed) {
    config.validate();
    auto rng = RngStreams::derive(seed);
    const NodeGeometry geometry = generate_geometry(config, rng.geometry);

    RisConfig<double> ris(config.ris_elements);
    // Drawn once per run and held fixed.
    const RisConfig<double> random_ris = random_phases<double>(config.ris_elements, rng.ris);
    if (strategy.ris_mode == RisMode::random) ris = random_ris;

    MetricsLog log;
    log.num_users = config.num_users;
    log.slot_duration = config.slot_duration;
    log.warmup_fraction = config.warmup_fraction;
    log.rows.reserve(config.slots);

    QueueState queues = QueueState::empty(config.num_users);
    for (int t = 0; t < config.slots; ++t) {
        const LinkState links = sample_blocking(config, rng.blocking);
        const auto triples = sample_slot_channels(geometry, config, rng.channel);
        const auto arrivals = sample_arrivals(config, rng.arrivals);

        SlotDecision d = optimize_slot(queues, triples, links, strategy, config, ris);
        if (strategy.ris_mode == RisMode::optimized) ris = d.ris_continuous;

        SlotRow row;
        row.slot = t;
        row.rate = d.rates;
        row.tx_power = d.tx_power;
        row.local = queues.local;
        row.remote = queues.remote;
        row.frequency = d.cpu.frequency;
        row.arrivals = arrivals;
        row.direct_blocked = links.direct_blocked;
        row.indirect_blocked = links.indirect_blocked;
        row.lyapunov = lyapunov(queues);
        row.dpp = dpp_objective(queues, d.rates, arrivals, d.cpu.frequency, d.tx_power, config);
        const std::vector<double> zeros(config.num_users, 0.0);
        row.dpp_null = dpp_objective(queues, zeros, arrivals, d.cpu.frequency, zeros, config);
        row.objective_trace = std::move(d.objective_trace);

        advance_queues(queues, d.rates, arrivals, d.cpu.frequency, config);
        log.rows.push_back(std::move(row));
    }
    return log;
}

} // namespace rismec
