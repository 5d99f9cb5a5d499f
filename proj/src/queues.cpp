#include "rismec/queues.hpp"

#include <algorithm>
#include <string>

#include "rismec/types.hpp"

namespace rismec {

LocalUpdate update_local_queue(double backlog, double rate, double arrivals, double slot_duration) {
    const double served = slot_duration * rate;
    return {std::max(0.0, backlog - served) + arrivals, std::min(backlog, served)};
}

double update_remote_queue(double backlog, double frequency, double cycles_per_bit, double transferred,
                           double slot_duration) {
    return std::max(0.0, backlog - slot_duration * frequency / cycles_per_bit) + transferred;
}

std::vector<double> advance_queues(QueueState& state, std::span<const double> rates, std::span<const double> arrivals,
                                   std::span<const double> frequencies, const SystemConfig& config) {
    const std::size_t n = state.size();
    if (rates.size() != n || arrivals.size() != n || frequencies.size() != n || state.remote.size() != n)
        throw InvalidInput("advance_queues: per-user sizes differ");
    std::vector<double> transferred(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto local = update_local_queue(state.local[k], rates[k], arrivals[k], config.slot_duration);
        state.remote[k] = update_remote_queue(state.remote[k], frequencies[k], config.cycles_per_bit[k],
                                              local.transferred, config.slot_duration);
        state.local[k] = local.backlog;
        transferred[k] = local.transferred;
    }
    return transferred;
}

double lyapunov(const QueueState& state) {
    double sum = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k)
        sum += state.local[k] * state.local[k] + state.remote[k] * state.remote[k];
    return 0.5 * sum;
}

double dpp_objective(const QueueState& state, std::span<const double> rates, std::span<const double> arrivals,
                     std::span<const double> frequencies, std::span<const double> tx_powers,
                     const SystemConfig& config) {
    const double tau = config.slot_duration;
    double value = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k) {
        const double bl = state.local[k];
        const double br = state.remote[k];
        value += (br - bl) * tau * rates[k] + arrivals[k] * bl - tau * br * frequencies[k] / config.cycles_per_bit[k] +
                 config.lyapunov_v * tx_powers[k];
    }
    return value;
}

std::vector<double> average_delay(std::span<const double> mean_local, std::span<const double> mean_remote,
                                  std::span<const double> mean_arrivals, double slot_duration) {
    const std::size_t n = mean_local.size();
    if (mean_remote.size() != n || mean_arrivals.size() != n) throw InvalidInput("average_delay: sizes differ");
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(mean_arrivals[k] > 0.0))
            throw UndefinedDelay("average_delay: user " + std::to_string(k) + " has no arrivals");
        out[k] = slot_duration * (mean_local[k] + mean_remote[k]) / mean_arrivals[k];
    }
    return out;
}

} // namespace rismec
