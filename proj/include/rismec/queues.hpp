// Communication/computation queue recursions and Lyapunov diagnostics.
#pragma once

#include <span>
#include <vector>

#include "rismec/config.hpp"

namespace rismec {

struct QueueState {
    std::vector<double> local;  // B_l,k, bits
    std::vector<double> remote; // B_r,k, bits

    static QueueState empty(int num_users) {
        return {std::vector<double>(num_users, 0.0), std::vector<double>(num_users, 0.0)};
    }
    std::size_t size() const { return local.size(); }
};

struct LocalUpdate {
    double backlog;     // B_l(t+1)
    double transferred; // min(B_l(t), tau R(t)), fed to the remote queue
};

/// B_l <- max(0, B_l - tau R) + A.
LocalUpdate update_local_queue(double backlog, double rate, double arrivals, double slot_duration);

/// B_r <- max(0, B_r - tau f / J) + transferred.
double update_remote_queue(double backlog, double frequency, double cycles_per_bit, double transferred,
                           double slot_duration);

/// Advances every user's queues by one slot (local first, the remote queue
/// receiving that slot's transfer). Returns the transferred bits per user.
std::vector<double> advance_queues(QueueState& state, std::span<const double> rates, std::span<const double> arrivals,
                                   std::span<const double> frequencies, const SystemConfig& config);

/// L(b) = 1/2 sum_k (B_l,k^2 + B_r,k^2).
double lyapunov(const QueueState& state);

/// Action-dependent drift-plus-penalty bound terms (no constant, no
/// expectation):
///   sum_k (B_r - B_l) tau R + A B_l - tau B_r f / J + V tr(Q).
double dpp_objective(const QueueState& state, std::span<const double> rates, std::span<const double> arrivals,
                     std::span<const double> frequencies, std::span<const double> tx_powers, const SystemConfig& config);

/// Little's law per user: tau (mean B_l + mean B_r) / mean A, seconds.
/// Throws UndefinedDelay for a user whose mean arrivals are zero.
std::vector<double> average_delay(std::span<const double> mean_local, std::span<const double> mean_remote,
                                  std::span<const double> mean_arrivals, double slot_duration);

} // namespace rismec
