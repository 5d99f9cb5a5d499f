// Slotted simulation loop, arrivals, metrics and run summaries.
#pragma once

#include <cstdint>
#include <vector>

#include "rismec/channel.hpp"
#include "rismec/config.hpp"
#include "rismec/queues.hpp"

namespace rismec {

/// Independent generators per random process so that changing V or the
/// strategy leaves the channel, blocking and arrival realizations intact.
struct RngStreams {
    Rng geometry;
    Rng channel;
    Rng blocking;
    Rng arrivals;
    Rng ris;

    static RngStreams derive(std::uint64_t seed);
};

/// Seed of the `index`-th replica of a run family.
std::uint64_t replica_seed(std::uint64_t master_seed, int index);

/// A ~ Poisson(rate * tau) bits.
double sample_arrivals(double rate, double slot_duration, Rng& rng);
std::vector<double> sample_arrivals(const SystemConfig& config, Rng& rng);

struct SlotRow {
    int slot = 0;
    std::vector<double> rate;      // realized R_k, bits/s
    std::vector<double> tx_power;  // tr(Q_k), W
    std::vector<double> local;     // B_l,k(t) at the start of the slot
    std::vector<double> remote;    // B_r,k(t)
    std::vector<double> frequency; // f_k
    std::vector<double> arrivals;  // A_k(t)
    std::vector<std::uint8_t> direct_blocked;
    std::vector<std::uint8_t> indirect_blocked;
    double lyapunov = 0.0;
    double dpp = 0.0;       // drift-plus-penalty terms of the chosen action
    double dpp_null = 0.0;  // same with Q = 0 and the same CPU allocation
    std::vector<double> objective_trace;
};

struct RunSummary {
    double mean_power = 0.0; // time average of sum_k tr(Q_k), W
    std::vector<double> mean_local;
    std::vector<double> mean_remote;
    std::vector<double> mean_arrivals;
    std::vector<double> user_delay; // s
    double mean_delay = 0.0;        // average of user_delay, s
    bool stable = true;             // plateau test
};

struct MetricsLog {
    int num_users = 0;
    double slot_duration = 0.0;
    double warmup_fraction = 0.0;
    std::vector<SlotRow> rows;

    /// Time averages over the slots after the warm-up fraction.
    RunSummary summarize() const;
};

/// Plateau test on one backlog trajectory: the mean over the last quarter
/// exceeds the mean over the second quarter by less than `margin`.
bool plateau_stable(const std::vector<double>& backlog, double margin = 0.2);

/// The backlog summed over users, sum_k B_l + B_r, passes plateau_stable.
bool plateau_stable(const MetricsLog& log, double margin = 0.2);

/// Algorithm loop: per slot sample blocking, channels and arrivals, run the
/// controller, realize rates with the true blocking, advance both queues.
/// Deterministic in (config, strategy, seed).
MetricsLog run_simulation(const SystemConfig& config, const Strategy& strategy, std::uint64_t seed);

} // namespace rismec
