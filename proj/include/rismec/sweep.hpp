// Power/delay trade-off sweeps and the delay-target search.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rismec/config.hpp"

namespace rismec {

struct SweepSpec {
    std::vector<Strategy> strategies;
    std::vector<double> v_values; // fig1 grid
    std::vector<double> p_direct;
    int seeds = 3;
    std::uint64_t master_seed = 1;

    // fig2: bisection on log V inside [v_min, v_max]
    double delay_target = 0.150; // s
    double delay_tolerance = 0.1; // relative
    int bisection_iterations = 12;
    double v_min = 1e7;
    double v_max = 1e13;

    int threads = 0; // 0: hardware concurrency

    void validate() const;
};

/// Run `count` independent jobs on up to `threads` workers (0: all cores).
/// The first exception thrown by a job is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job);

/// One (strategy, V, p_a) point averaged over the replica seeds.
struct SweepPoint {
    double v = 0.0;
    double mean_power = 0.0; // W
    double mean_delay = 0.0; // s
    bool stable = true;      // every replica passed the plateau test
};

SweepPoint evaluate_point(const SystemConfig& config, const Strategy& strategy, double p_direct, double v, int seeds,
                          std::uint64_t master_seed);

struct Fig1Row {
    Strategy strategy;
    double v = 0.0;
    double p_direct = 0.0;
    double mean_power = 0.0;
    double mean_delay = 0.0;
    bool stable = true;
    std::uint64_t seed = 0; // replica seed
};

/// Every (strategy, p_a, V, replica) combination, one row each. Replica i
/// uses the same seed for all strategies and V so curves share channel,
/// blocking and arrival realizations.
std::vector<Fig1Row> sweep_fig1(const SweepSpec& spec, const SystemConfig& config);

struct DelaySearch {
    Strategy strategy;
    double p_direct = 0.0;
    bool feasible = false;
    double power = 0.0; // W at the delay target
    double v = 0.0;     // V of the evaluated point closest to the target
    std::vector<SweepPoint> probes; // in evaluation order
};

/// Bisection on log V for mean delay == target. Unstable points count as
/// "V too large". Feasible when some stable probe lies within the relative
/// tolerance; the power is then interpolated (log power vs log delay)
/// between the tightest stable probes on either side of the target, or
/// taken from the closest probe when only one side was seen.
DelaySearch search_delay_target(const SweepSpec& spec, const SystemConfig& config, const Strategy& strategy,
                                double p_direct);

struct Fig2Row {
    DelaySearch search;
    bool baseline_feasible = false;
    double gain_db = 0.0; // 10 log10(P_absent / P), valid when both feasible
};

/// One row per (strategy, p_a). The no-RIS baseline is searched once per
/// p_a even when it is not among the requested strategies.
std::vector<Fig2Row> sweep_fig2(const SweepSpec& spec, const SystemConfig& config);

// CSV: power in mW, delay in ms; unstable / infeasible cells are written
// as "infeasible", a gain over an infeasible baseline as "inf".
void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows);
void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows);

std::string version_string();

/// JSON run manifest: version, command, master seed, sweep spec and the
/// full config text.
std::string run_manifest(const std::string& command, const SystemConfig& config, const SweepSpec* spec,
                         std::uint64_t seed);

} // namespace rismec
