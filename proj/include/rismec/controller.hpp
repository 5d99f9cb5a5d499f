// Per-slot controller: alternating RIS projected gradient / water-filling,
// then CPU scheduling.
#pragma once

#include <span>
#include <vector>

#include "rismec/channel.hpp"
#include "rismec/config.hpp"
#include "rismec/queues.hpp"
#include "rismec/ris_config.hpp"
#include "rismec/scheduler.hpp"

namespace rismec {

/// Multipliers of the direct and cascaded terms when composing H_k.
struct LinkGains {
    double direct = 1.0;
    double indirect = 1.0;
};

/// Gains the optimizer composes with: 1 - beta under instantaneous
/// knowledge, 1 - p under statistical knowledge (the LinkState is not read),
/// indirect forced to 0 without an RIS.
std::vector<LinkGains> optimizer_gains(const Strategy& strategy, const LinkState& state, const SystemConfig& config);
std::vector<LinkGains> statistical_gains(const Strategy& strategy, const SystemConfig& config);

/// Gains of the channel actually experienced: always the true blocking.
std::vector<LinkGains> realized_gains(const Strategy& strategy, const LinkState& state);

/// Radio sub-problem objective
///   sum_k V tr(Q_k) - tau (B_l,k - B_r,k) R_k(r, Q_k)
/// with channels composed under `gains`.
double radio_objective(const QueueState& queues, std::span<const ChannelTriple<double>> triples,
                       std::span<const LinkGains> gains, const RisConfig<double>& ris,
                       std::span<const CMatrixd> covariances, const SystemConfig& config);

struct SlotDecision {
    std::vector<CMatrixd> covariances; // Q_k
    std::vector<double> tx_power;      // tr(Q_k), W
    RisConfig<double> ris;             // applied reflection (quantized if requested)
    RisConfig<double> ris_continuous;  // unquantized iterate, warm start for the next slot
    ComputeAllocation cpu;
    std::vector<double> rates;         // realized R_k, bits/s
    std::vector<double> planned_rates; // R_k as seen by the optimizer
    std::vector<double> objective_trace; // radio objective at the start and after each iteration
    int iterations = 0;
};

/// One slot of the dynamic controller.
///  - optimized RIS: up to pgm_iterations rounds of (projected gradient step
///    on r with backtracking, water-filling for every user), then optional
///    phase quantization followed by one more water-filling pass;
///  - random RIS: `warm_ris` is used as is;
///  - absent RIS: the cascaded term is dropped everywhere.
/// CPU frequencies come from the greedy scheduler; realized rates use the
/// true LinkState.
SlotDecision optimize_slot(const QueueState& queues, std::span<const ChannelTriple<double>> triples,
                           const LinkState& link_state, const Strategy& strategy, const SystemConfig& config,
                           const RisConfig<double>& warm_ris);

/// Same as optimize_slot but with explicit optimizer gains, so the radio
/// decision depends on the blocking state only through `gains`.
SlotDecision plan_slot(const QueueState& queues, std::span<const ChannelTriple<double>> triples,
                       std::span<const LinkGains> gains, const Strategy& strategy, const SystemConfig& config,
                       const RisConfig<double>& warm_ris);

/// Fills `rates` of a planned decision from the experienced channels.
void realize_rates(SlotDecision& decision, std::span<const ChannelTriple<double>> triples,
                   std::span<const LinkGains> realized, const SystemConfig& config);

} // namespace rismec
