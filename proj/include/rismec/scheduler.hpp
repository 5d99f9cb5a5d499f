// Edge-host CPU frequency allocation.
#pragma once

#include <span>
#include <vector>

namespace rismec {

struct ComputeAllocation {
    std::vector<double> frequency; // f_k, cycles/s

    double total() const;
};

/// Per-user cap min(f_max, B_r,k * J_k / tau).
double cpu_cap(double remote_backlog, double cycles_per_bit, double max_cpu, double slot_duration);

/// Maximizes sum_k B_r,k f_k / J_k subject to 0 <= f_k <= cap_k and
/// sum_k f_k <= f_max by serving users in decreasing B_r,k / J_k order
/// (ties: lower index first) until the budget is spent.
ComputeAllocation allocate_cpu(std::span<const double> remote_backlog, std::span<const double> cycles_per_bit,
                               double max_cpu, double slot_duration);

/// sum_k B_r,k f_k / J_k
double cpu_objective(std::span<const double> remote_backlog, std::span<const double> cycles_per_bit,
                     std::span<const double> frequency);

} // namespace rismec
