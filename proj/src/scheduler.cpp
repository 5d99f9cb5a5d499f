#include "rismec/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rismec/types.hpp"

namespace rismec {

double ComputeAllocation::total() const { return std::accumulate(frequency.begin(), frequency.end(), 0.0); }

double cpu_cap(double remote_backlog, double cycles_per_bit, double max_cpu, double slot_duration) {
    return std::min(max_cpu, remote_backlog * cycles_per_bit / slot_duration);
}

ComputeAllocation allocate_cpu(std::span<const double> remote_backlog, std::span<const double> cycles_per_bit,
                               double max_cpu, double slot_duration) {
    const std::size_t n = remote_backlog.size();
    if (cycles_per_bit.size() != n) throw InvalidInput("allocate_cpu: per-user sizes differ");
    if (!(max_cpu > 0)) throw InvalidInput("allocate_cpu: f_max must be positive");
    if (!(slot_duration > 0)) throw InvalidInput("allocate_cpu: slot duration must be positive");
    for (std::size_t k = 0; k < n; ++k) {
        if (!(remote_backlog[k] >= 0) || !std::isfinite(remote_backlog[k]))
            throw InvalidInput("allocate_cpu: negative or non-finite backlog");
        if (!(cycles_per_bit[k] > 0)) throw InvalidInput("allocate_cpu: cycles per bit must be positive");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remote_backlog[a] / cycles_per_bit[a] > remote_backlog[b] / cycles_per_bit[b];
    });

    ComputeAllocation out;
    out.frequency.assign(n, 0.0);
    double remaining = max_cpu;
    std::size_t last = n;
    for (std::size_t k : order) {
        if (remaining <= 0.0) break;
        if (remote_backlog[k] <= 0.0) break; // later users have zero ratio too
        const double f = std::min(remaining, cpu_cap(remote_backlog[k], cycles_per_bit[k], max_cpu, slot_duration));
        out.frequency[k] = f;
        remaining -= f;
        last = k;
    }
    // Rounding in the running subtraction can overshoot f_max by an ulp.
    while (last < n && out.total() > max_cpu && out.frequency[last] > 0.0)
        out.frequency[last] = std::nextafter(out.frequency[last], 0.0);
    return out;
}

double cpu_objective(std::span<const double> remote_backlog, std::span<const double> cycles_per_bit,
                     std::span<const double> frequency) {
    double value = 0.0;
    for (std::size_t k = 0; k < frequency.size(); ++k) value += remote_backlog[k] * frequency[k] / cycles_per_bit[k];
    return value;
}

} // namespace rismec
