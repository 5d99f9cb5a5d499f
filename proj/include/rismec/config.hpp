// Scenario constants and strategy selection.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rismec {

enum class RisMode { optimized, random, absent };
enum class KnowledgeMode { instantaneous, statistical };

std::string_view to_string(RisMode mode);
std::string_view to_string(KnowledgeMode mode);
RisMode parse_ris_mode(std::string_view text);
KnowledgeMode parse_knowledge_mode(std::string_view text);

/// How the RIS and the blocking knowledge are handled by the per-slot
/// controller. phase_bits > 0 only matters for RisMode::optimized.
struct Strategy {
    RisMode ris_mode = RisMode::optimized;
    KnowledgeMode knowledge_mode = KnowledgeMode::instantaneous;
    int phase_bits = 0;

    /// Short stable label used in CSV rows, e.g. "optimized-statistical-q2".
    std::string label() const;
    static Strategy from_label(std::string_view label);

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

using Position = std::array<double, 3>;

struct SystemConfig {
    int num_users = 6;
    int user_antennas = 4;
    int ap_antennas = 4;
    int ris_elements = 64;

    double slot_duration = 10e-3;         // s
    std::vector<double> bandwidth;        // Hz per user
    double noise_psd = 3.981071705534972e-21; // W/Hz (-174 dBm/Hz)
    std::vector<double> max_tx_power;     // W per user
    double max_cpu = 4.5e9;               // cycles/s
    std::vector<double> cycles_per_bit;   // cycles/bit per user
    double lyapunov_v = 1e10;
    std::vector<double> arrival_rate;     // bits/s per user
    std::vector<double> block_prob_direct;
    std::vector<double> block_prob_indirect;

    int pgm_iterations = 20;
    double pgm_step = 0.5;     // largest per-element move of the first trial step
    int pgm_backtracks = 10;
    double pgm_tolerance = 1e-6;

    Strategy strategy;

    double carrier_freq = 28e9;
    double rician_k_db = 10.0;        // RIS hops
    double direct_rician_k_db = 0.0;  // user -> AP
    double path_loss_exponent = 2.0;  // RIS hops
    double direct_path_loss_exponent = 3.6;
    double ris_element_gain_db = 5.0;
    Position ap_position{0.0, 0.0, 6.0};
    Position ris_position{25.0, 25.0, 6.0};
    double area_width = 50.0;
    double area_depth = 50.0;
    double user_height = 1.5;

    int slots = 10000;
    double warmup_fraction = 0.1;
    std::uint64_t rng_seed = 1;

    /// Reference scenario: 6 users sharing 1 MHz, 1 Mbps Poisson arrivals,
    /// 100 mW budget, 500 cycles/bit, no blocking.
    static SystemConfig defaults(int num_users = 6);

    /// Re-sizes every per-user vector to `n` users, broadcasting the first
    /// entry. Bandwidth is re-split so the total stays unchanged.
    void set_num_users(int n);

    /// Sets the same direct/indirect blocking probability for every user.
    void set_block_prob_direct(double p);
    void set_block_prob_indirect(double p);

    double noise_power(int user) const { return noise_psd * bandwidth.at(user); }
    double wavelength() const;

    /// Throws InvalidInput listing the first violated constraint.
    void validate() const;
};

/// Parses a "key = value" file; '#' starts a comment. Per-user keys accept a
/// single value (broadcast) or a comma separated list of num_users values.
SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::string& path);

/// Inverse of parse_config; every field is written, full precision.
std::string format_config(const SystemConfig& config);

} // namespace rismec
