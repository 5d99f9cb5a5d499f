#include "rismec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rismec/format.hpp"
#include "rismec/types.hpp"

namespace rismec {

std::string_view to_string(RisMode mode) {
    switch (mode) {
    case RisMode::optimized: return "optimized";
    case RisMode::random: return "random";
    case RisMode::absent: return "absent";
    }
    return "?";
}

std::string_view to_string(KnowledgeMode mode) {
    return mode == KnowledgeMode::instantaneous ? "instantaneous" : "statistical";
}

RisMode parse_ris_mode(std::string_view text) {
    if (text == "optimized") return RisMode::optimized;
    if (text == "random") return RisMode::random;
    if (text == "absent") return RisMode::absent;
    throw InvalidInput("unknown ris mode: " + std::string(text));
}

KnowledgeMode parse_knowledge_mode(std::string_view text) {
    if (text == "instantaneous") return KnowledgeMode::instantaneous;
    if (text == "statistical") return KnowledgeMode::statistical;
    throw InvalidInput("unknown knowledge mode: " + std::string(text));
}

std::string Strategy::label() const {
    std::string out(to_string(ris_mode));
    if (knowledge_mode == KnowledgeMode::statistical) out += "-statistical";
    if (ris_mode == RisMode::optimized && phase_bits > 0) out += "-q" + std::to_string(phase_bits);
    return out;
}

Strategy Strategy::from_label(std::string_view label) {
    Strategy s;
    auto next = [&label]() {
        auto dash = label.find('-');
        auto head = label.substr(0, dash);
        label = dash == std::string_view::npos ? std::string_view{} : label.substr(dash + 1);
        return head;
    };
    s.ris_mode = parse_ris_mode(next());
    while (!label.empty()) {
        auto part = next();
        if (part == "statistical") {
            s.knowledge_mode = KnowledgeMode::statistical;
        } else if (part == "instantaneous") {
            s.knowledge_mode = KnowledgeMode::instantaneous;
        } else if (part.size() > 1 && part[0] == 'q') {
            s.phase_bits = parse_int(part.substr(1));
        } else {
            throw InvalidInput("bad strategy label part: " + std::string(part));
        }
    }
    return s;
}

SystemConfig SystemConfig::defaults(int num_users) {
    SystemConfig c;
    c.num_users = num_users;
    c.bandwidth.assign(num_users, 1e6 / num_users);
    c.max_tx_power.assign(num_users, 0.1);
    c.cycles_per_bit.assign(num_users, 500.0);
    c.arrival_rate.assign(num_users, 1e6);
    c.block_prob_direct.assign(num_users, 0.0);
    c.block_prob_indirect.assign(num_users, 0.0);
    return c;
}

void SystemConfig::set_num_users(int n) {
    if (n < 1) throw InvalidInput("num_users must be >= 1");
    double total = 0.0;
    for (double w : bandwidth) total += w;
    auto resize = [n](std::vector<double>& v, double fallback) {
        double first = v.empty() ? fallback : v.front();
        v.assign(n, first);
    };
    resize(max_tx_power, 0.1);
    resize(cycles_per_bit, 500.0);
    resize(arrival_rate, 1e6);
    resize(block_prob_direct, 0.0);
    resize(block_prob_indirect, 0.0);
    if (total <= 0.0) total = 1e6;
    bandwidth.assign(n, total / n);
    num_users = n;
}

void SystemConfig::set_block_prob_direct(double p) { block_prob_direct.assign(num_users, p); }
void SystemConfig::set_block_prob_indirect(double p) { block_prob_indirect.assign(num_users, p); }

double SystemConfig::wavelength() const { return 299792458.0 / carrier_freq; }

void SystemConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw InvalidInput(std::string("invalid config: ") + what);
    };
    require(num_users >= 1, "num_users >= 1");
    require(user_antennas >= 1, "user_antennas >= 1");
    require(ap_antennas >= 1, "ap_antennas >= 1");
    require(ris_elements >= 1, "ris_elements >= 1");
    require(slot_duration > 0.0, "slot_duration > 0");
    require(noise_psd > 0.0, "noise_psd > 0");
    require(max_cpu > 0.0, "max_cpu > 0");
    require(lyapunov_v >= 0.0 && std::isfinite(lyapunov_v), "lyapunov_v >= 0");
    require(pgm_iterations >= 1, "pgm_iterations >= 1");
    require(pgm_step > 0.0, "pgm_step > 0");
    require(pgm_backtracks >= 0, "pgm_backtracks >= 0");
    require(strategy.phase_bits >= 0, "phase_bits >= 0");
    require(carrier_freq > 0.0, "carrier_freq > 0");
    require(path_loss_exponent > 0.0 && direct_path_loss_exponent > 0.0, "path loss exponents > 0");
    require(area_width > 0.0 && area_depth > 0.0, "service area > 0");
    require(slots >= 1, "slots >= 1");
    require(warmup_fraction >= 0.0 && warmup_fraction < 1.0, "warmup_fraction in [0,1)");

    auto per_user = [&](const std::vector<double>& v, const char* what) {
        require(static_cast<int>(v.size()) == num_users, what);
    };
    per_user(bandwidth, "bandwidth has num_users entries");
    per_user(max_tx_power, "max_tx_power has num_users entries");
    per_user(cycles_per_bit, "cycles_per_bit has num_users entries");
    per_user(arrival_rate, "arrival_rate has num_users entries");
    per_user(block_prob_direct, "block_prob_direct has num_users entries");
    per_user(block_prob_indirect, "block_prob_indirect has num_users entries");
    for (int k = 0; k < num_users; ++k) {
        require(bandwidth[k] > 0.0, "bandwidth > 0");
        require(max_tx_power[k] > 0.0, "max_tx_power > 0");
        require(cycles_per_bit[k] > 0.0, "cycles_per_bit > 0");
        require(arrival_rate[k] >= 0.0, "arrival_rate >= 0");
        require(block_prob_direct[k] >= 0.0 && block_prob_direct[k] <= 1.0, "block_prob_direct in [0,1]");
        require(block_prob_indirect[k] >= 0.0 && block_prob_indirect[k] <= 1.0,
                "block_prob_indirect in [0,1]");
    }
    auto same = [](const Position& a, const Position& b) { return a == b; };
    require(!same(ap_position, ris_position), "AP and RIS positions differ");
}

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(std::string_view value) {
    std::vector<double> out;
    for (auto part : split(value, ',')) out.push_back(parse_double(trim(part)));
    return out;
}

Position parse_position(std::string_view value) {
    auto v = parse_list(value);
    if (v.size() != 3) throw InvalidInput("position needs 3 coordinates");
    return {v[0], v[1], v[2]};
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join(const Position& p) { return join(std::vector<double>(p.begin(), p.end())); }

} // namespace

SystemConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
        kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }

    int n = 6;
    if (auto it = kv.find("num_users"); it != kv.end()) n = parse_int(it->second);
    if (n < 1) throw InvalidInput("num_users must be >= 1");
    SystemConfig c = SystemConfig::defaults(n);

    auto take = [&kv](std::string_view key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    auto per_user = [&](std::string_view key, std::vector<double>& dst) {
        if (auto v = take(key)) {
            auto list = parse_list(*v);
            if (list.size() == 1) {
                dst.assign(n, list.front());
            } else if (static_cast<int>(list.size()) == n) {
                dst = list;
            } else {
                throw InvalidInput(std::string(key) + ": expected 1 or num_users values");
            }
        }
    };

    if (auto v = take("user_antennas")) c.user_antennas = parse_int(*v);
    if (auto v = take("ap_antennas")) c.ap_antennas = parse_int(*v);
    if (auto v = take("ris_elements")) c.ris_elements = parse_int(*v);
    if (auto v = take("slot_duration")) c.slot_duration = parse_double(*v);
    if (auto v = take("total_bandwidth")) c.bandwidth.assign(n, parse_double(*v) / n);
    per_user("bandwidth", c.bandwidth);
    if (auto v = take("noise_psd")) c.noise_psd = parse_double(*v);
    if (auto v = take("noise_psd_dbm_hz")) c.noise_psd = std::pow(10.0, parse_double(*v) / 10.0) * 1e-3;
    per_user("max_tx_power", c.max_tx_power);
    if (auto v = take("max_cpu")) c.max_cpu = parse_double(*v);
    per_user("cycles_per_bit", c.cycles_per_bit);
    if (auto v = take("lyapunov_v")) c.lyapunov_v = parse_double(*v);
    per_user("arrival_rate", c.arrival_rate);
    per_user("block_prob_direct", c.block_prob_direct);
    per_user("block_prob_indirect", c.block_prob_indirect);
    if (auto v = take("pgm_iterations")) c.pgm_iterations = parse_int(*v);
    if (auto v = take("pgm_step")) c.pgm_step = parse_double(*v);
    if (auto v = take("pgm_backtracks")) c.pgm_backtracks = parse_int(*v);
    if (auto v = take("pgm_tolerance")) c.pgm_tolerance = parse_double(*v);
    if (auto v = take("phase_bits")) c.strategy.phase_bits = parse_int(*v);
    if (auto v = take("knowledge_mode")) c.strategy.knowledge_mode = parse_knowledge_mode(*v);
    if (auto v = take("ris_mode")) c.strategy.ris_mode = parse_ris_mode(*v);
    if (auto v = take("carrier_freq")) c.carrier_freq = parse_double(*v);
    if (auto v = take("rician_k_db")) c.rician_k_db = parse_double(*v);
    if (auto v = take("direct_rician_k_db")) c.direct_rician_k_db = parse_double(*v);
    if (auto v = take("path_loss_exponent")) c.path_loss_exponent = parse_double(*v);
    if (auto v = take("direct_path_loss_exponent")) c.direct_path_loss_exponent = parse_double(*v);
    if (auto v = take("ris_element_gain_db")) c.ris_element_gain_db = parse_double(*v);
    if (auto v = take("ap_position")) c.ap_position = parse_position(*v);
    if (auto v = take("ris_position")) c.ris_position = parse_position(*v);
    if (auto v = take("area_width")) c.area_width = parse_double(*v);
    if (auto v = take("area_depth")) c.area_depth = parse_double(*v);
    if (auto v = take("user_height")) c.user_height = parse_double(*v);
    if (auto v = take("slots")) c.slots = parse_int(*v);
    if (auto v = take("warmup_fraction")) c.warmup_fraction = parse_double(*v);
    if (auto v = take("rng_seed")) c.rng_seed = static_cast<std::uint64_t>(parse_int(*v));

    static constexpr std::string_view known[] = {
        "num_users", "user_antennas", "ap_antennas", "ris_elements", "slot_duration",
        "total_bandwidth", "bandwidth", "noise_psd", "noise_psd_dbm_hz", "max_tx_power",
        "max_cpu", "cycles_per_bit", "lyapunov_v", "arrival_rate", "block_prob_direct",
        "block_prob_indirect", "pgm_iterations", "pgm_step", "pgm_backtracks", "pgm_tolerance",
        "phase_bits", "knowledge_mode", "ris_mode", "carrier_freq", "rician_k_db",
        "direct_rician_k_db", "path_loss_exponent", "direct_path_loss_exponent",
        "ris_element_gain_db", "ap_position", "ris_position", "area_width", "area_depth",
        "user_height", "slots", "warmup_fraction", "rng_seed"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (auto k : known) ok = ok || k == key;
        if (!ok) throw InvalidInput("unknown config key: " + key);
    }
    c.validate();
    return c;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const SystemConfig& c) {
    std::ostringstream out;
    out << "num_users = " << c.num_users << '\n'
        << "user_antennas = " << c.user_antennas << '\n'
        << "ap_antennas = " << c.ap_antennas << '\n'
        << "ris_elements = " << c.ris_elements << '\n'
        << "slot_duration = " << format_double(c.slot_duration) << '\n'
        << "bandwidth = " << join(c.bandwidth) << '\n'
        << "noise_psd = " << format_double(c.noise_psd) << '\n'
        << "max_tx_power = " << join(c.max_tx_power) << '\n'
        << "max_cpu = " << format_double(c.max_cpu) << '\n'
        << "cycles_per_bit = " << join(c.cycles_per_bit) << '\n'
        << "lyapunov_v = " << format_double(c.lyapunov_v) << '\n'
        << "arrival_rate = " << join(c.arrival_rate) << '\n'
        << "block_prob_direct = " << join(c.block_prob_direct) << '\n'
        << "block_prob_indirect = " << join(c.block_prob_indirect) << '\n'
        << "pgm_iterations = " << c.pgm_iterations << '\n'
        << "pgm_step = " << format_double(c.pgm_step) << '\n'
        << "pgm_backtracks = " << c.pgm_backtracks << '\n'
        << "pgm_tolerance = " << format_double(c.pgm_tolerance) << '\n'
        << "phase_bits = " << c.strategy.phase_bits << '\n'
        << "knowledge_mode = " << to_string(c.strategy.knowledge_mode) << '\n'
        << "ris_mode = " << to_string(c.strategy.ris_mode) << '\n'
        << "carrier_freq = " << format_double(c.carrier_freq) << '\n'
        << "rician_k_db = " << format_double(c.rician_k_db) << '\n'
        << "direct_rician_k_db = " << format_double(c.direct_rician_k_db) << '\n'
        << "path_loss_exponent = " << format_double(c.path_loss_exponent) << '\n'
        << "direct_path_loss_exponent = " << format_double(c.direct_path_loss_exponent) << '\n'
        << "ris_element_gain_db = " << format_double(c.ris_element_gain_db) << '\n'
        << "ap_position = " << join(c.ap_position) << '\n'
        << "ris_position = " << join(c.ris_position) << '\n'
        << "area_width = " << format_double(c.area_width) << '\n'
        << "area_depth = " << format_double(c.area_depth) << '\n'
        << "user_height = " << format_double(c.user_height) << '\n'
        << "slots = " << c.slots << '\n'
        << "warmup_fraction = " << format_double(c.warmup_fraction) << '\n'
        << "rng_seed = " << c.rng_seed << '\n';
    return out.str();
}

} // namespace rismec
