#include "rismec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "rismec/format.hpp"
#include "rismec/simulation.hpp"
#include "rismec/types.hpp"

#ifndef RISMEC_VERSION
#define RISMEC_VERSION "unknown"
#endif

namespace rismec {

void SweepSpec::validate() const {
    if (strategies.empty()) throw InvalidInput("sweep: no strategies");
    if (p_direct.empty()) throw InvalidInput("sweep: no blocking probabilities");
    for (double p : p_direct)
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("sweep: blocking probability outside [0, 1]");
    for (double v : v_values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("sweep: V must be finite and >= 0");
    if (seeds < 1) throw InvalidInput("sweep: seeds >= 1");
    if (!(delay_target > 0.0) || !(delay_tolerance > 0.0)) throw InvalidInput("sweep: delay target and tolerance > 0");
    if (bisection_iterations < 1) throw InvalidInput("sweep: bisection_iterations >= 1");
    if (!(v_min > 0.0) || !(v_max > v_min) || !std::isfinite(v_max)) throw InvalidInput("sweep: need 0 < v_min < v_max");
    if (threads < 0) throw InvalidInput("sweep: threads >= 0");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

SweepPoint evaluate_point(const SystemConfig& config, const Strategy& strategy, double p_direct, double v, int seeds,
                          std::uint64_t master_seed) {
    SystemConfig c = config;
    c.set_block_prob_direct(p_direct);
    c.lyapunov_v = v;
    SweepPoint point;
    point.v = v;
    for (int i = 0; i < seeds; ++i) {
        const RunSummary s = run_simulation(c, strategy, replica_seed(master_seed, i)).summarize();
        point.mean_power += s.mean_power;
        point.mean_delay += s.mean_delay;
        point.stable = point.stable && s.stable;
    }
    point.mean_power /= seeds;
    point.mean_delay /= seeds;
    return point;
}

std::vector<Fig1Row> sweep_fig1(const SweepSpec& spec, const SystemConfig& config) {
    spec.validate();
    if (spec.v_values.empty()) throw InvalidInput("sweep: no V values");
    std::vector<Fig1Row> rows;
    for (const auto& s : spec.strategies)
        for (double p : spec.p_direct)
            for (double v : spec.v_values)
                for (int i = 0; i < spec.seeds; ++i) {
                    Fig1Row r;
                    r.strategy = s;
                    r.v = v;
                    r.p_direct = p;
                    r.seed = replica_seed(spec.master_seed, i);
                    rows.push_back(r);
                }

    parallel_for(rows.size(), spec.threads, [&](std::size_t i) {
        Fig1Row& r = rows[i];
        SystemConfig c = config;
        c.set_block_prob_direct(r.p_direct);
        c.lyapunov_v = r.v;
        const RunSummary s = run_simulation(c, r.strategy, r.seed).summarize();
        r.mean_power = s.mean_power;
        r.mean_delay = s.mean_delay;
        r.stable = s.stable;
    });
    return rows;
}

DelaySearch search_delay_target(const SweepSpec& spec, const SystemConfig& config, const Strategy& strategy,
                                double p_direct) {
    spec.validate();
    DelaySearch out;
    out.strategy = strategy;
    out.p_direct = p_direct;

    const double target = spec.delay_target;
    double lo = std::log(spec.v_min);
    double hi = std::log(spec.v_max);
    for (int it = 0; it < spec.bisection_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const SweepPoint point = evaluate_point(config, strategy, p_direct, std::exp(mid), spec.seeds, spec.master_seed);
        out.probes.push_back(point);
        if (point.stable && point.mean_delay <= target)
            lo = mid;
        else
            hi = mid;
    }

    const SweepPoint* below = nullptr;
    const SweepPoint* above = nullptr;
    const SweepPoint* closest = nullptr;
    for (const auto& p : out.probes) {
        if (!p.stable) continue;
        if (p.mean_delay <= target && (!below || p.mean_delay > below->mean_delay)) below = &p;
        if (p.mean_delay > target && (!above || p.mean_delay < above->mean_delay)) above = &p;
        if (!closest || std::abs(p.mean_delay - target) < std::abs(closest->mean_delay - target)) closest = &p;
    }
    if (!closest || std::abs(closest->mean_delay - target) > spec.delay_tolerance * target) return out;

    out.feasible = true;
    out.v = closest->v;
    out.power = closest->mean_power;
    if (below && above && below->mean_delay > 0.0 && below->mean_power > 0.0 && above->mean_power > 0.0) {
        const double t = std::log(target / below->mean_delay) / std::log(above->mean_delay / below->mean_delay);
        out.power = std::exp(std::log(below->mean_power) + t * std::log(above->mean_power / below->mean_power));
    }
    return out;
}

std::vector<Fig2Row> sweep_fig2(const SweepSpec& spec, const SystemConfig& config) {
    spec.validate();
    const Strategy baseline{RisMode::absent, KnowledgeMode::instantaneous, 0};

    // Unique (strategy, p) searches, the baseline included.
    std::vector<Strategy> searched = spec.strategies;
    if (std::find(searched.begin(), searched.end(), baseline) == searched.end()) searched.push_back(baseline);
    std::vector<DelaySearch> results(searched.size() * spec.p_direct.size());
    parallel_for(results.size(), spec.threads, [&](std::size_t i) {
        const auto& s = searched[i / spec.p_direct.size()];
        const double p = spec.p_direct[i % spec.p_direct.size()];
        results[i] = search_delay_target(spec, config, s, p);
    });

    const std::size_t base = (std::find(searched.begin(), searched.end(), baseline) - searched.begin()) *
                             spec.p_direct.size();
    std::vector<Fig2Row> rows;
    for (std::size_t si = 0; si < spec.strategies.size(); ++si)
        for (std::size_t pi = 0; pi < spec.p_direct.size(); ++pi) {
            Fig2Row r;
            r.search = results[si * spec.p_direct.size() + pi];
            const DelaySearch& b = results[base + pi];
            r.baseline_feasible = b.feasible;
            if (r.search.feasible && b.feasible) r.gain_db = 10.0 * std::log10(b.power / r.search.power);
            rows.push_back(std::move(r));
        }
    return rows;
}

void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows) {
    out << "strategy,V,p_a,mean_power_mW,mean_delay_ms,seed\n";
    for (const auto& r : rows) {
        out << r.strategy.label() << ',' << format_double(r.v) << ',' << format_double(r.p_direct) << ',';
        if (r.stable)
            out << format_double(r.mean_power * 1e3) << ',' << format_double(r.mean_delay * 1e3);
        else
            out << "infeasible,infeasible";
        out << ',' << r.seed << '\n';
    }
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
    out << "strategy,p_a,power_at_delay_target,gain_dB_vs_no_ris\n";
    for (const auto& r : rows) {
        out << r.search.strategy.label() << ',' << format_double(r.search.p_direct) << ',';
        if (!r.search.feasible)
            out << "infeasible,infeasible";
        else if (!r.baseline_feasible)
            out << format_double(r.search.power * 1e3) << ",inf";
        else
            out << format_double(r.search.power * 1e3) << ',' << format_double(r.gain_db);
        out << '\n';
    }
}

std::string version_string() { return "rismec " RISMEC_VERSION; }

std::string run_manifest(const std::string& command, const SystemConfig& config, const SweepSpec* spec,
                         std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["version"] = version_string();
    j["command"] = command;
    j["seed"] = seed;

    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    const std::string text = format_config(config);
    for (auto line : split(text, '\n')) {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) continue;
        auto trim = [](std::string_view s) {
            while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
            while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
            return std::string(s);
        };
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    j["config"] = cfg;

    if (spec) {
        nlohmann::ordered_json s;
        std::vector<std::string> labels;
        for (const auto& st : spec->strategies) labels.push_back(st.label());
        s["strategies"] = labels;
        s["v_values"] = spec->v_values;
        s["p_direct"] = spec->p_direct;
        s["seeds"] = spec->seeds;
        s["master_seed"] = spec->master_seed;
        s["delay_target_s"] = spec->delay_target;
        s["delay_tolerance"] = spec->delay_tolerance;
        s["bisection_iterations"] = spec->bisection_iterations;
        s["v_min"] = spec->v_min;
        s["v_max"] = spec->v_max;
        j["sweep"] = s;
    }
    return j.dump(2) + "\n";
}

} // namespace rismec
