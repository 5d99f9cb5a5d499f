// rismec: single runs, trade-off sweeps and the oracle self-test.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rismec/config.hpp"
#include "rismec/format.hpp"
#include "rismec/oracles.hpp"
#include "rismec/simulation.hpp"
#include "rismec/sweep.hpp"

namespace fs = std::filesystem;
using namespace rismec;

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string strategy;
    std::string knowledge;
    std::optional<int> phase_bits;
    std::optional<int> slots;
    std::vector<double> v;
    std::vector<double> p_direct;
    int seeds = 3;
    int threads = 0;
    double delay_target_ms = 150.0;
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "master seed (default: rng_seed of the config)");
    app->add_option("--out", o.out_dir, "output directory");
    app->add_option("--strategy", o.strategy,
                    "optimized|random|absent, or a comma separated list of labels such as "
                    "optimized,optimized-q2,optimized-statistical,random,absent");
    app->add_option("--knowledge", o.knowledge, "instantaneous|statistical (optimized strategies)");
    app->add_option("--phase-bits", o.phase_bits, "RIS phase quantization bits, 0 = continuous");
    app->add_option("--slots", o.slots, "slots per run");
    app->add_option("--v", o.v, "Lyapunov V values")->delimiter(',');
    app->add_option("--p-direct", o.p_direct, "direct-link blocking probabilities")->delimiter(',');
}

void add_sweep(CLI::App* app, Options& o) {
    app->add_option("--seeds", o.seeds, "replicas per point")->check(CLI::PositiveNumber);
    app->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

SystemConfig load(const Options& o) {
    SystemConfig c = o.config_path.empty() ? SystemConfig::defaults() : load_config(o.config_path);
    if (o.slots) c.slots = *o.slots;
    if (o.seed) c.rng_seed = *o.seed;
    c.validate();
    return c;
}

Strategy apply_flags(Strategy s, const Options& o) {
    if (s.ris_mode != RisMode::optimized) return s;
    if (!o.knowledge.empty()) s.knowledge_mode = parse_knowledge_mode(o.knowledge);
    if (o.phase_bits) s.phase_bits = *o.phase_bits;
    return s;
}

std::vector<Strategy> strategies(const Options& o, const SystemConfig& c, bool sweep) {
    std::vector<Strategy> out;
    if (o.strategy.empty()) {
        if (!sweep) return {apply_flags(c.strategy, o)};
        for (const char* label : {"optimized", "optimized-q2", "optimized-statistical", "random", "absent"})
            out.push_back(Strategy::from_label(label));
        return out;
    }
    for (auto label : split(o.strategy, ',')) out.push_back(apply_flags(Strategy::from_label(label), o));
    return out;
}

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

int run_single(const Options& o, const std::string& command) {
    SystemConfig c = load(o);
    if (!o.v.empty()) c.lyapunov_v = o.v.front();
    if (!o.p_direct.empty()) c.set_block_prob_direct(o.p_direct.front());
    c.strategy = strategies(o, c, false).front();
    c.validate();

    const MetricsLog log = run_simulation(c, c.strategy, c.rng_seed);
    const RunSummary s = log.summarize();

    fs::create_directories(o.out_dir);
    std::ostringstream csv;
    csv << "slot,user,rate_bps,tx_power_W,local_bits,remote_bits,frequency_Hz,arrivals_bits,direct_blocked,"
           "indirect_blocked\n";
    for (const auto& r : log.rows)
        for (int k = 0; k < log.num_users; ++k)
            csv << r.slot << ',' << k << ',' << format_double(r.rate[k]) << ',' << format_double(r.tx_power[k]) << ','
                << format_double(r.local[k]) << ',' << format_double(r.remote[k]) << ','
                << format_double(r.frequency[k]) << ',' << format_double(r.arrivals[k]) << ','
                << int(r.direct_blocked[k]) << ',' << int(r.indirect_blocked[k]) << '\n';
    write_file(fs::path(o.out_dir) / "run.csv", csv.str());
    write_file(fs::path(o.out_dir) / "manifest.json", run_manifest(command, c, nullptr, c.rng_seed));

    std::cout << "strategy " << c.strategy.label() << ", V " << format_double(c.lyapunov_v) << ", p_a "
              << format_double(c.block_prob_direct.front()) << '\n'
              << "mean power " << format_fixed(s.mean_power * 1e3, 4) << " mW\n"
              << "mean delay " << format_fixed(s.mean_delay * 1e3, 2) << " ms\n"
              << "stable " << (s.stable ? "yes" : "no") << '\n';
    return 0;
}

SweepSpec make_spec(const Options& o, const SystemConfig& c) {
    SweepSpec spec;
    spec.strategies = strategies(o, c, true);
    spec.seeds = o.seeds;
    spec.threads = o.threads;
    spec.master_seed = c.rng_seed;
    spec.delay_target = o.delay_target_ms * 1e-3;
    return spec;
}

int run_fig1(const Options& o, const std::string& command) {
    const SystemConfig c = load(o);
    SweepSpec spec = make_spec(o, c);
    spec.v_values = o.v.empty() ? std::vector<double>{1e9, 1e10, 1e11, 1e12} : o.v;
    spec.p_direct = o.p_direct.empty() ? std::vector<double>{0.0, 0.5} : o.p_direct;

    const auto rows = sweep_fig1(spec, c);
    fs::create_directories(o.out_dir);
    std::ostringstream csv;
    write_fig1_csv(csv, rows);
    write_file(fs::path(o.out_dir) / "fig1.csv", csv.str());
    write_file(fs::path(o.out_dir) / "manifest.json", run_manifest(command, c, &spec, spec.master_seed));
    std::cout << rows.size() << " rows -> " << (fs::path(o.out_dir) / "fig1.csv").string() << '\n';
    return 0;
}

int run_fig2(const Options& o, const std::string& command) {
    const SystemConfig c = load(o);
    SweepSpec spec = make_spec(o, c);
    if (!o.v.empty()) {
        if (o.v.size() != 2) throw InvalidInput("sweep-fig2: --v takes the search bracket v_min,v_max");
        spec.v_min = o.v[0];
        spec.v_max = o.v[1];
    }
    spec.p_direct = o.p_direct.empty() ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9} : o.p_direct;

    const auto rows = sweep_fig2(spec, c);
    fs::create_directories(o.out_dir);
    std::ostringstream csv;
    write_fig2_csv(csv, rows);
    write_file(fs::path(o.out_dir) / "fig2.csv", csv.str());
    write_file(fs::path(o.out_dir) / "manifest.json", run_manifest(command, c, &spec, spec.master_seed));
    std::cout << rows.size() << " rows -> " << (fs::path(o.out_dir) / "fig2.csv").string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted MIMO computation offloading simulator"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    Options run_opts, fig1_opts, fig2_opts;
    auto* run = app.add_subcommand("run", "one simulation; writes run.csv and manifest.json");
    add_common(run, run_opts);
    auto* fig1 = app.add_subcommand("sweep-fig1", "power/delay trade-off over V; writes fig1.csv");
    add_common(fig1, fig1_opts);
    add_sweep(fig1, fig1_opts);
    auto* fig2 = app.add_subcommand("sweep-fig2", "power at a delay target vs p_a; writes fig2.csv");
    add_common(fig2, fig2_opts);
    add_sweep(fig2, fig2_opts);
    fig2->add_option("--delay-target", fig2_opts.delay_target_ms, "delay target in ms");

    oracle::SelftestOptions self_opts;
    auto* self = app.add_subcommand("selftest", "oracle and invariant checks");
    self->add_option("--seed", self_opts.seed, "seed of the random instances");

    CLI11_PARSE(app, argc, argv);

    const std::string command = command_line(argc, argv);
    try {
        if (*run) return run_single(run_opts, command);
        if (*fig1) return run_fig1(fig1_opts, command);
        if (*fig2) return run_fig2(fig2_opts, command);
        if (*self) return oracle::run_selftest(std::cout, self_opts) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
