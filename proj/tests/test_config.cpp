#include <doctest.h>

#include <cmath>

#include "rismec/config.hpp"
#include "rismec/format.hpp"
#include "rismec/types.hpp"

using namespace rismec;

TEST_SUITE("config") {

TEST_CASE("defaults") {
    const SystemConfig c = SystemConfig::defaults();
    CHECK_NOTHROW(c.validate());
    CHECK(c.num_users == 6);
    CHECK(c.user_antennas == 4);
    CHECK(c.ap_antennas == 4);
    CHECK(c.ris_elements == 64);
    CHECK(c.slot_duration == 10e-3);
    CHECK(c.max_cpu == 4.5e9);
    double total = 0.0;
    for (int k = 0; k < 6; ++k) {
        total += c.bandwidth[k];
        CHECK(c.noise_power(k) == c.noise_psd * c.bandwidth[k]);
        CHECK(c.cycles_per_bit[k] == 500.0);
        CHECK(c.arrival_rate[k] == 1e6);
        CHECK(c.max_tx_power[k] == doctest::Approx(0.1));
    }
    CHECK(total == doctest::Approx(1e6));
    CHECK(10.0 * std::log10(c.noise_psd * 1e3) == doctest::Approx(-174.0));
}

TEST_CASE("set_num_users keeps the total bandwidth") {
    SystemConfig c = SystemConfig::defaults();
    c.set_num_users(3);
    CHECK(c.bandwidth.size() == 3);
    CHECK(c.bandwidth[0] + c.bandwidth[1] + c.bandwidth[2] == doctest::Approx(1e6));
    CHECK(c.arrival_rate.size() == 3);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("validation failures") {
    auto broken = [](auto mutate) {
        SystemConfig c = SystemConfig::defaults(2);
        mutate(c);
        return c;
    };
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.ris_elements = 0; }).validate(), InvalidInput);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.slot_duration = 0; }).validate(), InvalidInput);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.lyapunov_v = -1; }).validate(), InvalidInput);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.block_prob_direct[1] = 1.5; }).validate(), InvalidInput);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.max_tx_power[0] = 0; }).validate(), InvalidInput);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.cycles_per_bit.pop_back(); }).validate(), InvalidInput);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.ris_position = c.ap_position; }).validate(), InvalidInput);
    CHECK_NOTHROW(broken([](SystemConfig& c) { c.lyapunov_v = 0; }).validate());
}

TEST_CASE("parse and format round trip") {
    SystemConfig c = SystemConfig::defaults(3);
    c.ris_elements = 16;
    c.lyapunov_v = 3.3e11;
    c.block_prob_direct = {0.1, 0.5, 0.9};
    c.ris_position = {5.0, 5.0, 6.0};
    c.strategy = Strategy::from_label("optimized-statistical-q2");
    c.rng_seed = 12345678901234ULL;
    const std::string text = format_config(c);
    const SystemConfig back = parse_config(text);
    CHECK(format_config(back) == text);
    CHECK(back.block_prob_direct == c.block_prob_direct);
    CHECK(back.strategy == c.strategy);
    CHECK(back.rng_seed == c.rng_seed);
}

TEST_CASE("parser details") {
    const SystemConfig c = parse_config("# scenario\nnum_users = 2\n\nblock_prob_direct = 0.3  # broadcast\n"
                                        "total_bandwidth = 2e6\nnoise_psd_dbm_hz = -174\n");
    CHECK(c.block_prob_direct == std::vector<double>{0.3, 0.3});
    CHECK(c.bandwidth == std::vector<double>{1e6, 1e6});
    CHECK(c.noise_psd == doctest::Approx(SystemConfig::defaults().noise_psd));

    CHECK_THROWS_AS(parse_config("num_users = 2\nbogus = 1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("num_users = 3\narrival_rate = 1, 2\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("slots = ten\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("no equals sign\n"), InvalidInput);
}

TEST_CASE("strategy labels") {
    for (const char* label : {"optimized", "optimized-q2", "optimized-statistical", "optimized-statistical-q2",
                              "random", "absent"})
        CHECK(Strategy::from_label(label).label() == label);
    CHECK(Strategy::from_label("optimized-q2").phase_bits == 2);
    CHECK_THROWS_AS(Strategy::from_label("sideways"), InvalidInput);
}

TEST_CASE("number formatting is locale independent and round-trips") {
    for (double x : {0.1, 1e-21, 3.981071705534972e-21, 12345.678, 1e10})
        CHECK(parse_double(format_double(x)) == x);
    CHECK(format_fixed(1.23456, 2) == "1.23");
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidInput);
}

} // TEST_SUITE
