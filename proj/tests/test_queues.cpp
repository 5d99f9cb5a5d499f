#include <doctest.h>

#include <cmath>
#include <random>

#include "rismec/config.hpp"
#include "rismec/oracles.hpp"
#include "rismec/queues.hpp"
#include "rismec/types.hpp"

using namespace rismec;

TEST_SUITE("queues") {

TEST_CASE("local queue examples") {
    CHECK(update_local_queue(1000, 40000, 0, 1e-2).backlog == 600);
    const auto clamped = update_local_queue(100, 40000, 50, 1e-2);
    CHECK(clamped.backlog == 50);
    CHECK(clamped.transferred == 100);
    CHECK(update_local_queue(0, 0, 1e4, 1e-2).backlog == 1e4);
}

TEST_CASE("remote queue examples") {
    CHECK(update_remote_queue(1e4, 4.5e9, 500, 0, 1e-2) == 0);
    CHECK(update_remote_queue(1e4, 4.5e9, 500, 77, 1e-2) == 77);
    CHECK(update_remote_queue(321, 0, 500, 0, 1e-2) == 321);
    CHECK(update_remote_queue(0, 1e9, 500, 123, 1e-2) == 123);
}

TEST_CASE("lyapunov examples") {
    CHECK(lyapunov(QueueState::empty(3)) == 0.0);
    CHECK(lyapunov(QueueState{{2.0}, {2.0}}) == 4.0);
    const QueueState q{{3.0, 1.5}, {0.5, 7.0}};
    const QueueState q2{{6.0, 3.0}, {1.0, 14.0}};
    CHECK(lyapunov(q2) == 4.0 * lyapunov(q));
}

TEST_CASE("dpp objective examples") {
    SystemConfig c = SystemConfig::defaults(1);
    c.lyapunov_v = 2.0;
    c.slot_duration = 0.5;
    const QueueState zero = QueueState::empty(1);
    const std::vector<double> z{0.0};
    CHECK(dpp_objective(zero, z, z, z, z, c) == 0.0);

    const QueueState q{{10.0}, {0.0}};
    const std::vector<double> rate{10.0}, one{1.0};
    CHECK(dpp_objective(q, rate, z, z, one, c) == -48.0);
}

TEST_CASE("average delay") {
    const std::vector<double> b{1e4}, a{1e4};
    CHECK(average_delay(b, b, a, 1e-2)[0] == doctest::Approx(0.02));
    const std::vector<double> zero{0.0};
    CHECK(average_delay(zero, zero, a, 1e-2)[0] == 0.0);
    CHECK_THROWS_AS(average_delay(b, b, zero, 1e-2), UndefinedDelay);
}

TEST_CASE("hand trace is bit-exact") {
    CHECK(oracle::check_queue_trace().pass);
}

TEST_CASE("nonnegativity and flow conservation on random inputs") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemConfig c = SystemConfig::defaults(3);
    QueueState q = QueueState::empty(3);
    for (int t = 0; t < 2000; ++t) {
        std::vector<double> r(3), a(3), f(3);
        for (int k = 0; k < 3; ++k) {
            r[k] = u(rng) < 0.3 ? 0.0 : 2e6 * u(rng);
            a[k] = std::floor(2e4 * u(rng));
            f[k] = u(rng) < 0.3 ? 0.0 : 4.5e9 * u(rng);
        }
        const QueueState before = q;
        const auto moved = advance_queues(q, r, a, f, c);
        for (int k = 0; k < 3; ++k) {
            CHECK(q.local[k] >= 0.0);
            CHECK(q.remote[k] >= 0.0);
            const double left = before.local[k] + a[k] - q.local[k];
            CHECK(std::abs(left - moved[k]) <= 1e-12 * (before.local[k] + a[k]));
            const double drained = std::max(0.0, before.remote[k] - c.slot_duration * f[k] / c.cycles_per_bit[k]);
            CHECK(q.remote[k] == drained + moved[k]);
        }
    }
}

TEST_CASE("mismatched sizes are rejected") {
    SystemConfig c = SystemConfig::defaults(2);
    QueueState q = QueueState::empty(2);
    const std::vector<double> one{0.0}, two{0.0, 0.0};
    CHECK_THROWS_AS(advance_queues(q, one, two, two, c), InvalidInput);
}

} // TEST_SUITE
