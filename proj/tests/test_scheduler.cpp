#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rismec/oracles.hpp"
#include "rismec/scheduler.hpp"
#include "rismec/types.hpp"

using namespace rismec;

TEST_SUITE("scheduler") {

TEST_CASE("empty remote queues get no cycles") {
    const std::vector<double> b(4, 0.0), j(4, 500.0);
    const auto a = allocate_cpu(b, j, 4.5e9, 1e-2);
    for (double f : a.frequency) CHECK(f == 0.0);
}

TEST_CASE("a single huge backlog takes the whole budget") {
    const std::vector<double> b{1e12}, j{500.0};
    CHECK(allocate_cpu(b, j, 4.5e9, 1e-2).frequency[0] == 4.5e9);
}

TEST_CASE("per-user cap empties the queue exactly") {
    // user 0 has the higher ratio B_r / J but needs only B_r J / tau = 100 cycles/s
    const std::vector<double> b{100.0, 1e5}, j{0.01, 500.0};
    const auto a = allocate_cpu(b, j, 4.5e9, 1e-2);
    CHECK(a.frequency[0] == doctest::Approx(100.0));
    CHECK(a.frequency[1] == doctest::Approx(4.5e9 - 100.0));
    CHECK(1e-2 * a.frequency[0] / j[0] == doctest::Approx(b[0]));
    CHECK(a.total() <= 4.5e9);
}

TEST_CASE("greedy equals the LP optimum and respects the budget exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const int n = 1 + static_cast<int>(u(rng) * 6);
        std::vector<double> b(n), j(n);
        for (int k = 0; k < n; ++k) {
            b[k] = u(rng) < 0.2 ? 0.0 : 1e6 * u(rng);
            j[k] = 100.0 + 900.0 * u(rng);
        }
        const double fmax = 1e8 + 5e9 * u(rng);
        const auto a = allocate_cpu(b, j, fmax, 1e-2);
        CHECK(a.total() <= fmax);
        for (int k = 0; k < n; ++k) {
            CHECK(a.frequency[k] >= 0.0);
            CHECK(a.frequency[k] <= cpu_cap(b[k], j[k], fmax, 1e-2));
        }
        const double lp = oracle::cpu_lp_optimum(b, j, fmax, 1e-2);
        CHECK(cpu_objective(b, j, a.frequency) == doctest::Approx(lp).epsilon(1e-9));
    }
}

TEST_CASE("permutation equivariance") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const int n = 5;
        std::vector<double> b(n), j(n);
        for (int k = 0; k < n; ++k) {
            b[k] = std::floor(1e6 * u(rng));
            j[k] = 100.0 + std::floor(900.0 * u(rng));
        }
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> bp(n), jp(n);
        for (int k = 0; k < n; ++k) {
            bp[k] = b[perm[k]];
            jp[k] = j[perm[k]];
        }
        const auto a = allocate_cpu(b, j, 3e9, 1e-2);
        const auto ap = allocate_cpu(bp, jp, 3e9, 1e-2);
        for (int k = 0; k < n; ++k) CHECK(ap.frequency[k] == doctest::Approx(a.frequency[perm[k]]).epsilon(1e-12));
    }
}

TEST_CASE("ties are served in index order") {
    const std::vector<double> b{1e6, 1e6}, j{500.0, 500.0};
    const auto a = allocate_cpu(b, j, 1e9, 1e-2);
    CHECK(a.frequency[0] == 1e9);
    CHECK(a.frequency[1] == 0.0);
}

TEST_CASE("negative inputs are rejected") {
    const std::vector<double> bad{-1.0}, j{500.0}, b{1.0}, zero{0.0};
    CHECK_THROWS_AS(allocate_cpu(bad, j, 1e9, 1e-2), InvalidInput);
    CHECK_THROWS_AS(allocate_cpu(b, zero, 1e9, 1e-2), InvalidInput);
    CHECK_THROWS_AS(allocate_cpu(b, j, 0.0, 1e-2), InvalidInput);
}

} // TEST_SUITE
