#include <doctest.h>

#include "helpers.hpp"
#include "rismec/controller.hpp"
#include "rismec/ris.hpp"

using namespace rismec;

namespace {

struct Slot {
    SystemConfig config;
    std::vector<ChannelTriple<double>> triples;
    QueueState queues;
};

Slot make_slot(std::uint64_t seed, int users = 2) {
    Slot s;
    s.config = test::small_config();
    s.config.set_num_users(users);
    Rng rng(seed);
    const NodeGeometry g = generate_geometry(s.config, rng);
    s.triples = sample_slot_channels(g, s.config, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    s.queues = QueueState::empty(users);
    for (int k = 0; k < users; ++k) {
        s.queues.local[k] = 5e4 * u(rng);
        s.queues.remote[k] = 2e4 * u(rng);
    }
    return s;
}

double min_eigenvalue(const CMatrixd& q) {
    Eigen::SelfAdjointEigenSolver<CMatrixd> es(q, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_constraints(const SlotDecision& d, const SystemConfig& c) {
    for (std::size_t k = 0; k < d.covariances.size(); ++k) {
        const CMatrixd& q = d.covariances[k];
        CHECK((q - q.adjoint()).norm() <= 1e-12 * std::max(1.0, q.norm()));
        CHECK(min_eigenvalue(q) >= -1e-12);
        CHECK(q.trace().real() <= c.max_tx_power[k] + 1e-9);
        CHECK(d.cpu.frequency[k] >= 0.0);
    }
    CHECK(d.cpu.total() <= c.max_cpu);
    for (Eigen::Index i = 0; i < d.ris.size(); ++i) CHECK(std::abs(std::abs(d.ris.reflection()(i)) - 1.0) <= 1e-12);
}

} // namespace

TEST_SUITE("controller") {

TEST_CASE("empty queues: no transmission, no computation") {
    Slot s = make_slot(1);
    s.queues = QueueState::empty(2);
    const auto d = optimize_slot(s.queues, s.triples, LinkState::clear(2), Strategy{}, s.config,
                                 RisConfig<double>(s.config.ris_elements));
    for (int k = 0; k < 2; ++k) {
        CHECK(d.covariances[k].isZero(0.0));
        CHECK(d.cpu.frequency[k] == 0.0);
    }
    const std::vector<double> zeros(2, 0.0);
    CHECK(dpp_objective(s.queues, d.rates, zeros, d.cpu.frequency, d.tx_power, s.config) == 0.0);
}

TEST_CASE("fully blocked users stay silent at any V") {
    Slot s = make_slot(2);
    LinkState blocked{{1, 1}, {1, 1}};
    for (double v : {0.0, 1e6, 1e12}) {
        s.config.lyapunov_v = v;
        const auto d = optimize_slot(s.queues, s.triples, blocked, Strategy{}, s.config,
                                     RisConfig<double>(s.config.ris_elements));
        for (int k = 0; k < 2; ++k) CHECK(d.covariances[k].isZero(0.0));
    }
}

TEST_CASE("optimized slot improves on the warm start and the trace never increases") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Slot s = make_slot(seed, 1);
        s.config.ris_elements = 4;
        s.config.pgm_iterations = 20;
        Rng rng(seed);
        const NodeGeometry g = generate_geometry(s.config, rng);
        s.triples = sample_slot_channels(g, s.config, rng);
        const RisConfig<double> warm = random_phases<double>(4, rng);
        const auto d = optimize_slot(s.queues, s.triples, LinkState::clear(1), Strategy{}, s.config, warm);
        REQUIRE(!d.objective_trace.empty());
        for (std::size_t i = 1; i < d.objective_trace.size(); ++i)
            CHECK(d.objective_trace[i] <= d.objective_trace[i - 1]);

        const std::vector<LinkGains> gains(1);
        const double at_warm = d.objective_trace.front();
        CHECK(radio_objective(s.queues, s.triples, gains, d.ris, d.covariances, s.config) <= at_warm);
        check_constraints(d, s.config);
    }
}

TEST_CASE("every strategy satisfies the per-slot constraints") {
    for (const char* label : {"optimized", "optimized-q2", "optimized-statistical", "random", "absent"}) {
        Slot s = make_slot(3, 3);
        s.config.set_block_prob_direct(0.5);
        Rng rng(4);
        const LinkState links = sample_blocking(s.config, rng);
        const auto d = optimize_slot(s.queues, s.triples, links, Strategy::from_label(label), s.config,
                                     random_phases<double>(s.config.ris_elements, rng));
        check_constraints(d, s.config);
    }
}

TEST_CASE("quantized decision lies on the phase grid") {
    Slot s = make_slot(5);
    Strategy q2 = Strategy::from_label("optimized-q2");
    const auto d = optimize_slot(s.queues, s.triples, LinkState::clear(2), q2, s.config,
                                 RisConfig<double>(s.config.ris_elements));
    const double spacing = std::numbers::pi / 2;
    for (Eigen::Index i = 0; i < d.ris.size(); ++i) {
        const double level = d.ris.phases()(i) / spacing;
        CHECK(std::abs(level - std::round(level)) < 1e-9);
    }
}

TEST_CASE("absent RIS ignores the RIS channels") {
    Slot s = make_slot(6, 3);
    const Strategy absent = Strategy::from_label("absent");
    const RisConfig<double> warm(s.config.ris_elements);
    const auto d = optimize_slot(s.queues, s.triples, LinkState::clear(3), absent, s.config, warm);
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto fuzzed = s.triples;
        for (auto& t : fuzzed) {
            t.user_to_ris = test::random_matrix(rng, t.user_to_ris.rows(), t.user_to_ris.cols());
            t.ris_to_ap = test::random_matrix(rng, t.ris_to_ap.rows(), t.ris_to_ap.cols());
        }
        const auto f = optimize_slot(s.queues, fuzzed, LinkState::clear(3), absent, s.config, warm);
        for (int k = 0; k < 3; ++k) {
            CHECK(f.covariances[k] == d.covariances[k]);
            CHECK(f.rates[k] == d.rates[k]);
        }
        CHECK(f.cpu.frequency == d.cpu.frequency);
    }
}

TEST_CASE("statistical knowledge never reads the blocking state") {
    Slot s = make_slot(8, 3);
    s.config.set_block_prob_direct(0.5);
    s.config.set_block_prob_indirect(0.2);
    const Strategy stat = Strategy::from_label("optimized-statistical");
    const RisConfig<double> warm(s.config.ris_elements);
    const auto clear = optimize_slot(s.queues, s.triples, LinkState::clear(3), stat, s.config, warm);
    LinkState flipped{{1, 0, 1}, {0, 1, 1}};
    const auto other = optimize_slot(s.queues, s.triples, flipped, stat, s.config, warm);
    for (int k = 0; k < 3; ++k) CHECK(other.covariances[k] == clear.covariances[k]);
    CHECK(other.ris.reflection() == clear.ris.reflection());
    CHECK(other.planned_rates == clear.planned_rates);
    bool realized_differs = false;
    for (int k = 0; k < 3; ++k) realized_differs = realized_differs || other.rates[k] != clear.rates[k];
    CHECK(realized_differs);

    const auto gains = optimizer_gains(stat, flipped, s.config);
    for (int k = 0; k < 3; ++k) {
        CHECK(gains[k].direct == 0.5);
        CHECK(gains[k].indirect == doctest::Approx(0.8));
    }
}

TEST_CASE("instantaneous planned rates equal realized rates") {
    Slot s = make_slot(9, 3);
    LinkState links{{1, 0, 0}, {0, 1, 0}};
    const auto d = optimize_slot(s.queues, s.triples, links, Strategy{}, s.config,
                                 RisConfig<double>(s.config.ris_elements));
    for (int k = 0; k < 3; ++k) CHECK(d.rates[k] == doctest::Approx(d.planned_rates[k]).epsilon(1e-12));
}

TEST_CASE("inconsistent inputs are rejected") {
    Slot s = make_slot(10);
    CHECK_THROWS_AS(optimize_slot(s.queues, s.triples, LinkState::clear(2), Strategy{}, s.config, RisConfig<double>(3)),
                    InvalidInput);
    QueueState bad = s.queues;
    bad.local[0] = -1.0;
    CHECK_THROWS_AS(optimize_slot(bad, s.triples, LinkState::clear(2), Strategy{}, s.config,
                                  RisConfig<double>(s.config.ris_elements)),
                    InvalidInput);
}

} // TEST_SUITE
