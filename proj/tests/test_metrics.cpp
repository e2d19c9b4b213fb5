#include <doctest.h>

#include <cmath>

#include "swiptsim/metrics.hpp"
#include "swiptsim/oracle.hpp"
#include "test_util.hpp"

using namespace swiptsim;
using testutil::World;

TEST_CASE("h2h indicator") {
    ScenarioConfig cfg;
    const Indicator sat = h2h_indicator(db_to_linear(10.0), cfg);
    CHECK(sat.satisfied == 1);
    CHECK(sat.penalty == 0.0);
    const Indicator edge = h2h_indicator(cfg.sinr_min_h2h(), cfg);
    CHECK(edge.satisfied == 1);  // threshold is inclusive
    const Indicator bad = h2h_indicator(0.0, cfg);
    CHECK(bad.satisfied == 0);
    CHECK(bad.penalty == 1.0);
}

TEST_CASE("cmtcd indicator") {
    ScenarioConfig cfg;
    CHECK(cmtcd_indicator(0.005, cfg).penalty == 0.0);
    CHECK(cmtcd_indicator(0.01, cfg).penalty == 0.0);  // inclusive
    CHECK(cmtcd_indicator(0.5, cfg).penalty == 1.0);
    CHECK_THROWS_AS(cmtcd_indicator(-0.1, cfg), std::domain_error);
}

TEST_CASE("exponential-sum probability closed form") {
    CHECK(lemma1_probability(1.0, {}, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    const double symmetric[] = {1.0};
    CHECK(lemma1_probability(1.0, symmetric, 0.0) == doctest::Approx(0.5).epsilon(1e-12));

    const double rates[] = {2.0};
    const double expected = 1.0 - std::exp(-1.0) * (1.0 / (1.0 + 0.5));
    CHECK(lemma1_probability(1.0, rates, 1.0) == doctest::Approx(expected).epsilon(1e-12));

    // sampling oracle agrees
    Rng rng(101);
    const double est = mc_lemma1(1.0, rates, 1.0, 1000000, rng);
    CHECK(std::abs(est - expected) < 0.002);

    CHECK_THROWS_AS(lemma1_probability(0.0, {}, 1.0), std::domain_error);
    CHECK_THROWS_AS(lemma1_probability(1.0, {}, -1.0), std::domain_error);
}

namespace {

// one cluster per interferer so every mean power is an independent entry
World outage_world(double mean_signal, const std::vector<double>& interferers, double rho) {
    World w = testutil::unit_world(1, static_cast<int>(interferers.size()) + 1, 1, 1);
    w.cfg.cmtcd_ps_ratio = rho;
    w.alloc.cmtcd_ps_ratio = rho;
    const int band = w.topo.band_of_cmtcd(0);
    testutil::set_chibeta(w, w.topo.tx_mtcg(0), w.topo.rx_cmtcd(0), 1.0,
                          mean_signal / w.cfg.p_cmtcd_w());
    for (int n = 0; n < w.topo.num_tmtcd(); ++n) {
        const int m = w.topo.tmtcd_cluster[n];
        if (m == 0) continue;
        w.alloc.tm[n] = {band, 1.0, 1.0};
        testutil::set_chibeta(w, w.topo.tx_mtcg(m), w.topo.rx_cmtcd(0), 1.0, interferers[m - 1]);
    }
    return w;
}

}  // namespace

TEST_CASE("outage closed form") {
    const double noise = ScenarioConfig{}.noise_power_w();
    const double gamma = db_to_linear(5.0);

    SUBCASE("no interferers reduces to the pure-noise expression") {
        World w = outage_world(4e-12, {}, 0.9);
        const double expected = 1.0 - std::exp(-noise * gamma / (0.9 * 4e-12));
        CHECK(outage_exact(0, w.alloc, w.large, w.topo, w.cfg) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(outage_bound(0, w.alloc, w.large, w.topo, w.cfg) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("single interferer matches the generic exponential identity") {
        const double mean_signal = 4e-12, idot = 3e-13, rho = 0.7;
        World w = outage_world(mean_signal, {idot}, rho);
        const double rates[] = {1.0 / (gamma * idot)};
        const double via_lemma =
            lemma1_probability(1.0 / mean_signal, rates, gamma * noise / rho);
        CHECK(outage_exact(0, w.alloc, w.large, w.topo, w.cfg) ==
              doctest::Approx(via_lemma).epsilon(1e-12));
    }

    SUBCASE("fading simulation confirms the exact form") {
        Rng rng(103);
        const std::vector<std::vector<double>> interferer_sets = {
            {}, {1e-13}, {5e-13, 2e-14}, {1e-12, 1e-13, 5e-14}};
        for (const auto& inter : interferer_sets) {
            World w = outage_world(5e-12, inter, 0.9);
            const double exact = outage_exact(0, w.alloc, w.large, w.topo, w.cfg);
            const double est = mc_outage(5e-12, inter, 0.9, noise, gamma, 1000000, rng);
            const double se = std::sqrt(std::max(est * (1 - est), 1e-12) / 1e6);
            CHECK(std::abs(exact - est) < std::max(3.0 * se, 0.003));
        }
    }

    SUBCASE("bound dominates the exact form across random settings") {
        Rng rng(107);
        for (int i = 0; i < 10000; ++i) {
            const double mean_signal = noise * gamma * std::exp(rng.uniform(0.0, 10.0));
            const double rho = 0.2 + 0.8 * rng.uniform01();
            const int k = static_cast<int>(rng.uniform_int(4));
            std::vector<double> inter(k);
            for (double& v : inter)
                v = mean_signal * std::exp(rng.uniform(std::log(1e-6), 0.0));
            World w = outage_world(mean_signal, inter, rho);
            const double exact = outage_exact(0, w.alloc, w.large, w.topo, w.cfg);
            const double bound = outage_bound(0, w.alloc, w.large, w.topo, w.cfg);
            CHECK(exact >= 0.0);
            CHECK(exact <= 1.0);
            CHECK(bound <= 1.0);
            CHECK(bound >= exact - 1e-15);
        }
    }

    SUBCASE("bound is continuous as interference vanishes") {
        World w0 = outage_world(4e-12, {}, 0.9);
        World w1 = outage_world(4e-12, {1e-30}, 0.9);
        const double b0 = outage_bound(0, w0.alloc, w0.large, w0.topo, w0.cfg);
        const double b1 = outage_bound(0, w1.alloc, w1.large, w1.topo, w1.cfg);
        CHECK(b1 == doctest::Approx(b0).epsilon(1e-9));
    }
}

TEST_CASE("oracle validators pass at reduced scale") {
    const OracleReport l1 = validate_lemma1(10, 200000, 2024);
    CHECK(l1.all_pass);
    const OracleReport out = validate_outage(200, 20000, 2024);
    CHECK(out.all_pass);
    const OracleReport tight = validate_outage_tightness(100, 2024);
    CHECK(tight.all_pass);
}

TEST_CASE("payload time penalty") {
    ScenarioConfig cfg;  // T = 100
    CHECK(tolerable_reward(100.0, 25, cfg) == doctest::Approx(0.75));
    CHECK(tolerable_reward(0.0, 25, cfg) == 0.0);
    CHECK(tolerable_reward(0.0, 7, cfg) == 0.0);
    CHECK(tolerable_reward(5000.0, 100, cfg) == 0.0);
    CHECK_THROWS_AS(tolerable_reward(1.0, 0, cfg), std::domain_error);
    CHECK_THROWS_AS(tolerable_reward(1.0, 101, cfg), std::domain_error);
}

TEST_CASE("energy-efficiency objective") {
    SUBCASE("no tolerable links and full critical decode") {
        World w = testutil::unit_world(2, 2, 1, 0);
        w.alloc.cmtcd_ps_ratio = 1.0;
        const LinkMetrics m = compute_all_metrics(w.alloc, w.channel, w.topo, w.cfg);
        const EeBreakdown ee = ee_objective(m, w.alloc, w.cfg);
        CHECK(ee.ec_total ==
              doctest::Approx(2.0 * w.cfg.p_cmtcd_w() + w.cfg.circuit_power_w()).epsilon(1e-12));
    }

    SUBCASE("all-decode allocations harvest nothing") {
        Rng rng(109);
        for (int i = 0; i < 200; ++i) {
            World w = testutil::random_world(rng, /*swipt=*/false);
            const LinkMetrics m = compute_all_metrics(w.alloc, w.channel, w.topo, w.cfg);
            CHECK(m.eh_total() == 0.0);
            const EeBreakdown ee = ee_objective(m, w.alloc, w.cfg);
            double tx = 0.0;
            for (const auto& a : w.alloc.tm) tx += a.power_w;
            CHECK(ee.ec_total == doctest::Approx(tx + w.topo.num_cmtcd() * w.cfg.p_cmtcd_w() +
                                                 w.cfg.circuit_power_w())
                                     .epsilon(1e-12));
        }
    }

    SUBCASE("randomized recomputation") {
        Rng rng(113);
        for (int i = 0; i < 2000; ++i) {
            World w = testutil::random_world(rng);
            const LinkMetrics m = compute_all_metrics(w.alloc, w.channel, w.topo, w.cfg);
            const EeBreakdown ee = ee_objective(m, w.alloc, w.cfg);
            double r = 0.0;
            for (double s : m.sinr_s) r += std::log2(1.0 + s);
            for (double s : m.sinr_n) r += std::log2(1.0 + s);
            double ec = w.topo.num_cmtcd() * w.cfg.p_cmtcd_w() + w.cfg.circuit_power_w();
            for (const auto& a : w.alloc.tm) ec += a.power_w;
            for (double e : m.eh_s) ec -= e;
            for (double e : m.eh_n) ec -= e;
            CHECK(ee.r_total == doctest::Approx(r).epsilon(1e-9));
            CHECK(ee.ec_total == doctest::Approx(ec).epsilon(1e-9));
            CHECK(ee.eta == doctest::Approx(r / ec).epsilon(1e-9));
        }
    }
}

TEST_CASE("common reward assembly") {
    ScenarioConfig cfg;
    QosReport all_good;
    all_good.qos_h = {1, 1};
    all_good.qos_s = {1, 1};
    all_good.u_n = {0.0, 0.0, 0.0, 0.0};

    EeBreakdown ee;
    ee.eta = 50.0;
    CHECK(assemble_reward(ee, all_good, cfg) == doctest::Approx(1.0).epsilon(1e-12));

    // every constraint violated in the very first slot
    QosReport all_bad;
    all_bad.qos_h = {0, 0};
    all_bad.qos_s = {0, 0};
    all_bad.u_n = {0.99, 0.99, 0.99, 0.99};
    EeBreakdown zero;
    zero.eta = 0.0;
    CHECK(assemble_reward(zero, all_bad, cfg) == doctest::Approx(-7.96).epsilon(1e-12));

    // doubling the weight doubles only the efficiency term
    ScenarioConfig doubled = cfg;
    doubled.reward_weight *= 2.0;
    const double base = assemble_reward(ee, all_bad, cfg);
    const double more = assemble_reward(ee, all_bad, doubled);
    CHECK(more - base == doctest::Approx(cfg.reward_weight * ee.eta).epsilon(1e-12));
}
