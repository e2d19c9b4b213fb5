#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "swiptsim/config.hpp"
#include "swiptsim/topology.hpp"

using namespace swiptsim;

TEST_CASE("default config is valid") {
    ScenarioConfig cfg;
    CHECK(validate_config(cfg).empty());
    CHECK(cfg.num_subbands() == 4);
    CHECK(cfg.subband_bandwidth_hz() == doctest::Approx(1e6));
}

TEST_CASE("boundary violations are reported individually") {
    ScenarioConfig cfg;
    cfg.energy_conversion = 0.0;
    auto v = validate_config(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("energy_conversion") != std::string::npos);

    cfg = ScenarioConfig{};
    cfg.ps_levels = 0;
    v = validate_config(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("ps_levels") != std::string::npos);
}

TEST_CASE("sub-band split recovers the total bandwidth") {
    ScenarioConfig cfg;
    for (int hues : {1, 2, 3, 6}) {
        cfg.num_hue = hues;
        cfg.num_clusters = 2;
        const int k = cfg.num_subbands();
        CHECK(cfg.subband_bandwidth_hz() * k == cfg.total_bandwidth_hz);
    }
}

TEST_CASE("topology generation is seed-deterministic") {
    ScenarioConfig cfg;
    Rng a(42), b(42);
    const Topology ta = generate_topology(cfg, a);
    const Topology tb = generate_topology(cfg, b);
    REQUIRE(ta.hue_positions.size() == tb.hue_positions.size());
    for (std::size_t i = 0; i < ta.hue_positions.size(); ++i) {
        CHECK(ta.hue_positions[i].x == tb.hue_positions[i].x);
        CHECK(ta.hue_positions[i].y == tb.hue_positions[i].y);
    }
    for (std::size_t i = 0; i < ta.tmtcd_positions.size(); ++i) {
        CHECK(ta.tmtcd_positions[i].x == tb.tmtcd_positions[i].x);
        CHECK(ta.tmtcd_positions[i].y == tb.tmtcd_positions[i].y);
    }
}

TEST_CASE("positions respect the disc supports") {
    ScenarioConfig cfg;
    Rng rng(7);
    double max_hue = 0.0, max_cluster = 0.0;
    double sum_sq = 0.0;
    int hue_count = 0;
    for (int i = 0; i < 10000; ++i) {
        const Topology t = generate_topology(cfg, rng);
        for (const Point& p : t.hue_positions) {
            const double d = distance_m(p, t.bs_position);
            max_hue = std::max(max_hue, d);
            sum_sq += d * d;
            ++hue_count;
        }
        for (const Point& p : t.mtcg_positions)
            max_hue = std::max(max_hue, distance_m(p, t.bs_position));
        for (int s = 0; s < t.num_cmtcd(); ++s)
            max_cluster = std::max(max_cluster, distance_m(t.cmtcd_positions[s],
                                                           t.mtcg_positions[t.cmtcd_cluster[s]]));
        for (int n = 0; n < t.num_tmtcd(); ++n)
            max_cluster = std::max(max_cluster, distance_m(t.tmtcd_positions[n],
                                                           t.mtcg_positions[t.tmtcd_cluster[n]]));
    }
    CHECK(max_hue <= cfg.cell_radius_m);
    CHECK(max_cluster <= cfg.cluster_radius_m);
    // uniform disc: mean squared radius is R^2 / 2
    const double mean_sq = sum_sq / hue_count;
    CHECK(mean_sq == doctest::Approx(cfg.cell_radius_m * cfg.cell_radius_m / 2.0).epsilon(0.02));
}

TEST_CASE("band ownership is a bijection in index order") {
    ScenarioConfig cfg;
    cfg.num_hue = 3;
    cfg.num_clusters = 2;
    cfg.cmtcd_per_cluster = 2;
    Rng rng(9);
    const Topology t = generate_topology(cfg, rng);
    REQUIRE(t.num_subbands == 7);
    std::set<int> hue_owners, cmtcd_owners;
    for (int k = 0; k < t.num_subbands; ++k) {
        if (t.band_owned_by_hue(k)) {
            CHECK(t.band_of_hue(t.band_owner_hue(k)) == k);
            hue_owners.insert(t.band_owner_hue(k));
        } else {
            CHECK(t.band_of_cmtcd(t.band_owner_cmtcd(k)) == k);
            cmtcd_owners.insert(t.band_owner_cmtcd(k));
        }
    }
    CHECK(hue_owners.size() == 3);
    CHECK(cmtcd_owners.size() == 4);
}

TEST_CASE("config file parsing") {
    const char* path = "test_scenario_config.cfg";
    {
        std::ofstream os(path);
        os << "# comment line\n";
        os << "cell_radius_m = 250   # trailing comment\n";
        os << "\n";
        os << "tmtcd_per_cluster = 3\n";
    }
    ScenarioConfig cfg = parse_config_file(path);
    CHECK(cfg.cell_radius_m == 250.0);
    CHECK(cfg.tmtcd_per_cluster == 3);
    CHECK(cfg.num_hue == 2);  // untouched default

    {
        std::ofstream os(path);
        os << "no_such_key = 1\n";
    }
    CHECK_THROWS_AS(parse_config_file(path), std::invalid_argument);

    {
        std::ofstream os(path);
        os << "cell_radius_m = abc\n";
    }
    CHECK_THROWS_AS(parse_config_file(path), std::invalid_argument);
    std::remove(path);
}

TEST_CASE("config serialization round-trips every field") {
    ScenarioConfig cfg;
    cfg.cell_radius_m = 123.5;
    cfg.rng_seed = 987654321;
    cfg.rmsprop_stabilizer = 3e-9;
    const char* path = "test_scenario_roundtrip.cfg";
    {
        std::ofstream os(path);
        os << serialize_config(cfg);
    }
    const ScenarioConfig back = parse_config_file(path);
    CHECK(back.cell_radius_m == cfg.cell_radius_m);
    CHECK(back.rng_seed == cfg.rng_seed);
    CHECK(back.rmsprop_stabilizer == cfg.rmsprop_stabilizer);
    CHECK(serialize_config(back) == serialize_config(cfg));
    CHECK(config_keys().size() == 37);
    std::remove(path);
}
