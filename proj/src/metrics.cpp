#include "swiptsim/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swiptsim {

double QosReport::u_h_sum() const {
    double acc = 0.0;
    for (int q : qos_h) acc += q ? 0.0 : 1.0;
    return acc;
}

double QosReport::u_s_sum() const {
    double acc = 0.0;
    for (int q : qos_s) acc += q ? 0.0 : 1.0;
    return acc;
}

double QosReport::u_n_sum() const {
    return std::accumulate(u_n.begin(), u_n.end(), 0.0);
}

Indicator h2h_indicator(double sinr_h, const ScenarioConfig& cfg) {
    const bool ok = sinr_h >= cfg.sinr_min_h2h();
    return {ok ? 1 : 0, ok ? 0.0 : 1.0};
}

Indicator cmtcd_indicator(double outage, const ScenarioConfig& cfg) {
    if (outage < 0.0 || outage > 1.0)
        throw std::domain_error("cmtcd_indicator: outage outside [0, 1]");
    const bool ok = outage <= cfg.outage_target;
    return {ok ? 1 : 0, ok ? 0.0 : 1.0};
}

double lemma1_probability(double lambda1, std::span<const double> interferer_rates, double c) {
    if (!(lambda1 > 0.0)) throw std::domain_error("lemma1_probability: lambda1 must be positive");
    if (c < 0.0) throw std::domain_error("lemma1_probability: c must be nonnegative");
    double survival = std::exp(-lambda1 * c);
    for (double li : interferer_rates) {
        if (!(li > 0.0))
            throw std::domain_error("lemma1_probability: interferer rates must be positive");
        survival /= 1.0 + lambda1 / li;
    }
    return 1.0 - survival;
}

std::vector<double> cmtcd_interferer_mean_powers(int s, const Allocation& alloc,
                                                 const LargeScale& large, const Topology& topo) {
    const int k = topo.band_of_cmtcd(s);
    std::vector<double> powers;
    for (int n = 0; n < topo.num_tmtcd(); ++n) {
        if (alloc.tm[n].band != k) continue;
        powers.push_back(alloc.tm[n].power_w *
                         large.chibeta(topo.tx_mtcg(topo.tmtcd_cluster[n]), topo.rx_cmtcd(s)));
    }
    return powers;
}

double outage_exact(int s, const Allocation& alloc, const LargeScale& large,
                    const Topology& topo, const ScenarioConfig& cfg) {
    const double gamma = cfg.sinr_min_cmtcd();
    const double rho = alloc.cmtcd_ps_ratio;
    const double mean_signal =
        cfg.p_cmtcd_w() * large.chibeta(topo.tx_mtcg(topo.cmtcd_cluster[s]), topo.rx_cmtcd(s));
    double survival = std::exp(-cfg.noise_power_w() * gamma / (rho * mean_signal));
    for (double idot : cmtcd_interferer_mean_powers(s, alloc, large, topo))
        survival /= 1.0 + idot * gamma / mean_signal;
    return 1.0 - survival;
}

double outage_bound(int s, const Allocation& alloc, const LargeScale& large,
                    const Topology& topo, const ScenarioConfig& cfg) {
    const double gamma = cfg.sinr_min_cmtcd();
    const double rho = alloc.cmtcd_ps_ratio;
    const double mean_signal =
        cfg.p_cmtcd_w() * large.chibeta(topo.tx_mtcg(topo.cmtcd_cluster[s]), topo.rx_cmtcd(s));
    const auto powers = cmtcd_interferer_mean_powers(s, alloc, large, topo);
    const double aggregate = std::accumulate(powers.begin(), powers.end(), 0.0);
    return 1.0 - std::exp(-gamma * (aggregate + cfg.noise_power_w()) / (rho * mean_signal));
}

double tolerable_reward(double payload_remaining, int t, const ScenarioConfig& cfg) {
    if (t < 1 || t > cfg.time_budget_slots)
        throw std::domain_error("tolerable_reward: slot index outside [1, T]");
    if (payload_remaining <= 0.0) return 0.0;
    return static_cast<double>(cfg.time_budget_slots - t) / cfg.time_budget_slots;
}

EeBreakdown ee_objective(const LinkMetrics& metrics, const Allocation& alloc,
                         const ScenarioConfig& cfg) {
    EeBreakdown ee;
    for (double s : metrics.sinr_s) ee.r_total += std::log2(1.0 + s);
    for (double s : metrics.sinr_n) ee.r_total += std::log2(1.0 + s);

    double tx = 0.0;
    for (const TmtcdAllocation& a : alloc.tm) tx += a.power_w;
    ee.ec_total = tx + metrics.sinr_s.size() * cfg.p_cmtcd_w() + cfg.circuit_power_w() -
                  metrics.eh_total();
    if (!(ee.ec_total > 0.0))
        throw std::domain_error("ee_objective: nonpositive net power consumption");
    ee.eta = ee.r_total / ee.ec_total;
    return ee;
}

double assemble_reward(const EeBreakdown& ee, const QosReport& report,
                       const ScenarioConfig& cfg) {
    return cfg.reward_weight * ee.eta - report.u_n_sum() - report.u_s_sum() - report.u_h_sum();
}

}  // namespace swiptsim
