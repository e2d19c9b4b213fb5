#include "swiptsim/phy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swiptsim {

double LinkMetrics::eh_total() const {
    return std::accumulate(eh_s.begin(), eh_s.end(), 0.0) +
           std::accumulate(eh_n.begin(), eh_n.end(), 0.0);
}

double apply_sinr_cap(double sinr, const ScenarioConfig& cfg) {
    return std::min(sinr, cfg.sinr_cap());
}

double h2h_interference(int h, const Allocation& alloc, const ChannelState& ch,
                        const Topology& topo, const ScenarioConfig& cfg) {
    (void)cfg;
    const int k = topo.band_of_hue(h);
    double acc = 0.0;
    for (int n = 0; n < topo.num_tmtcd(); ++n) {
        if (alloc.tm[n].band != k) continue;
        acc += alloc.tm[n].power_w * ch.g_at(topo.tx_mtcg(topo.tmtcd_cluster[n]), topo.rx_hue(h), k);
    }
    return acc;
}

double h2h_sinr(int h, const Allocation& alloc, const ChannelState& ch,
                const Topology& topo, const ScenarioConfig& cfg) {
    const int k = topo.band_of_hue(h);
    const double signal = cfg.p_bs_w() * ch.g_at(topo.tx_bs(), topo.rx_hue(h), k);
    const double inter = h2h_interference(h, alloc, ch, topo, cfg);
    return apply_sinr_cap(signal / (inter + cfg.noise_power_w()), cfg);
}

double cmtcd_interference(int s, const Allocation& alloc, const ChannelState& ch,
                          const Topology& topo, const ScenarioConfig& cfg) {
    (void)cfg;
    const int k = topo.band_of_cmtcd(s);
    double acc = 0.0;
    for (int n = 0; n < topo.num_tmtcd(); ++n) {
        if (alloc.tm[n].band != k) continue;
        // intra- and inter-cluster terms share one form: transmitting gateway
        // of link n into receiver s on band k
        acc += alloc.tm[n].power_w *
               ch.g_at(topo.tx_mtcg(topo.tmtcd_cluster[n]), topo.rx_cmtcd(s), k);
    }
    return acc;
}

double cmtcd_sinr(int s, const Allocation& alloc, const ChannelState& ch,
                  const Topology& topo, const ScenarioConfig& cfg) {
    const int k = topo.band_of_cmtcd(s);
    const double rho = alloc.cmtcd_ps_ratio;
    const double signal =
        rho * cfg.p_cmtcd_w() * ch.g_at(topo.tx_mtcg(topo.cmtcd_cluster[s]), topo.rx_cmtcd(s), k);
    const double inter = cmtcd_interference(s, alloc, ch, topo, cfg);
    return apply_sinr_cap(signal / (rho * inter + cfg.noise_power_w()), cfg);
}

double tmtcd_interference(int n, int k, const Allocation& alloc, const ChannelState& ch,
                          const Topology& topo, const ScenarioConfig& cfg) {
    const int m = topo.tmtcd_cluster[n];
    const int rx = topo.rx_tmtcd(n);
    double acc = 0.0;
    if (topo.band_owned_by_hue(k)) {
        // band preassigned to an H2H link: primary co-band term is the own
        // cluster's critical transmission as received over the own gateway
        // channel (kept exactly as the model states it)
        for (int s = 0; s < topo.num_cmtcd(); ++s) {
            if (topo.cmtcd_cluster[s] != m) continue;
            acc += cfg.p_cmtcd_w() * ch.g_at(topo.tx_mtcg(m), rx, k);
        }
    } else {
        // band preassigned to a critical link: primary co-band term is the
        // base station's downlink signal
        acc += cfg.p_bs_w() * ch.g_at(topo.tx_bs(), rx, k);
    }
    for (int n2 = 0; n2 < topo.num_tmtcd(); ++n2) {
        if (n2 == n || alloc.tm[n2].band != k) continue;
        acc += alloc.tm[n2].power_w * ch.g_at(topo.tx_mtcg(topo.tmtcd_cluster[n2]), rx, k);
    }
    return acc;
}

double tmtcd_sinr(int n, const Allocation& alloc, const ChannelState& ch,
                  const Topology& topo, const ScenarioConfig& cfg) {
    const TmtcdAllocation& a = alloc.tm[n];
    const double signal =
        a.ps_ratio * a.power_w * ch.g_at(topo.tx_mtcg(topo.tmtcd_cluster[n]), topo.rx_tmtcd(n), a.band);
    const double inter = tmtcd_interference(n, a.band, alloc, ch, topo, cfg);
    return apply_sinr_cap(signal / (a.ps_ratio * inter + cfg.noise_power_w()), cfg);
}

double harvested_power(MtcdId d, const Allocation& alloc, const ChannelState& ch,
                       const Topology& topo, const ScenarioConfig& cfg) {
    double rho, signal, inter;
    if (d.critical) {
        const int s = d.index;
        const int k = topo.band_of_cmtcd(s);
        rho = alloc.cmtcd_ps_ratio;
        signal = cfg.p_cmtcd_w() * ch.g_at(topo.tx_mtcg(topo.cmtcd_cluster[s]), topo.rx_cmtcd(s), k);
        inter = cmtcd_interference(s, alloc, ch, topo, cfg);
    } else {
        const int n = d.index;
        const TmtcdAllocation& a = alloc.tm[n];
        rho = a.ps_ratio;
        signal = a.power_w * ch.g_at(topo.tx_mtcg(topo.tmtcd_cluster[n]), topo.rx_tmtcd(n), a.band);
        inter = tmtcd_interference(n, a.band, alloc, ch, topo, cfg);
    }
    return cfg.energy_conversion * (1.0 - rho) * (signal + inter);
}

double link_capacity(double sinr, const ScenarioConfig& cfg) {
    if (sinr < 0) throw std::domain_error("link_capacity: negative SINR");
    return cfg.subband_bandwidth_hz() * std::log2(1.0 + sinr);
}

LinkMetrics compute_all_metrics(const Allocation& alloc, const ChannelState& ch,
                                const Topology& topo, const ScenarioConfig& cfg) {
    if (static_cast<int>(alloc.tm.size()) != topo.num_tmtcd())
        throw std::invalid_argument("compute_all_metrics: allocation size mismatch");

    LinkMetrics out;
    out.sinr_h.resize(topo.num_hue());
    out.interference_h.resize(topo.num_hue());
    for (int h = 0; h < topo.num_hue(); ++h) {
        out.interference_h[h] = h2h_interference(h, alloc, ch, topo, cfg);
        const double signal = cfg.p_bs_w() * ch.g_at(topo.tx_bs(), topo.rx_hue(h), topo.band_of_hue(h));
        out.sinr_h[h] =
            apply_sinr_cap(signal / (out.interference_h[h] + cfg.noise_power_w()), cfg);
    }

    out.sinr_s.resize(topo.num_cmtcd());
    out.interference_s.resize(topo.num_cmtcd());
    out.eh_s.resize(topo.num_cmtcd());
    const double rho_s = alloc.cmtcd_ps_ratio;
    for (int s = 0; s < topo.num_cmtcd(); ++s) {
        const int k = topo.band_of_cmtcd(s);
        const double gain = ch.g_at(topo.tx_mtcg(topo.cmtcd_cluster[s]), topo.rx_cmtcd(s), k);
        out.interference_s[s] = cmtcd_interference(s, alloc, ch, topo, cfg);
        out.sinr_s[s] = apply_sinr_cap(
            rho_s * cfg.p_cmtcd_w() * gain / (rho_s * out.interference_s[s] + cfg.noise_power_w()),
            cfg);
        out.eh_s[s] = cfg.energy_conversion * (1.0 - rho_s) *
                      (cfg.p_cmtcd_w() * gain + out.interference_s[s]);
    }

    out.sinr_n.resize(topo.num_tmtcd());
    out.interference_n.resize(topo.num_tmtcd());
    out.eh_n.resize(topo.num_tmtcd());
    out.capacity_n.resize(topo.num_tmtcd());
    for (int n = 0; n < topo.num_tmtcd(); ++n) {
        const TmtcdAllocation& a = alloc.tm[n];
        const double gain = ch.g_at(topo.tx_mtcg(topo.tmtcd_cluster[n]), topo.rx_tmtcd(n), a.band);
        out.interference_n[n] = tmtcd_interference(n, a.band, alloc, ch, topo, cfg);
        out.sinr_n[n] = apply_sinr_cap(
            a.ps_ratio * a.power_w * gain / (a.ps_ratio * out.interference_n[n] + cfg.noise_power_w()),
            cfg);
        out.eh_n[n] = cfg.energy_conversion * (1.0 - a.ps_ratio) *
                      (a.power_w * gain + out.interference_n[n]);
        out.capacity_n[n] = link_capacity(out.sinr_n[n], cfg);
    }
    return out;
}

}  // namespace swiptsim
