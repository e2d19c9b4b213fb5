#pragma once

#include <vector>

#include "swiptsim/rng.hpp"
#include "swiptsim/topology.hpp"

namespace swiptsim {

/// Dense (tx, rx) and (tx, rx, band) tables; small enough that every pair is
/// materialized even where only a subset carries traffic.
struct LargeScale {
    int num_tx = 0;
    int num_rx = 0;
    std::vector<double> chi;   // linear path-loss gain, [tx * num_rx + rx]
    std::vector<double> beta;  // linear shadowing gain

    double chi_at(int tx, int rx) const { return chi[tx * num_rx + rx]; }
    double beta_at(int tx, int rx) const { return beta[tx * num_rx + rx]; }
    double chibeta(int tx, int rx) const { return chi_at(tx, rx) * beta_at(tx, rx); }
};

struct ChannelState {
    int num_tx = 0;
    int num_rx = 0;
    int num_bands = 0;
    std::vector<double> h;  // small-scale power, [(tx * num_rx + rx) * num_bands + k]
    std::vector<double> g;  // total gain chi * beta * h

    double h_at(int tx, int rx, int k) const {
        return h[(tx * num_rx + rx) * num_bands + k];
    }
    double g_at(int tx, int rx, int k) const {
        return g[(tx * num_rx + rx) * num_bands + k];
    }
};

/// -128 - 37.6 log10(d) dB for d in kilometers; throws on d <= 0.
double path_loss_db(double distance_km);

/// Linear log-normal shadowing gain, 0 dB mean and 8 dB standard deviation.
double draw_shadowing(Rng& rng);

/// Small-scale channel power under Rayleigh amplitude fading: unit-mean
/// exponential.
double draw_fast_fading(Rng& rng);

/// Path loss from pairwise distances plus one shadowing draw per link.
LargeScale build_large_scale(const Topology& topo, Rng& rng);

ChannelState make_channel_state(const Topology& topo);

/// Redraws every small-scale coefficient independently per link and band and
/// recomposes g = chi * beta * h.
void update_small_scale(ChannelState& state, const LargeScale& large, Rng& rng);

}  // namespace swiptsim
