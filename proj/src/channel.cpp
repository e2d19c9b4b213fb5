#include "swiptsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "swiptsim/config.hpp"

namespace swiptsim {

double path_loss_db(double distance_km) {
    if (!(distance_km > 0.0))
        throw std::domain_error("path_loss_db: distance must be strictly positive");
    return -128.0 - 37.6 * std::log10(distance_km);
}

double draw_shadowing(Rng& rng) {
    return db_to_linear(8.0 * rng.normal());
}

double draw_fast_fading(Rng& rng) {
    return rng.exponential();
}

LargeScale build_large_scale(const Topology& topo, Rng& rng) {
    LargeScale ls;
    ls.num_tx = topo.num_tx();
    ls.num_rx = topo.num_rx();
    ls.chi.resize(static_cast<std::size_t>(ls.num_tx) * ls.num_rx);
    ls.beta.resize(ls.chi.size());
    for (int tx = 0; tx < ls.num_tx; ++tx) {
        const Point tp = topo.tx_position(tx);
        for (int rx = 0; rx < ls.num_rx; ++rx) {
            const double d_km = distance_m(tp, topo.rx_position(rx)) / 1000.0;
            ls.chi[tx * ls.num_rx + rx] = db_to_linear(path_loss_db(d_km));
            ls.beta[tx * ls.num_rx + rx] = draw_shadowing(rng);
        }
    }
    return ls;
}

ChannelState make_channel_state(const Topology& topo) {
    ChannelState st;
    st.num_tx = topo.num_tx();
    st.num_rx = topo.num_rx();
    st.num_bands = topo.num_subbands;
    st.h.assign(static_cast<std::size_t>(st.num_tx) * st.num_rx * st.num_bands, 0.0);
    st.g = st.h;
    return st;
}

void update_small_scale(ChannelState& state, const LargeScale& large, Rng& rng) {
    if (state.num_tx != large.num_tx || state.num_rx != large.num_rx)
        throw std::invalid_argument("update_small_scale: mismatched link sets");
    std::size_t idx = 0;
    for (int tx = 0; tx < state.num_tx; ++tx) {
        for (int rx = 0; rx < state.num_rx; ++rx) {
            const double cb = large.chibeta(tx, rx);
            for (int k = 0; k < state.num_bands; ++k, ++idx) {
                const double h = draw_fast_fading(rng);
                state.h[idx] = h;
                state.g[idx] = cb * h;
            }
        }
    }
}

}  // namespace swiptsim
