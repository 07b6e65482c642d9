#pragma once

#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/social.hpp"

namespace cfmimo::test {

/// Random but valid geometry inside the stock area, driven by the given rng.
inline channel::NetworkGeometry random_geometry(int n_ues, int n_aps, Rng& rng) {
    channel::NetworkGeometry geo;
    std::uniform_real_distribution<double> ux(0.5, geo.area_width - 0.5);
    std::uniform_real_distribution<double> uy(0.5, geo.area_height - 0.5);
    for (int m = 0; m < n_aps; ++m) geo.ap_positions.push_back({ux(rng), uy(rng)});
    for (int k = 0; k < n_ues; ++k) geo.ue_positions.push_back({ux(rng), uy(rng)});
    return geo;
}

/// Hand-built realization from an explicit norm table, single antenna per AP.
/// Useful when a test needs exact preference orders.
inline channel::ChannelRealization realization_from_norms(
    const std::vector<std::vector<double>>& norms) {
    channel::ChannelRealization ch;
    ch.K = static_cast<int>(norms.size());
    ch.M = static_cast<int>(norms.front().size());
    ch.N = 1;
    for (int k = 0; k < ch.K; ++k)
        for (int m = 0; m < ch.M; ++m) {
            channel::CVector h(1);
            h(0) = norms[k][m];
            ch.true_channels.push_back(h);
        }
    ch.csi_channels = ch.true_channels;
    ch.rician_factors.assign(static_cast<size_t>(ch.K) * ch.M, 0.0);
    ch.pathloss.assign(static_cast<size_t>(ch.K) * ch.M, 1.0);
    return ch;
}

/// Owns the channel realization the context points to.
struct Scenario {
    channel::ChannelRealization channels;
    social::EvaluationContext ctx;
};

inline Scenario random_scenario(int n_ues, int n_aps, Rng& rng, int antennas = 4,
                                double request = 3e8) {
    Scenario s;
    channel::ChannelParams params;
    params.antennas_per_ap = antennas;
    const auto geo = random_geometry(n_ues, n_aps, rng);
    s.channels = channel::draw_channel(params, geo, rng);
    s.ctx.channels = &s.channels;
    s.ctx.requests.assign(n_ues, request);
    s.ctx.sociality = social::SocialityConfig::egalitarian(n_ues);
    return s;
}

}  // namespace cfmimo::test
