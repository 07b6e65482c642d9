#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfmimo/baselines.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/power.hpp"
#include "cfmimo/radio.hpp"
#include "cfmimo/social.hpp"

namespace cfmimo::harness {

enum class Algorithm { EA, DA, BC, CS, MD, WOA };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Error thrown for malformed configuration input; maps to exit code 2 in
/// the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulationConfig {
    channel::ChannelParams channel;
    radio::RadioConfig radio;
    power::PowerModelParams power;
    baselines::WoaConfig woa;

    int num_aps = 15;
    int num_ues = 30;
    double area_width = 97.0;
    double area_height = 36.0;
    std::vector<channel::Position> ap_positions;  // empty: uniform grid default

    /// Per-UE traffic intensities, Mb/s; one is drawn uniformly per UE, then
    /// the request is Poisson around it (zero resampled).
    std::vector<double> request_intensities_mbps = {100.0, 300.0, 500.0};

    int mc_deployments = 20;       // desk scale; --paper-scale restores 100
    int runs_per_deployment = 5;   // desk scale; --paper-scale restores 100

    double alpha = -1.0;           // negative: use preset
    double beta = -1.0;
    std::string sociality_preset = "egalitarian";  // selfish|egalitarian|altruistic

    std::optional<double> nmse_db;        // nullopt: perfect CSI
    std::optional<bool> enable_swap;      // nullopt: auto (off for K >= 20)
    std::string channel_file;             // non-empty: external channel import

    std::uint64_t master_seed = 1;

    social::SocialityConfig sociality() const;
    bool swap_enabled() const;
    void validate() const;  // throws ConfigError
};

/// Key-value config file: one `key = value` per line, '#' comments.
SimulationConfig load_config(const std::string& path);
void apply_override(SimulationConfig& config, const std::string& key,
                    const std::string& value);

}  // namespace cfmimo::harness
