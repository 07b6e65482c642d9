#include "cfmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cfmimo::harness {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::EA: return "EA";
        case Algorithm::DA: return "DA";
        case Algorithm::BC: return "BC";
        case Algorithm::CS: return "CS";
        case Algorithm::MD: return "MD";
        case Algorithm::WOA: return "WOA";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), ::toupper);
    if (up == "EA") return Algorithm::EA;
    if (up == "DA") return Algorithm::DA;
    if (up == "BC") return Algorithm::BC;
    if (up == "CS") return Algorithm::CS;
    if (up == "MD") return Algorithm::MD;
    if (up == "WOA") return Algorithm::WOA;
    throw ConfigError("unknown algorithm: " + name);
}

social::SocialityConfig SimulationConfig::sociality() const {
    if (alpha >= 0.0 || beta >= 0.0) {
        if (alpha < 0.0 || beta < 0.0)
            throw ConfigError("set both alpha and beta, or neither");
        return {alpha, beta};
    }
    if (sociality_preset == "selfish") return social::SocialityConfig::selfish();
    if (sociality_preset == "egalitarian")
        return social::SocialityConfig::egalitarian(num_ues);
    if (sociality_preset == "altruistic") return social::SocialityConfig::altruistic();
    throw ConfigError("unknown sociality preset: " + sociality_preset);
}

bool SimulationConfig::swap_enabled() const {
    if (enable_swap) return *enable_swap;
    return num_ues < 20;
}

void SimulationConfig::validate() const {
    try {
        channel.validate();
        radio.validate();
        power.validate();
        sociality().validate();
        if (!channel_file.empty() && channel.fading_model != channel::FadingModel::External)
            throw ConfigError("channel_file requires fading_model = external");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (num_aps < 1 || num_ues < 1) throw ConfigError("need at least one AP and one UE");
    if (mc_deployments < 1 || runs_per_deployment < 1)
        throw ConfigError("Monte-Carlo counts must be >= 1");
    if (request_intensities_mbps.empty()) throw ConfigError("no request intensities");
    for (double v : request_intensities_mbps)
        if (v <= 0.0) throw ConfigError("request intensities must be > 0");
    if (!ap_positions.empty() && static_cast<int>(ap_positions.size()) != num_aps)
        throw ConfigError("ap_positions count != num_aps");
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("expected integer for " + key);
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("bad boolean for " + key + ": " + value);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream is(value);
    std::string item;
    while (std::getline(is, item, ','))
        out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_override(SimulationConfig& c, const std::string& key, const std::string& value) {
    if (key == "carrier_frequency") c.channel.carrier_frequency = parse_double(key, value);
    else if (key == "antenna_spacing") c.channel.antenna_spacing = parse_double(key, value);
    else if (key == "antennas_per_ap") c.channel.antennas_per_ap = parse_int(key, value);
    else if (key == "multipath_clusters") c.channel.multipath_clusters = parse_int(key, value);
    else if (key == "asd_deg") c.channel.asd = parse_double(key, value) * M_PI / 180.0;
    else if (key == "d_max_los") c.channel.d_max_los = parse_double(key, value);
    else if (key == "shadowing_sigma_los") c.channel.shadowing_sigma_los = parse_double(key, value);
    else if (key == "shadowing_sigma_nlos") c.channel.shadowing_sigma_nlos = parse_double(key, value);
    else if (key == "fading_model") {
        if (value == "rician") c.channel.fading_model = channel::FadingModel::Rician;
        else if (value == "rayleigh") c.channel.fading_model = channel::FadingModel::Rayleigh;
        else if (value == "external") c.channel.fading_model = channel::FadingModel::External;
        else throw ConfigError("unknown fading model: " + value);
    }
    else if (key == "bandwidth") c.radio.bandwidth = parse_double(key, value);
    else if (key == "noise_psd_dbm") c.radio.noise_psd_dbm = parse_double(key, value);
    else if (key == "p_max_tx") c.radio.p_max_tx = parse_double(key, value);
    else if (key == "k_max") c.radio.k_max = parse_int(key, value);
    else if (key == "m_max") c.radio.m_max = parse_int(key, value);
    else if (key == "precoder") {
        if (value == "mr") c.radio.precoder = radio::Precoder::MR;
        else if (value == "lpzf") c.radio.precoder = radio::Precoder::LPZF;
        else throw ConfigError("unknown precoder: " + value);
    }
    else if (key == "p_aau_fix") c.power.p_aau_fix = parse_double(key, value);
    else if (key == "p_fh_fix") c.power.p_fh_fix = parse_double(key, value);
    else if (key == "p_fh_prec") c.power.p_fh_prec = parse_double(key, value);
    else if (key == "p_cpu_fix") c.power.p_cpu_fix = parse_double(key, value);
    else if (key == "p_cpu_enc_w_per_gbps") c.power.p_cpu_enc = parse_double(key, value) * 1e-9;
    else if (key == "pa_efficiency") c.power.pa_efficiency = parse_double(key, value);
    else if (key == "shutdown_fraction") c.power.shutdown_fraction = parse_double(key, value);
    else if (key == "num_aps") c.num_aps = parse_int(key, value);
    else if (key == "num_ues") c.num_ues = parse_int(key, value);
    else if (key == "area_width") c.area_width = parse_double(key, value);
    else if (key == "area_height") c.area_height = parse_double(key, value);
    else if (key == "request_intensities_mbps") c.request_intensities_mbps = parse_list(key, value);
    else if (key == "mc_deployments") c.mc_deployments = parse_int(key, value);
    else if (key == "runs_per_deployment") c.runs_per_deployment = parse_int(key, value);
    else if (key == "alpha") c.alpha = parse_double(key, value);
    else if (key == "beta") c.beta = parse_double(key, value);
    else if (key == "sociality_preset") c.sociality_preset = value;
    else if (key == "nmse_db") {
        if (value == "perfect") c.nmse_db.reset();
        else c.nmse_db = parse_double(key, value);
    }
    else if (key == "enable_swap") c.enable_swap = parse_bool(key, value);
    else if (key == "channel_file") c.channel_file = value;
    else if (key == "master_seed") c.master_seed = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "woa_population") c.woa.population = parse_int(key, value);
    else if (key == "woa_epochs") c.woa.epochs = parse_int(key, value);
    else if (key == "woa_ee_target") c.woa.ee_target = parse_double(key, value);
    else if (key == "woa_feedback") c.woa.feedback = parse_bool(key, value);
    else throw ConfigError("unknown config key: " + key);
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    SimulationConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

}  // namespace cfmimo::harness
