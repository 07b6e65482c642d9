#include "cfmimo/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cfmimo::channel {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Standard circular complex Gaussian vector, unit variance per entry.
CVector draw_cscg(int n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
    CVector z(n);
    for (int i = 0; i < n; ++i) {
        double re = normal(rng);
        double im = normal(rng);
        z(i) = Complex(re, im);
    }
    return z;
}

}  // namespace

void NetworkGeometry::validate() const {
    if (ap_positions.empty()) throw std::invalid_argument("geometry: need at least one AP");
    if (ue_positions.empty()) throw std::invalid_argument("geometry: need at least one UE");
    if (!ap_broadside_angles.empty() &&
        ap_broadside_angles.size() != ap_positions.size())
        throw std::invalid_argument("geometry: broadside angle count != AP count");
    auto inside = [&](const Position& p) {
        return p.x >= 0.0 && p.x <= area_width && p.y >= 0.0 && p.y <= area_height;
    };
    for (const auto& p : ap_positions)
        if (!inside(p)) throw std::invalid_argument("geometry: AP outside area");
    for (const auto& p : ue_positions)
        if (!inside(p)) throw std::invalid_argument("geometry: UE outside area");
}

void ChannelParams::validate() const {
    if (carrier_frequency <= 0.0) throw std::invalid_argument("channel: carrier frequency must be > 0");
    if (antennas_per_ap < 1) throw std::invalid_argument("channel: need at least one antenna");
    if (multipath_clusters < 1) throw std::invalid_argument("channel: need at least one multipath cluster");
    if (asd < 0.0) throw std::invalid_argument("channel: ASD must be >= 0");
    if (d_max_los <= 0.0) throw std::invalid_argument("channel: d_max_los must be > 0");
    if (spacing_over_lambda() <= 0.0) throw std::invalid_argument("channel: antenna spacing must be > 0");
}

double los_probability(double d, double d_max_los) {
    if (d < 0.0) throw std::invalid_argument("los_probability: negative distance");
    if (d_max_los <= 0.0) throw std::invalid_argument("los_probability: d_max_los must be > 0");
    if (d > d_max_los) return 0.0;
    return (d_max_los - d) / d_max_los;
}

double pathloss_db(double d, bool los, double shadowing_db) {
    if (d <= 0.0) throw std::invalid_argument("pathloss_db: distance must be > 0");
    if (los) return -30.18 - 26.0 * std::log10(d) + shadowing_db;
    return -34.53 - 38.0 * std::log10(d) + shadowing_db;
}

double rician_factor_db(double d) { return 13.0 - 0.03 * d; }

CVector los_steering_vector(double phi, int n_antennas, double spacing_over_lambda) {
    if (n_antennas < 1) throw std::invalid_argument("los_steering_vector: need at least one antenna");
    CVector a(n_antennas);
    const double phase_step = 2.0 * M_PI * spacing_over_lambda * std::sin(phi);
    for (int n = 0; n < n_antennas; ++n)
        a(n) = std::polar(1.0, phase_step * n);
    return a;
}

CMatrix covariance_matrix(const std::vector<double>& nominal_aoas, double asd,
                          int n_antennas, double spacing_over_lambda) {
    if (nominal_aoas.empty()) throw std::invalid_argument("covariance_matrix: empty AoA list");
    const int np = static_cast<int>(nominal_aoas.size());
    CMatrix r = CMatrix::Zero(n_antennas, n_antennas);
    for (int l = 0; l < n_antennas; ++l) {
        for (int i = 0; i < n_antennas; ++i) {
            const double delta = 2.0 * M_PI * spacing_over_lambda * (l - i);
            Complex sum = 0.0;
            for (int n = 0; n < np; ++n) {
                const double phi = nominal_aoas[n];
                const double damp = delta * std::cos(phi);
                sum += std::polar(1.0, delta * std::sin(phi)) *
                       std::exp(-0.5 * asd * asd * damp * damp);
            }
            r(l, i) = sum / static_cast<double>(np);
        }
    }
    return r;
}

namespace {

/// PSD square root with negative eigenvalues clipped to zero; the covariance
/// approximation can be marginally indefinite in finite precision.
CMatrix psd_sqrt(const CMatrix& r) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
    Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
           eig.eigenvectors().adjoint();
}

}  // namespace

ChannelStatistics compute_statistics(const ChannelParams& params,
                                     const NetworkGeometry& geometry, Rng& rng) {
    params.validate();
    geometry.validate();
    const int K = geometry.num_ues();
    const int M = geometry.num_aps();
    const int N = params.antennas_per_ap;
    const double dol = params.spacing_over_lambda();

    ChannelStatistics stats;
    stats.K = K;
    stats.M = M;
    stats.N = N;
    stats.fading_model = params.fading_model;
    stats.pathloss.resize(static_cast<size_t>(K) * M);
    stats.rician_factors.resize(static_cast<size_t>(K) * M);
    stats.los_response.resize(static_cast<size_t>(K) * M);
    stats.corr_sqrt.resize(static_cast<size_t>(K) * M);

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> stdnorm(0.0, 1.0);
    const double aoa_spread = 40.0 * M_PI / 180.0;

    for (int k = 0; k < K; ++k) {
        for (int m = 0; m < M; ++m) {
            const size_t idx = static_cast<size_t>(k) * M + m;
            const double dx = geometry.ue_positions[k].x - geometry.ap_positions[m].x;
            const double dy = geometry.ue_positions[k].y - geometry.ap_positions[m].y;
            const double d = std::hypot(dx, dy);
            if (d == 0.0) throw std::invalid_argument("compute_statistics: co-located AP and UE");
            const double broadside = geometry.ap_broadside_angles.empty()
                                         ? 0.0
                                         : geometry.ap_broadside_angles[m];
            const double phi = std::atan2(dy, dx) - broadside;

            bool los = false;
            if (params.fading_model == FadingModel::Rician)
                los = uni(rng) < los_probability(d, params.d_max_los);
            const double sigma_s = los ? params.shadowing_sigma_los : params.shadowing_sigma_nlos;
            const double shadowing = sigma_s * stdnorm(rng);
            stats.pathloss[idx] = db_to_linear(pathloss_db(d, los, shadowing));
            stats.rician_factors[idx] = los ? db_to_linear(rician_factor_db(d)) : 0.0;
            stats.los_response[idx] = los_steering_vector(phi, N, dol);

            std::vector<double> aoas(params.multipath_clusters);
            for (double& a : aoas)
                a = phi - aoa_spread + 2.0 * aoa_spread * uni(rng);
            stats.corr_sqrt[idx] = psd_sqrt(covariance_matrix(aoas, params.asd, N, dol));
        }
    }
    return stats;
}

ChannelRealization draw_fading(const ChannelStatistics& stats, Rng& rng) {
    ChannelRealization ch;
    ch.K = stats.K;
    ch.M = stats.M;
    ch.N = stats.N;
    const size_t pairs = static_cast<size_t>(stats.K) * stats.M;
    ch.true_channels.resize(pairs);
    ch.rician_factors = stats.rician_factors;
    ch.pathloss = stats.pathloss;

    for (size_t idx = 0; idx < pairs; ++idx) {
        const double g = stats.pathloss[idx];
        const double kappa = stats.rician_factors[idx];
        CVector z = draw_cscg(stats.N, rng);
        CVector h = std::sqrt(kappa) * stats.los_response[idx] + stats.corr_sqrt[idx] * z;
        ch.true_channels[idx] = std::sqrt(g / (kappa + 1.0)) * h;
    }
    ch.csi_channels = ch.true_channels;
    return ch;
}

ChannelRealization draw_channel(const ChannelParams& params,
                                const NetworkGeometry& geometry, Rng& rng) {
    ChannelStatistics stats = compute_statistics(params, geometry, rng);
    return draw_fading(stats, rng);
}

ChannelRealization perturb_csi(const ChannelRealization& ch,
                               std::optional<double> nmse_db, Rng& rng) {
    ChannelRealization out = ch;
    if (!nmse_db) {
        out.csi_channels = out.true_channels;
        return out;
    }
    const double nmse = db_to_linear(*nmse_db);
    for (size_t idx = 0; idx < out.true_channels.size(); ++idx) {
        const CVector& h = out.true_channels[idx];
        const double per_antenna = nmse * h.squaredNorm() / ch.N;
        out.csi_channels[idx] = h + std::sqrt(per_antenna) * draw_cscg(ch.N, rng);
    }
    return out;
}

ChannelRealization load_external_channels(const std::string& path) {
    return load_external_channels(path, -1, -1, -1);
}

ChannelRealization load_external_channels(const std::string& path, int n_antennas,
                                          int n_ues, int n_aps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel file: " + path);

    auto parse_error = [&](int line, const std::string& what) {
        std::ostringstream os;
        os << path << ":" << line << ": " << what;
        return std::runtime_error(os.str());
    };

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw parse_error(1, "empty file");
    ++lineno;
    int K = 0, M = 0, N = 0;
    {
        char sep1 = 0, sep2 = 0;
        std::istringstream hs(line);
        if (!(hs >> K >> sep1 >> M >> sep2 >> N) || sep1 != ',' || sep2 != ',')
            throw parse_error(lineno, "malformed header, expected K,M,N");
    }
    if (K < 1 || M < 1 || N < 1) throw parse_error(lineno, "non-positive dimension");
    if ((n_ues > 0 && n_ues != K) || (n_aps > 0 && n_aps != M) ||
        (n_antennas > 0 && n_antennas != N))
        throw parse_error(lineno, "dimension mismatch with declared K/M/N");

    ChannelRealization ch;
    ch.K = K;
    ch.M = M;
    ch.N = N;
    const size_t pairs = static_cast<size_t>(K) * M;
    ch.true_channels.assign(pairs, CVector());
    ch.rician_factors.assign(pairs, kNan);
    ch.pathloss.assign(pairs, kNan);

    size_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::string field;
        auto next = [&](double& value) {
            if (!std::getline(rs, field, ',')) throw parse_error(lineno, "truncated record");
            try {
                size_t pos = 0;
                value = std::stod(field, &pos);
                if (pos != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw parse_error(lineno, "bad number '" + field + "'");
            }
        };
        double kd = 0.0, md = 0.0;
        next(kd);
        next(md);
        const int k = static_cast<int>(kd);
        const int m = static_cast<int>(md);
        if (k < 0 || k >= K || m < 0 || m >= M)
            throw parse_error(lineno, "pair index out of range");
        CVector h(N);
        for (int n = 0; n < N; ++n) {
            double re = 0.0, im = 0.0;
            next(re);
            next(im);
            h(n) = Complex(re, im);
        }
        if (std::getline(rs, field, ',')) throw parse_error(lineno, "trailing fields");
        ch.true_channels[static_cast<size_t>(k) * M + m] = h;
        ++seen;
    }
    if (seen != pairs) throw std::runtime_error(path + ": missing channel records");
    ch.csi_channels = ch.true_channels;
    return ch;
}

void export_channels(const ChannelRealization& ch, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write channel file: " + path);
    out << ch.K << "," << ch.M << "," << ch.N << "\n";
    char buf[64];
    for (int k = 0; k < ch.K; ++k) {
        for (int m = 0; m < ch.M; ++m) {
            out << k << "," << m;
            const CVector& h = ch.h(k, m);
            for (int n = 0; n < ch.N; ++n) {
                std::snprintf(buf, sizeof buf, ",%.17g,%.17g", h(n).real(), h(n).imag());
                out << buf;
            }
            out << "\n";
        }
    }
}

}  // namespace cfmimo::channel
