#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cfmimo/rng.hpp"

namespace cfmimo::channel {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class FadingModel { Rician, Rayleigh, External };

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// AP/UE layout for one deployment. Distances and angles of arrival are
/// derived from these coordinates.
struct NetworkGeometry {
    std::vector<Position> ap_positions;
    std::vector<Position> ue_positions;
    std::vector<double> ap_broadside_angles;  // radians, one per AP
    double area_width = 97.0;                 // meters
    double area_height = 36.0;

    int num_aps() const { return static_cast<int>(ap_positions.size()); }
    int num_ues() const { return static_cast<int>(ue_positions.size()); }
    void validate() const;  // throws std::invalid_argument
};

struct ChannelParams {
    double carrier_frequency = 3.5e9;  // Hz
    double antenna_spacing = -1.0;     // meters; negative means lambda/2
    int antennas_per_ap = 16;
    int multipath_clusters = 6;
    double asd = 10.0 * M_PI / 180.0;  // angular standard deviation, radians
    double d_max_los = 30.0;           // meters
    double shadowing_sigma_los = 4.0;  // dB
    double shadowing_sigma_nlos = 10.0;
    FadingModel fading_model = FadingModel::Rician;

    double wavelength() const { return 299792458.0 / carrier_frequency; }
    double spacing_over_lambda() const {
        return antenna_spacing < 0.0 ? 0.5 : antenna_spacing / wavelength();
    }
    void validate() const;
};

/// One realization of all UE-AP channel vectors. csi_channels equals
/// true_channels under perfect CSI. Immutable after construction by
/// convention; safe to share read-only across workers.
struct ChannelRealization {
    int K = 0;
    int M = 0;
    int N = 0;
    std::vector<CVector> true_channels;  // index k * M + m
    std::vector<CVector> csi_channels;
    std::vector<double> rician_factors;  // linear scale; NaN when unknown
    std::vector<double> pathloss;        // linear scale; NaN when unknown

    const CVector& h(int k, int m) const { return true_channels[static_cast<size_t>(k) * M + m]; }
    const CVector& h_csi(int k, int m) const { return csi_channels[static_cast<size_t>(k) * M + m]; }
};

/// Large-scale and spatial-correlation state of a deployment: shadowing, LoS
/// indicators, pathloss, Rician factors and covariance square roots. Computed
/// once per deployment; small-scale fading is redrawn per run from it.
struct ChannelStatistics {
    int K = 0;
    int M = 0;
    int N = 0;
    FadingModel fading_model = FadingModel::Rician;
    std::vector<double> pathloss;        // linear, k * M + m
    std::vector<double> rician_factors;  // linear
    std::vector<CVector> los_response;   // steering vector per pair
    std::vector<CMatrix> corr_sqrt;      // R^{1/2} per pair
};

double los_probability(double d, double d_max_los);
double pathloss_db(double d, bool los, double shadowing_db);
double rician_factor_db(double d);

CVector los_steering_vector(double phi, int n_antennas, double spacing_over_lambda);

/// Spatial covariance from a set of nominal cluster angles; Hermitian with
/// unit diagonal.
CMatrix covariance_matrix(const std::vector<double>& nominal_aoas, double asd,
                          int n_antennas, double spacing_over_lambda);

ChannelStatistics compute_statistics(const ChannelParams& params,
                                     const NetworkGeometry& geometry, Rng& rng);

ChannelRealization draw_fading(const ChannelStatistics& stats, Rng& rng);

/// Convenience one-shot draw: statistics plus fading from a single stream.
ChannelRealization draw_channel(const ChannelParams& params,
                                const NetworkGeometry& geometry, Rng& rng);

/// Adds an estimation-error term to the CSI copy. nmse_db == nullopt means
/// perfect CSI (csi = true channels exactly).
ChannelRealization perturb_csi(const ChannelRealization& ch,
                               std::optional<double> nmse_db, Rng& rng);

/// Text channel-import format: header line "K,M,N", then one record per pair:
/// "k,m,re0,im0,...". Round-trips bit-exactly.
ChannelRealization load_external_channels(const std::string& path, int n_antennas,
                                          int n_ues, int n_aps);
ChannelRealization load_external_channels(const std::string& path);
void export_channels(const ChannelRealization& ch, const std::string& path);

}  // namespace cfmimo::channel
