#pragma once

// Geometric multipath channels for the AP (ULA), the RIS (URA) and the users.

#include <string_view>
#include <vector>

#include "risce/rng.hpp"
#include "risce/system.hpp"
#include "risce/tensor_core.hpp"

namespace risce {

enum class Link { ap_ris, ue_ris, ue_ap };

/// Parses "AR", "UR" or "UA" (case-insensitive).
Link link_from_name(std::string_view name);

struct LinkGeometry {
    double distance_m;
    double exponent;
};

struct ChannelModelConfig {
    int num_paths = 2;
    double spacing_ratio = 0.5;  ///< element spacing over wavelength
    double pathloss_ref_db = -20.0;
    double ref_distance_m = 1.0;
    LinkGeometry ap_ris{20.0, 2.1};
    LinkGeometry ue_ris{20.0, 4.2};
    LinkGeometry ue_ap{30.0, 2.2};
    int ris_rows = 5;
    int ris_cols = 5;
    /// Keep path angles fixed across Monte Carlo trials; only fading is redrawn.
    bool fixed_geometry = false;

    const LinkGeometry& geometry(Link link) const;
    /// Throws ConfigError; `ris_elements` must equal ris_rows * ris_cols.
    void validate(int ris_elements) const;
};

/// Ground-truth channels: h_ua M x K, h_ra M x N, h_ur N x K.
struct ChannelSet {
    CMatrix h_ua;
    CMatrix h_ra;
    CMatrix h_ur;
};

/// Pathloss in dB: rho0 - 10 alpha log10(d / d0).
double pathloss_db(const ChannelModelConfig& cfg, Link link);
/// Linear power gain 10^(pathloss_db / 10).
double pathloss(const ChannelModelConfig& cfg, Link link);

/// m x 1 ULA response, entry p = exp(i 2 pi spacing p sin(theta)).
CMatrix steer_ula(int m, double theta, double spacing_ratio = 0.5);

/// (rows*cols) x 1 URA response a_y(theta, psi) ⊗ a_x(theta, psi); the
/// horizontal (x) index runs fastest.
CMatrix steer_ura(int rows, int cols, double theta, double psi, double spacing_ratio = 0.5);

/// One propagation path. Unused angles are ignored by the link that consumes
/// the path (e.g. UE-AP paths only use `ap_angle`).
struct PathParams {
    cplx gain;
    double ap_angle = 0.0;
    double ris_elevation = 0.0;
    double ris_azimuth = 0.0;
};

/// sqrt(rho) * sum_i gain_i a_ULA(ap_angle_i) a_URA(elev_i, az_i)^H
CMatrix compose_ris_ap(const ChannelModelConfig& cfg, int m, const std::vector<PathParams>& paths);
/// sqrt(rho) * sum_i gain_i a_URA(elev_i, az_i)
CMatrix compose_ue_ris(const ChannelModelConfig& cfg, const std::vector<PathParams>& paths);
/// sqrt(rho) * sum_i gain_i a_ULA(ap_angle_i)
CMatrix compose_ue_ap(const ChannelModelConfig& cfg, int m, const std::vector<PathParams>& paths);

/// Draws a channel set. Angles come from `geometry`, CN(0,1) path gains from
/// `fading`. AP angles are uniform on [0, pi/2), RIS elevation on [0, pi/2)
/// and RIS azimuth on [0, pi).
ChannelSet draw_channels(const ChannelModelConfig& cfg, const SystemConfig& sys, Rng& geometry, Rng& fading);

/// Same, with a single generator for angles and gains.
ChannelSet draw_channels(const ChannelModelConfig& cfg, const SystemConfig& sys, Rng& rng);

}  // namespace risce
