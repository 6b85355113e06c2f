#include "risce/channel_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "risce/errors.hpp"

namespace risce {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix phase_ramp(int n, double phase_step) {
    CMatrix v(n, 1);
    for (int p = 0; p < n; ++p) v(p, 0) = std::polar(1.0, phase_step * p);
    return v;
}

std::vector<PathParams> draw_paths(int count, bool needs_ap, bool needs_ris, Rng& geometry, Rng& fading) {
    std::uniform_real_distribution<double> quarter(0.0, kPi / 2.0);
    std::uniform_real_distribution<double> half(0.0, kPi);
    std::vector<PathParams> paths(static_cast<std::size_t>(count));
    for (auto& p : paths) {
        if (needs_ap) p.ap_angle = quarter(geometry);
        if (needs_ris) {
            p.ris_elevation = quarter(geometry);
            p.ris_azimuth = half(geometry);
        }
        p.gain = complex_normal(fading);
    }
    return paths;
}

}  // namespace

Link link_from_name(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s == "AR") return Link::ap_ris;
    if (s == "UR") return Link::ue_ris;
    if (s == "UA") return Link::ue_ap;
    throw ConfigError("link", "unknown link id '" + std::string(name) + "' (expected AR, UR or UA)");
}

const LinkGeometry& ChannelModelConfig::geometry(Link link) const {
    switch (link) {
        case Link::ap_ris: return ap_ris;
        case Link::ue_ris: return ue_ris;
        case Link::ue_ap: return ue_ap;
    }
    throw ConfigError("link", "unknown link id");
}

void ChannelModelConfig::validate(int ris_elements) const {
    if (num_paths < 1) throw ConfigError("num_paths", "must be >= 1");
    if (!(spacing_ratio > 0.0)) throw ConfigError("spacing_ratio", "must be > 0");
    if (!(ref_distance_m > 0.0)) throw ConfigError("ref_distance", "must be > 0");
    const std::pair<const char*, const LinkGeometry*> links[] = {
        {"AR", &ap_ris}, {"UR", &ue_ris}, {"UA", &ue_ap}};
    for (const auto& [name, g] : links) {
        if (!(g->distance_m > 0.0)) throw ConfigError(std::string(name) + ".distance", "must be > 0");
        if (!(g->exponent > 0.0)) throw ConfigError(std::string(name) + ".exponent", "must be > 0");
    }
    if (ris_rows < 1 || ris_cols < 1) throw ConfigError("ris_grid", "rows and cols must be >= 1");
    if (ris_rows * ris_cols != ris_elements) {
        throw ConfigError("ris_grid", "rows*cols = " + std::to_string(ris_rows * ris_cols) + " but N = " +
                                          std::to_string(ris_elements));
    }
}

double pathloss_db(const ChannelModelConfig& cfg, Link link) {
    const auto& g = cfg.geometry(link);
    return cfg.pathloss_ref_db - 10.0 * g.exponent * std::log10(g.distance_m / cfg.ref_distance_m);
}

double pathloss(const ChannelModelConfig& cfg, Link link) { return std::pow(10.0, pathloss_db(cfg, link) / 10.0); }

CMatrix steer_ula(int m, double theta, double spacing_ratio) {
    if (m < 1) throw ShapeError("steer_ula: m must be >= 1");
    return phase_ramp(m, 2.0 * kPi * spacing_ratio * std::sin(theta));
}

CMatrix steer_ura(int rows, int cols, double theta, double psi, double spacing_ratio) {
    if (rows < 1 || cols < 1) throw ShapeError("steer_ura: grid must be at least 1x1");
    const double k = 2.0 * kPi * spacing_ratio * std::sin(theta);
    const CMatrix a_y = phase_ramp(rows, k * std::sin(psi));
    const CMatrix a_x = phase_ramp(cols, k * std::cos(psi));
    return kronecker(a_y, a_x);
}

CMatrix compose_ris_ap(const ChannelModelConfig& cfg, int m, const std::vector<PathParams>& paths) {
    const int n = cfg.ris_rows * cfg.ris_cols;
    CMatrix h = CMatrix::Zero(m, n);
    for (const auto& p : paths) {
        h += p.gain * steer_ula(m, p.ap_angle, cfg.spacing_ratio) *
             steer_ura(cfg.ris_rows, cfg.ris_cols, p.ris_elevation, p.ris_azimuth, cfg.spacing_ratio).adjoint();
    }
    return std::sqrt(pathloss(cfg, Link::ap_ris)) * h;
}

CMatrix compose_ue_ris(const ChannelModelConfig& cfg, const std::vector<PathParams>& paths) {
    CMatrix h = CMatrix::Zero(cfg.ris_rows * cfg.ris_cols, 1);
    for (const auto& p : paths) {
        h += p.gain * steer_ura(cfg.ris_rows, cfg.ris_cols, p.ris_elevation, p.ris_azimuth, cfg.spacing_ratio);
    }
    return std::sqrt(pathloss(cfg, Link::ue_ris)) * h;
}

CMatrix compose_ue_ap(const ChannelModelConfig& cfg, int m, const std::vector<PathParams>& paths) {
    CMatrix h = CMatrix::Zero(m, 1);
    for (const auto& p : paths) h += p.gain * steer_ula(m, p.ap_angle, cfg.spacing_ratio);
    return std::sqrt(pathloss(cfg, Link::ue_ap)) * h;
}

ChannelSet draw_channels(const ChannelModelConfig& cfg, const SystemConfig& sys, Rng& geometry, Rng& fading) {
    cfg.validate(sys.N);
    ChannelSet out;
    out.h_ra = compose_ris_ap(cfg, sys.M, draw_paths(cfg.num_paths, true, true, geometry, fading));
    out.h_ur.resize(sys.N, sys.K);
    out.h_ua.resize(sys.M, sys.K);
    for (int k = 0; k < sys.K; ++k) {
        out.h_ur.col(k) = compose_ue_ris(cfg, draw_paths(cfg.num_paths, false, true, geometry, fading));
    }
    for (int k = 0; k < sys.K; ++k) {
        out.h_ua.col(k) = compose_ue_ap(cfg, sys.M, draw_paths(cfg.num_paths, true, false, geometry, fading));
    }
    return out;
}

ChannelSet draw_channels(const ChannelModelConfig& cfg, const SystemConfig& sys, Rng& rng) {
    return draw_channels(cfg, sys, rng, rng);
}

}  // namespace risce
