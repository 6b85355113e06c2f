#include "risce/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "risce/errors.hpp"

namespace risce {

namespace {

std::string at_line(const YAML::Node& n) { return "line " + std::to_string(n.Mark().line + 1); }

void require_map(const YAML::Node& n, const std::string& field) {
    if (!n.IsMap()) throw ConfigError(field, at_line(n) + ": expected a mapping");
}

void reject_unknown(const YAML::Node& n, const std::string& prefix, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!keys.contains(key)) throw ConfigError(prefix + key, at_line(kv.first) + ": unknown key");
    }
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& prefix) {
    const YAML::Node n = parent[key];
    if (!n) return;
    try {
        out = n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(prefix + key, at_line(n) + ": cannot convert value '" + YAML::Dump(n) + "'");
    }
}

void read_link(const YAML::Node& links, const char* name, LinkGeometry& g) {
    const YAML::Node n = links[name];
    if (!n) return;
    const std::string prefix = std::string("channel.links.") + name + ".";
    require_map(n, prefix.substr(0, prefix.size() - 1));
    reject_unknown(n, prefix, {"distance", "exponent"});
    read(n, "distance", g.distance_m, prefix);
    read(n, "exponent", g.exponent, prefix);
}

ExperimentConfig from_yaml(const YAML::Node& root) {
    ExperimentConfig cfg;
    if (!root || root.IsNull()) {
        cfg.validate();
        return cfg;
    }
    require_map(root, "");
    reject_unknown(root, "", {"system", "channel", "estimator", "experiment"});

    if (const YAML::Node s = root["system"]; s && !s.IsNull()) {
        require_map(s, "system");
        reject_unknown(s, "system.", {"M", "K", "N", "L", "L_off", "noise_power"});
        auto& sys = cfg.system;
        read(s, "M", sys.M, "");
        read(s, "K", sys.K, "");
        read(s, "N", sys.N, "");
        read(s, "L", sys.L, "");
        read(s, "L_off", sys.L_off, "");
        read(s, "noise_power", sys.noise_power, "");
    }
    if (const YAML::Node c = root["channel"]; c && !c.IsNull()) {
        require_map(c, "channel");
        reject_unknown(c, "channel.",
                       {"num_paths", "spacing_ratio", "pathloss_ref_db", "ref_distance", "ris_rows", "ris_cols",
                        "fixed_geometry", "links"});
        auto& ch = cfg.channel;
        read(c, "num_paths", ch.num_paths, "channel.");
        read(c, "spacing_ratio", ch.spacing_ratio, "channel.");
        read(c, "pathloss_ref_db", ch.pathloss_ref_db, "channel.");
        read(c, "ref_distance", ch.ref_distance_m, "channel.");
        read(c, "ris_rows", ch.ris_rows, "channel.");
        read(c, "ris_cols", ch.ris_cols, "channel.");
        read(c, "fixed_geometry", ch.fixed_geometry, "channel.");
        if (const YAML::Node links = c["links"]; links) {
            require_map(links, "channel.links");
            reject_unknown(links, "channel.links.", {"AR", "UR", "UA"});
            read_link(links, "AR", ch.ap_ris);
            read_link(links, "UR", ch.ue_ris);
            read_link(links, "UA", ch.ue_ap);
        }
    }
    if (const YAML::Node e = root["estimator"]; e && !e.IsNull()) {
        require_map(e, "estimator");
        reject_unknown(e, "estimator.", {"max_iters", "conv_threshold", "pinv_tol", "init_seed"});
        auto& est = cfg.estimator;
        read(e, "max_iters", est.max_iters, "estimator.");
        read(e, "conv_threshold", est.conv_threshold, "estimator.");
        read(e, "pinv_tol", est.pinv_tol, "estimator.");
        read(e, "init_seed", est.init_seed, "estimator.");
    }
    if (const YAML::Node x = root["experiment"]; x && !x.IsNull()) {
        require_map(x, "experiment");
        reject_unknown(x, "experiment.",
                       {"snr_grid_db", "trials", "master_seed", "estimators", "workers", "output", "format"});
        read(x, "snr_grid_db", cfg.snr_grid_db, "experiment.");
        read(x, "trials", cfg.trials, "experiment.");
        read(x, "master_seed", cfg.master_seed, "experiment.");
        read(x, "workers", cfg.workers, "experiment.");
        read(x, "output", cfg.output_path, "experiment.");
        if (const YAML::Node names = x["estimators"]; names) {
            std::vector<std::string> list;
            read(x, "estimators", list, "experiment.");
            cfg.estimators.clear();
            for (const auto& n : list) cfg.estimators.push_back(method_from_name(n));
        }
        if (x["format"]) {
            std::string f;
            read(x, "format", f, "experiment.");
            cfg.format = format_from_name(f);
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double to_double(const std::string& s, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + s + "'");
    }
}

}  // namespace

OutputFormat format_from_name(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("format", "unknown format '" + name + "' (expected csv or json)");
}

void ExperimentConfig::validate() const {
    for (Method m : estimators) system.validate(m);
    if (estimators.empty()) throw ConfigError("estimators", "at least one estimator must be enabled");
    for (std::size_t i = 0; i < estimators.size(); ++i)
        for (std::size_t j = i + 1; j < estimators.size(); ++j)
            if (estimators[i] == estimators[j]) throw ConfigError("estimators", "duplicate estimator");
    channel.validate(system.N);
    estimator.validate();
    if (snr_grid_db.empty()) throw ConfigError("snr_grid_db", "must not be empty");
    for (double s : snr_grid_db)
        if (!std::isfinite(s)) throw ConfigError("snr_grid_db", "entries must be finite");
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    if (workers < 1) throw ConfigError("workers", "must be >= 1");
}

ExperimentConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", "parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    return from_yaml(root);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<double> parse_snr_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("snr", "expected a:b:step, got '" + text + "'");
    const double a = to_double(parts[0], "snr");
    const double b = to_double(parts[1], "snr");
    const double step = to_double(parts[2], "snr");
    if (!(step > 0.0) || b < a) throw ConfigError("snr", "need step > 0 and b >= a");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
}

std::vector<double> parse_snr_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(to_double(p, "snr"));
    if (out.empty()) throw ConfigError("snr", "empty SNR list");
    return out;
}

std::vector<Method> parse_estimator_list(const std::string& text) {
    std::vector<Method> out;
    for (const auto& p : split(text, ',')) out.push_back(method_from_name(p));
    if (out.empty()) throw ConfigError("estimators", "empty estimator list");
    return out;
}

}  // namespace risce
