#include "risce/system.hpp"

#include "risce/errors.hpp"

namespace risce {

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::two_stage: return "two_stage";
        case Method::e_als: return "e_als";
        case Method::ls: return "ls";
    }
    return "unknown";
}

Method method_from_name(std::string_view name) {
    if (name == "two_stage") return Method::two_stage;
    if (name == "e_als") return Method::e_als;
    if (name == "ls") return Method::ls;
    throw ConfigError("estimators", "unknown estimator '" + std::string(name) + "' (expected two_stage, e_als or ls)");
}

void SystemConfig::validate(Method m) const {
    auto positive = [](int v, const char* field) {
        if (v < 1) throw ConfigError(field, "must be >= 1, got " + std::to_string(v));
    };
    positive(M, "M");
    positive(K, "K");
    positive(N, "N");
    positive(L, "L");
    positive(L_off, "L_off");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) throw ConfigError("noise_power", "must be finite and > 0");
    if (!std::isfinite(snr_db)) throw ConfigError("snr_db", "must be finite");
    if (L < K) throw ConfigError("L", "pilot length L must be >= K for a full-row-rank pilot matrix");

    const int b = blocks(m);
    if (b * M < N) throw ConfigError("M", "B*M must be >= N so the RIS Khatri-Rao factor has full column rank");
    switch (m) {
        case Method::two_stage:
            if (L_off < K) throw ConfigError("L_off", "RIS-OFF pilot length must be >= K");
            break;
        case Method::e_als:
        case Method::ls:
            if (b * L < N + K) throw ConfigError("L", "B*L must be >= N+K for the joint regressor");
            break;
    }
}

}  // namespace risce
