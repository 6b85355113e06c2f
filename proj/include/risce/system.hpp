#pragma once

#include <cmath>
#include <string>
#include <string_view>

namespace risce {

/// Estimation methods. `ls` shares the E-ALS training schedule.
enum class Method { two_stage, e_als, ls };

std::string_view method_name(Method m) noexcept;
/// Parses "two_stage", "e_als" or "ls"; throws ConfigError otherwise.
Method method_from_name(std::string_view name);

/// Scalar dimensions and powers of one scenario.
///
/// The block count B is not stored: it follows from the RIS phase schedule of
/// the method (B = N for two-stage, B = N + 1 for E-ALS and LS). Likewise the
/// training length T is always derived.
struct SystemConfig {
    int M = 4;      ///< AP antennas
    int K = 8;      ///< single-antenna users
    int N = 25;     ///< RIS elements
    int L = 8;      ///< pilots per block
    int L_off = 8;  ///< RIS-OFF stage length (two-stage only)
    double noise_power = 1.0;
    double snr_db = 20.0;

    /// Per-user transmit power P with P / sigma^2 = 10^(snr_db / 10).
    double tx_power() const { return noise_power * std::pow(10.0, snr_db / 10.0); }

    int blocks(Method m) const { return m == Method::two_stage ? N : N + 1; }

    int training_length(Method m) const {
        return m == Method::two_stage ? L_off + blocks(m) * L : blocks(m) * L;
    }

    /// Checks count and rank preconditions for `m`; throws ConfigError naming
    /// the field.
    void validate(Method m) const;
};

}  // namespace risce
