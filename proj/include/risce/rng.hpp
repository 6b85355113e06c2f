#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "risce/tensor_core.hpp"

namespace risce {

using Rng = std::mt19937_64;

/// Independent substreams of one trial. Channel, noise and estimator
/// initialisation never share a generator.
enum class Stream : std::uint64_t { geometry = 1, fading = 2, noise = 3, init = 4 };

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive hash of a seed path, e.g. (master, snr_index, trial, stream).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto v : path) h = splitmix64(h ^ splitmix64(v));
    return h;
}

/// One CN(0, variance) sample.
inline cplx complex_normal(Rng& rng, double variance = 1.0) {
    std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
}

/// rows x cols matrix of i.i.d. CN(0, variance) entries, filled column-major.
inline CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance = 1.0) {
    std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = g(rng);
            const double im = g(rng);
            out(i, j) = cplx(re, im);
        }
    }
    return out;
}

}  // namespace risce
