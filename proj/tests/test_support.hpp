#pragma once

// Shared helpers and independent oracles for the test suites. Nothing here
// calls into the library routines the oracles are used to check.

#include <cassert>
#include <cmath>
#include <cstdint>

#include "risce/channel_model.hpp"
#include "risce/rng.hpp"
#include "risce/tensor_core.hpp"

namespace risce::testing {

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    return complex_normal_matrix(rng, rows, cols);
}

inline double rel_err(const CMatrix& got, const CMatrix& want) {
    const double d = want.norm();
    return d > 0.0 ? (got - want).norm() / d : (got - want).norm();
}

/// Element-wise Khatri-Rao: out(i*rb + k, j) = a(i,j) * b(k,j).
inline CMatrix oracle_khatri_rao(const CMatrix& a, const CMatrix& b) {
    assert(a.cols() == b.cols());
    CMatrix out(a.rows() * b.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < b.rows(); ++k)
            for (Eigen::Index j = 0; j < a.cols(); ++j) out(i * b.rows() + k, j) = a(i, j) * b(k, j);
    return out;
}

/// Slice b of [[a, bf, c]] computed entry by entry: sum_r a(i,r) bf(l,r) c(b,r).
inline CMatrix oracle_cp_slice(const CMatrix& a, const CMatrix& bf, const CMatrix& c, Eigen::Index b) {
    CMatrix s = CMatrix::Zero(a.rows(), bf.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index l = 0; l < bf.rows(); ++l)
            for (Eigen::Index r = 0; r < a.cols(); ++r) s(i, l) += a(i, r) * bf(l, r) * c(b, r);
    return s;
}

/// Ground truth at the reference dimensions with unit pathloss so the
/// cascaded term is well conditioned in noiseless tests.
inline ChannelSet unit_gain_channels(int M, int K, int N, std::uint64_t seed) {
    return {random_matrix(M, K, seed), random_matrix(M, N, seed + 1), random_matrix(N, K, seed + 2)};
}

}  // namespace risce::testing
