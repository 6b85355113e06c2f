#include "risce/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "risce/errors.hpp"

namespace risce {

double nmse(const CMatrix& h_hat, const CMatrix& h) {
    if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols()) throw ShapeError("nmse: estimate and truth shapes differ");
    const double denom = h.squaredNorm();
    if (!(denom > 0.0)) throw std::invalid_argument("nmse: truth has zero norm");
    return (h - h_hat).squaredNorm() / denom;
}

CVector parameter_vector(const CMatrix& h_ua, const CMatrix& g) {
    CVector v(h_ua.size() + g.size());
    v.head(h_ua.size()) = h_ua.reshaped();
    v.tail(g.size()) = g.reshaped();
    return v;
}

CVector parameter_vector(const ChannelSet& ch) {
    return parameter_vector(ch.h_ua, khatri_rao(ch.h_ur.transpose(), ch.h_ra));
}

double aggregate_vector_nmse(const ChannelEstimate& est, const ChannelSet& truth) {
    if (!est.h_ua) throw std::invalid_argument("aggregate_vector_nmse: estimate lacks H_UA");
    if (est.h_ur.rows() != truth.h_ur.rows() || est.h_ur.cols() != truth.h_ur.cols() ||
        est.h_ra.rows() != truth.h_ra.rows() || est.h_ra.cols() != truth.h_ra.cols()) {
        throw ShapeError("aggregate_vector_nmse: estimate and truth shapes differ");
    }
    return nmse(parameter_vector(*est.h_ua, khatri_rao(est.h_ur.transpose(), est.h_ra)), parameter_vector(truth));
}

double aggregate_vector_nmse(const ParameterEstimate& est, const ChannelSet& truth) {
    return nmse(parameter_vector(est.h_ua, est.g), parameter_vector(truth));
}

double cascade_nmse(const ChannelEstimate& est, const ChannelSet& truth) {
    return nmse(est.h_ra * est.h_ur, truth.h_ra * truth.h_ur);
}

Dimensions dimensions(const SystemConfig& sys, Method m) {
    auto u = [](int v) { return static_cast<std::uint64_t>(v); };
    return {u(sys.M), u(sys.K), u(sys.N), u(sys.blocks(m)), u(sys.L), u(sys.L_off)};
}

std::uint64_t ComplexityTally::per_iteration_total() const {
    std::uint64_t s = 0;
    for (const auto& [name, v] : per_iteration) s += v;
    return s;
}

std::uint64_t ComplexityTally::total(std::uint64_t iterations) const {
    std::uint64_t s = iterations * per_iteration_total();
    for (const auto& [name, v] : one_time) s += v;
    return s;
}

ComplexityTally complexity_formula(Method method, const Dimensions& d) {
    const auto [M, K, N, B, L, L_off] = d;
    ComplexityTally t;
    switch (method) {
        case Method::two_stage:
            t.one_time["H_UA_stage1"] = M * K * L_off;
            t.per_iteration["H_RA_iter"] = N * N * N + N * N * B * L + N * B * L * (B * L + M + 1);
            t.per_iteration["Z_iter"] = N * N * N + N * N * M * L + N * M * L * (M * L + B + 1);
            break;
        case Method::e_als: {
            const auto J = N + K;
            t.per_iteration["H_joint_iter"] = J * J * J + J * J * B * L + J * (B * L + M + 1) * B * L;
            t.per_iteration["Z_eals_iter"] =
                N * N * N + N * N * B * M + N * B * M * (B * M + L + 1) + B * M * (K + K * L + L);
            break;
        }
        case Method::ls:
            throw std::invalid_argument("complexity_formula: no iterative complexity rows for the LS baseline");
    }
    return t;
}

void RunningStats::add(double v) { values_.push_back(v); }

void RunningStats::merge(const RunningStats& other) {
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
}

double RunningStats::mean() const {
    if (values_.empty()) return 0.0;
    // summed in sorted order so the result does not depend on merge order
    std::vector<double> v = values_;
    std::sort(v.begin(), v.end());
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double RunningStats::median() const {
    if (values_.empty()) return 0.0;
    std::vector<double> v = values_;
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace risce
