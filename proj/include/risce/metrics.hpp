#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "risce/channel_model.hpp"
#include "risce/estimators.hpp"
#include "risce/system.hpp"
#include "risce/tensor_core.hpp"

namespace risce {

/// ||h - h_hat||_F^2 / ||h||_F^2. Throws std::invalid_argument on a zero-norm
/// truth and ShapeError on mismatched shapes.
double nmse(const CMatrix& h_hat, const CMatrix& h);

/// [vec(H_UA); vec(H_UR^T ⋄ H_RA)] as a single column.
CVector parameter_vector(const CMatrix& h_ua, const CMatrix& g);
CVector parameter_vector(const ChannelSet& ch);

/// NMSE of the stacked parameter vector. The Khatri-Rao product cancels the
/// per-column scaling ambiguity, so no resolution is applied.
double aggregate_vector_nmse(const ChannelEstimate& est, const ChannelSet& truth);
double aggregate_vector_nmse(const ParameterEstimate& est, const ChannelSet& truth);

/// NMSE of h_ra_hat * h_ur_hat against h_ra * h_ur.
double cascade_nmse(const ChannelEstimate& est, const ChannelSet& truth);

/// Dimensions entering the analytic operation counts.
struct Dimensions {
    std::uint64_t M, K, N, B, L, L_off;
};

Dimensions dimensions(const SystemConfig& sys, Method m);

/// Analytic per-update operation counts.
///
/// Keys: "H_UA_stage1" (one-time), "H_RA_iter", "Z_iter" (two-stage);
/// "H_joint_iter", "Z_eals_iter" (E-ALS). The cost of H_UR = Z X^+ at exit
/// is not included.
struct ComplexityTally {
    std::map<std::string, std::uint64_t> per_iteration;
    std::map<std::string, std::uint64_t> one_time;

    std::uint64_t per_iteration_total() const;
    /// one-time costs + iterations * per-iteration costs
    std::uint64_t total(std::uint64_t iterations) const;
};

/// Evaluates the per-update complexity rows for `method`. The LS baseline has
/// no iterative rows; requesting it throws std::invalid_argument.
ComplexityTally complexity_formula(Method method, const Dimensions& d);

/// Mergeable running statistics of one scalar.
class RunningStats {
public:
    void add(double v);
    void merge(const RunningStats& other);
    std::size_t count() const noexcept { return values_.size(); }
    double mean() const;
    double median() const;

private:
    std::vector<double> values_;
};

}  // namespace risce
