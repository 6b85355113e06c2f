#pragma once

// Channel estimators for the two-term CP received-signal model:
//
//   two-stage RIS OFF-ON  LS direct path from the RIS-OFF slots, then ALS on
//                         the direct-path-removed tensor
//   E-ALS                 joint ALS over [H_UA H_RA] and Z on the full tensor
//   LS baseline           one linear LS solve for [vec(H_UA); vec(H_UR^T ⋄ H_RA)]

#include <optional>
#include <string>
#include <vector>

#include "risce/channel_model.hpp"
#include "risce/rng.hpp"
#include "risce/signal_model.hpp"
#include "risce/tensor_core.hpp"

namespace risce {

struct EstimatorConfig {
    int max_iters = 20;
    double conv_threshold = 1e-8;
    double pinv_tol = kDefaultPinvTol;
    std::uint64_t init_seed = 0;
    /// Record the relative fit residual after every half-step.
    bool track_residuals = true;

    void validate() const;
};

struct ChannelEstimate {
    std::optional<CMatrix> h_ua;  ///< absent when only the RIS term was estimated
    CMatrix h_ur;
    CMatrix h_ra;
    int iterations = 0;
    bool converged = false;
    OpTally ops;
    /// ||data - model||_F^2 / ||data||_F^2, starting with the random
    /// initialisation and then after each conditional update.
    std::vector<double> residuals;
    /// Columns whose scaling reference fell back to the largest-modulus row.
    int scaling_fallbacks = 0;

    bool failed = false;
    int failed_iteration = 0;
    std::string failure;
};

/// Stacked parameter estimate of the LS baseline: h_ua is M x K and
/// g = H_UR^T ⋄ H_RA is (K*M) x N.
struct ParameterEstimate {
    CMatrix h_ua;
    CMatrix g;
    OpTally ops;
    bool failed = false;
    std::string failure;
};

/// V X_bar^+ (least-squares direct path from the RIS-OFF slots).
CMatrix ls_direct_path(const CMatrix& v, const CMatrix& x_bar, double pinv_tol = kDefaultPinvTol,
                       OpTally* tally = nullptr);

/// ALS fit of Q = [[H_RA, Z^T, Psi]]; returns h_ra and h_ur = Z X^+.
ChannelEstimate als_ris(const CTensor3& q, const TrainingSchedule& sched, const EstimatorConfig& cfg, Rng& rng);

/// Direct path from `recv.off_stage`, subtraction, then `als_ris`. Throws
/// std::invalid_argument if the RIS-OFF observation is missing.
ChannelEstimate two_stage_estimate(const ReceiveTensor& recv, const TrainingSchedule& sched,
                                   const EstimatorConfig& cfg, Rng& rng);

/// Enhanced ALS over the full training period.
ChannelEstimate e_als_estimate(const ReceiveTensor& recv, const TrainingSchedule& sched, const EstimatorConfig& cfg,
                               Rng& rng);

/// LS solve of the linear model
///   Y[b](:,l) = sum_k X(k,l) (h_ua_k + G_k psi_b) + n,   G_k = H_RA diag(h_ur_k).
/// The system splits into one problem per AP antenna sharing a (B*L) x K(N+1)
/// regressor, solved by column-pivoted QR.
ParameterEstimate ls_baseline(const ReceiveTensor& recv, const TrainingSchedule& sched, const EstimatorConfig& cfg);

/// Removes the per-column scaling ambiguity against the ground truth using the
/// first row of H_RA as reference; the cascade h_ra * h_ur is unchanged.
ChannelEstimate resolve_scaling(const ChannelEstimate& est, const ChannelSet& truth);

}  // namespace risce
