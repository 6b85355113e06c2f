#pragma once

// Training schedules and received-signal synthesis for block transmission.
//
// Slot layout of one training period: for the two-stage method the L_off
// RIS-OFF slots come first, then B blocks of L slots each.

#include <optional>

#include "risce/channel_model.hpp"
#include "risce/rng.hpp"
#include "risce/system.hpp"
#include "risce/tensor_core.hpp"

namespace risce {

struct TrainingSchedule {
    CMatrix pilots;                     ///< X, K x L
    CMatrix phases;                     ///< Psi, B x N, unit modulus
    std::optional<CMatrix> off_pilots;  ///< X_bar, K x L_off (two-stage only)

    Eigen::Index blocks() const noexcept { return phases.rows(); }
    /// Number of time slots the schedule occupies.
    Eigen::Index training_length() const noexcept {
        return (off_pilots ? off_pilots->cols() : 0) + phases.rows() * pilots.cols();
    }
};

struct ReceiveTensor {
    CTensor3 tensor;                   ///< Y (or Q), M x L x B
    std::optional<CMatrix> off_stage;  ///< V, M x L_off
};

/// First K rows of the L x L DFT matrix scaled by sqrt(P).
CMatrix make_pilots(int K, int L, double power);

/// two_stage: Psi = F_N. e_als / ls: F_{N+1} without its all-ones first column.
CMatrix make_phase_schedule(int N, Method mode);

/// Pilots, phases and (for two-stage) RIS-OFF pilots at P = sys.tx_power().
TrainingSchedule make_schedule(const SystemConfig& sys, Method mode);

/// Noiseless slice b: (H_UA + H_RA D_b(Psi) H_UR) X.
CTensor3 noiseless_tensor(const ChannelSet& ch, const TrainingSchedule& sched);

/// M x T matrix of CN(0, noise_power) samples, one column per time slot.
CMatrix draw_noise(Eigen::Index M, Eigen::Index slots, double noise_power, Rng& rng);

/// Adds `noise` to the noiseless signal, consuming its columns in slot order.
/// `noise` may hold more slots than the schedule needs; the surplus is
/// ignored so that schedules of different lengths can share one realisation.
ReceiveTensor synthesize(const ChannelSet& ch, const TrainingSchedule& sched, const CMatrix& noise);

/// Draws the noise from `rng` and synthesizes.
ReceiveTensor synthesize(const ChannelSet& ch, const TrainingSchedule& sched, double noise_power, Rng& rng);

}  // namespace risce
