#include "risce/signal_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "risce/errors.hpp"

namespace risce {

CMatrix make_pilots(int K, int L, double power) {
    if (K < 1) throw ConfigError("K", "must be >= 1");
    if (L < K) throw ConfigError("L", "pilot length " + std::to_string(L) + " is shorter than K = " + std::to_string(K));
    if (!(power >= 0.0)) throw ConfigError("P", "transmit power must be >= 0");
    return std::sqrt(power) * dft_matrix(L).topRows(K);
}

CMatrix make_phase_schedule(int N, Method mode) {
    if (N < 1) throw ConfigError("N", "must be >= 1");
    if (mode == Method::two_stage) return dft_matrix(N);
    return dft_matrix(N + 1).rightCols(N);
}

TrainingSchedule make_schedule(const SystemConfig& sys, Method mode) {
    sys.validate(mode);
    const double p = sys.tx_power();
    TrainingSchedule s;
    s.pilots = make_pilots(sys.K, sys.L, p);
    s.phases = make_phase_schedule(sys.N, mode);
    if (mode == Method::two_stage) s.off_pilots = make_pilots(sys.K, sys.L_off, p);
    return s;
}

namespace {

void check_shapes(const ChannelSet& ch, const TrainingSchedule& sched) {
    const auto m = ch.h_ua.rows();
    const auto k = ch.h_ua.cols();
    const auto n = ch.h_ra.cols();
    if (ch.h_ra.rows() != m || ch.h_ur.rows() != n || ch.h_ur.cols() != k) {
        throw ShapeError("synthesize: inconsistent channel shapes");
    }
    if (sched.pilots.rows() != k) throw ShapeError("synthesize: pilot rows differ from user count");
    if (sched.phases.cols() != n) throw ShapeError("synthesize: phase schedule columns differ from RIS size");
    if (sched.off_pilots && sched.off_pilots->rows() != k) {
        throw ShapeError("synthesize: RIS-OFF pilot rows differ from user count");
    }
}

}  // namespace

CTensor3 noiseless_tensor(const ChannelSet& ch, const TrainingSchedule& sched) {
    check_shapes(ch, sched);
    std::vector<CMatrix> slices;
    slices.reserve(static_cast<std::size_t>(sched.blocks()));
    for (Eigen::Index b = 0; b < sched.blocks(); ++b) {
        const CMatrix effective = ch.h_ua + ch.h_ra * row_diag(sched.phases, b) * ch.h_ur;
        slices.emplace_back(effective * sched.pilots);
    }
    return CTensor3(std::move(slices));
}

CMatrix draw_noise(Eigen::Index M, Eigen::Index slots, double noise_power, Rng& rng) {
    if (noise_power == 0.0) return CMatrix::Zero(M, slots);
    return complex_normal_matrix(rng, M, slots, noise_power);
}

ReceiveTensor synthesize(const ChannelSet& ch, const TrainingSchedule& sched, const CMatrix& noise) {
    const auto m = ch.h_ua.rows();
    if (noise.rows() != m || noise.cols() < sched.training_length()) {
        throw ShapeError("synthesize: noise must be " + std::to_string(m) + " x >= " +
                         std::to_string(sched.training_length()));
    }
    ReceiveTensor out{noiseless_tensor(ch, sched), std::nullopt};
    Eigen::Index slot = 0;
    if (sched.off_pilots) {
        const auto l_off = sched.off_pilots->cols();
        out.off_stage = ch.h_ua * *sched.off_pilots + noise.middleCols(slot, l_off);
        slot += l_off;
    }
    const auto l = sched.pilots.cols();
    for (Eigen::Index b = 0; b < sched.blocks(); ++b, slot += l) out.tensor.slice(b) += noise.middleCols(slot, l);
    return out;
}

ReceiveTensor synthesize(const ChannelSet& ch, const TrainingSchedule& sched, double noise_power, Rng& rng) {
    if (!(noise_power >= 0.0)) throw ConfigError("noise_power", "must be >= 0");
    return synthesize(ch, sched, draw_noise(ch.h_ua.rows(), sched.training_length(), noise_power, rng));
}

}  // namespace risce
