#include "risce/estimators.hpp"

#include <stdexcept>

#include "risce/errors.hpp"

namespace risce {

namespace {

// Below this norm a convergence criterion is treated as met.
constexpr double kDegenerateNorm = 1e-300;

bool settled(const CMatrix& current, const CMatrix& previous, double threshold) {
    const double denom = current.squaredNorm();
    if (denom < kDegenerateNorm) return true;
    return (current - previous).squaredNorm() / denom <= threshold;
}

double relative_fit(const CMatrix& data, const CMatrix& model, double data_norm2) {
    const double r = (data - model).squaredNorm();
    return data_norm2 > 0.0 ? r / data_norm2 : r;
}

std::uint64_t u64(Eigen::Index v) { return static_cast<std::uint64_t>(v); }

void check_schedule(const CTensor3& t, const TrainingSchedule& sched, const char* who) {
    if (sched.phases.rows() != t.dim3()) {
        throw ShapeError(std::string(who) + ": phase schedule has " + std::to_string(sched.phases.rows()) +
                         " rows but the tensor has " + std::to_string(t.dim3()) + " blocks");
    }
    if (sched.pilots.cols() != t.dim2()) {
        throw ShapeError(std::string(who) + ": pilot length differs from tensor mode-2 size");
    }
}

ChannelEstimate failure_result(ChannelEstimate est, int iteration, const std::exception& e) {
    est.failed = true;
    est.converged = false;
    est.failed_iteration = iteration;
    est.failure = e.what();
    return est;
}

}  // namespace

void EstimatorConfig::validate() const {
    if (max_iters < 1) throw ConfigError("max_iters", "must be >= 1");
    if (!(conv_threshold > 0.0)) throw ConfigError("conv_threshold", "must be > 0");
    if (!(pinv_tol > 0.0 && pinv_tol < 1.0)) throw ConfigError("pinv_tol", "must lie in (0, 1)");
}

CMatrix ls_direct_path(const CMatrix& v, const CMatrix& x_bar, double pinv_tol, OpTally* tally) {
    if (v.cols() != x_bar.cols()) throw ShapeError("ls_direct_path: V and X_bar differ in slot count");
    // X_bar^+ depends only on the pilots and is not part of the per-trial cost
    return multiply(v, pinv_right(x_bar, pinv_tol), tally);
}

ChannelEstimate als_ris(const CTensor3& q, const TrainingSchedule& sched, const EstimatorConfig& cfg, Rng& rng) {
    cfg.validate();
    check_schedule(q, sched, "als_ris");
    const CMatrix& x = sched.pilots;
    const CMatrix& psi = sched.phases;
    const Eigen::Index m = q.dim1();
    const Eigen::Index n = psi.cols();
    const Eigen::Index k = x.rows();

    ChannelEstimate est;
    OpTally* tally = &est.ops;

    const CMatrix q1 = unfold_mode1(q);
    const CMatrix q2t = unfold_mode2(q).transpose();
    const double q_norm2 = q1.squaredNorm();

    CMatrix h_ur = complex_normal_matrix(rng, n, k);
    CMatrix h_ra = complex_normal_matrix(rng, m, n);
    CMatrix z = multiply(h_ur, x, tally);

    auto fit = [&](const CMatrix& ra, const CMatrix& zz) {
        return relative_fit(q1, ra * khatri_rao(psi, zz.transpose()).transpose(), q_norm2);
    };
    if (cfg.track_residuals) est.residuals.push_back(fit(h_ra, z));

    int i = 1;
    try {
        for (;; ++i) {
            const CMatrix kr_z = khatri_rao(psi, z.transpose(), tally);
            CMatrix h_ra_next = multiply(q1, pinv_right(kr_z.transpose(), cfg.pinv_tol, tally), tally);
            if (cfg.track_residuals) est.residuals.push_back(fit(h_ra_next, z));

            const CMatrix kr_h = khatri_rao(psi, h_ra_next, tally);
            CMatrix z_next = multiply(pinv_left(kr_h, cfg.pinv_tol, tally), q2t, tally);
            if (cfg.track_residuals) est.residuals.push_back(fit(h_ra_next, z_next));

            const bool done = settled(z_next, z, cfg.conv_threshold) && settled(h_ra_next, h_ra, cfg.conv_threshold);
            h_ra = std::move(h_ra_next);
            z = std::move(z_next);
            est.iterations = i;
            if (done) {
                est.converged = true;
                break;
            }
            if (i >= cfg.max_iters) break;
        }
        est.h_ur = multiply(z, pinv_right(x, cfg.pinv_tol, tally), tally);
    } catch (const SingularityError& e) {
        est.h_ra = h_ra;
        est.h_ur = h_ur;
        return failure_result(std::move(est), i, e);
    }
    est.h_ra = std::move(h_ra);
    return est;
}

ChannelEstimate two_stage_estimate(const ReceiveTensor& recv, const TrainingSchedule& sched,
                                   const EstimatorConfig& cfg, Rng& rng) {
    if (!recv.off_stage) throw std::invalid_argument("two_stage_estimate: RIS-OFF observation V is missing");
    if (!sched.off_pilots) throw std::invalid_argument("two_stage_estimate: RIS-OFF pilots are missing");
    check_schedule(recv.tensor, sched, "two_stage_estimate");

    OpTally stage1;
    CMatrix h_ua;
    try {
        h_ua = ls_direct_path(*recv.off_stage, *sched.off_pilots, cfg.pinv_tol, &stage1);
    } catch (const SingularityError& e) {
        return failure_result(ChannelEstimate{}, 0, e);
    }

    const CMatrix direct = multiply(h_ua, sched.pilots, &stage1);
    std::vector<CMatrix> residual_slices;
    residual_slices.reserve(recv.tensor.slices().size());
    for (const auto& y : recv.tensor.slices()) residual_slices.emplace_back(y - direct);

    ChannelEstimate est = als_ris(CTensor3(std::move(residual_slices)), sched, cfg, rng);
    est.h_ua = std::move(h_ua);
    est.ops.add(stage1.macs);
    return est;
}

ChannelEstimate e_als_estimate(const ReceiveTensor& recv, const TrainingSchedule& sched, const EstimatorConfig& cfg,
                               Rng& rng) {
    cfg.validate();
    const CTensor3& y = recv.tensor;
    check_schedule(y, sched, "e_als_estimate");
    const CMatrix& x = sched.pilots;
    const CMatrix& psi = sched.phases;
    const Eigen::Index m = y.dim1();
    const Eigen::Index l = y.dim2();
    const Eigen::Index b = y.dim3();
    const Eigen::Index n = psi.cols();
    const Eigen::Index k = x.rows();

    ChannelEstimate est;
    OpTally* tally = &est.ops;

    const CMatrix y1 = unfold_mode1(y);
    const CMatrix y2t = unfold_mode2(y).transpose();
    const double y_norm2 = y1.squaredNorm();
    const CMatrix ones = CMatrix::Ones(b, k);
    // (1 ⋄ X^T)^T is fixed by the pilots
    const CMatrix direct_rows = khatri_rao(ones, x.transpose()).transpose();

    CMatrix h_ua = complex_normal_matrix(rng, m, k);
    CMatrix h_ur = complex_normal_matrix(rng, n, k);
    CMatrix h_ra = complex_normal_matrix(rng, m, n);
    CMatrix z = multiply(h_ur, x, tally);

    auto fit = [&](const CMatrix& ua, const CMatrix& ra, const CMatrix& zz) {
        return relative_fit(y1, ua * direct_rows + ra * khatri_rao(psi, zz.transpose()).transpose(), y_norm2);
    };
    if (cfg.track_residuals) est.residuals.push_back(fit(h_ua, h_ra, z));

    CMatrix regressor(k + n, b * l);
    regressor.topRows(k) = direct_rows;

    int i = 1;
    try {
        for (;; ++i) {
            regressor.bottomRows(n) = khatri_rao(psi, z.transpose(), tally).transpose();
            const CMatrix joint = multiply(y1, pinv_right(regressor, cfg.pinv_tol, tally), tally);
            CMatrix h_ua_next = joint.leftCols(k);
            CMatrix h_ra_next = joint.rightCols(n);
            if (cfg.track_residuals) est.residuals.push_back(fit(h_ua_next, h_ra_next, z));

            const CMatrix direct = multiply(khatri_rao(ones, h_ua_next, tally), x, tally);
            const CMatrix kr_h = khatri_rao(psi, h_ra_next, tally);
            CMatrix z_next = multiply(pinv_left(kr_h, cfg.pinv_tol, tally), y2t - direct, tally);
            if (cfg.track_residuals) est.residuals.push_back(fit(h_ua_next, h_ra_next, z_next));

            // the H_UA criterion is normalised by the current H_UA iterate
            const bool done = settled(h_ua_next, h_ua, cfg.conv_threshold) &&
                              settled(z_next, z, cfg.conv_threshold) &&
                              settled(h_ra_next, h_ra, cfg.conv_threshold);
            h_ua = std::move(h_ua_next);
            h_ra = std::move(h_ra_next);
            z = std::move(z_next);
            est.iterations = i;
            if (done) {
                est.converged = true;
                break;
            }
            if (i >= cfg.max_iters) break;
        }
        est.h_ur = multiply(z, pinv_right(x, cfg.pinv_tol, tally), tally);
    } catch (const SingularityError& e) {
        est.h_ua = h_ua;
        est.h_ra = h_ra;
        est.h_ur = h_ur;
        return failure_result(std::move(est), i, e);
    }
    est.h_ua = std::move(h_ua);
    est.h_ra = std::move(h_ra);
    return est;
}

ParameterEstimate ls_baseline(const ReceiveTensor& recv, const TrainingSchedule& sched, const EstimatorConfig& cfg) {
    cfg.validate();
    const CTensor3& y = recv.tensor;
    check_schedule(y, sched, "ls_baseline");
    const CMatrix& x = sched.pilots;
    const CMatrix& psi = sched.phases;
    const Eigen::Index m = y.dim1();
    const Eigen::Index l = y.dim2();
    const Eigen::Index b = y.dim3();
    const Eigen::Index n = psi.cols();
    const Eigen::Index k = x.rows();
    const Eigen::Index unknowns = k * (n + 1);

    ParameterEstimate out;
    if (b * l < unknowns) {
        out.failed = true;
        out.failure = "ls_baseline: " + std::to_string(b * l) + " observations per antenna for " +
                      std::to_string(unknowns) + " unknowns";
        return out;
    }

    // Row block b holds [X^T, psi(b,0) X^T, ..., psi(b,N-1) X^T]; column
    // k' < K is h_ua(m,k'), column K + n'K + k' is G_{k'}(m, n').
    CMatrix regressor(b * l, unknowns);
    const CMatrix xt = x.transpose();
    for (Eigen::Index blk = 0; blk < b; ++blk) {
        auto rows = regressor.middleRows(blk * l, l);
        rows.leftCols(k) = xt;
        for (Eigen::Index nn = 0; nn < n; ++nn) rows.middleCols(k + nn * k, k) = psi(blk, nn) * xt;
    }

    Eigen::ColPivHouseholderQR<CMatrix> qr(regressor);
    qr.setThreshold(cfg.pinv_tol);
    out.ops.add(u64(b * l) * u64(unknowns) * u64(unknowns));
    if (qr.rank() < unknowns) {
        out.failed = true;
        out.failure = "ls_baseline: regressor is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                      std::to_string(unknowns) + ")";
        return out;
    }
    // one right-hand side per AP antenna
    const CMatrix theta = qr.solve(unfold_mode1(y).transpose()).transpose();
    out.ops.add(u64(m) * u64(b * l) * u64(unknowns));

    out.h_ua = theta.leftCols(k);
    out.g.resize(k * m, n);
    for (Eigen::Index nn = 0; nn < n; ++nn)
        for (Eigen::Index kk = 0; kk < k; ++kk) out.g.col(nn).segment(kk * m, m) = theta.col(k + nn * k + kk);
    return out;
}

ChannelEstimate resolve_scaling(const ChannelEstimate& est, const ChannelSet& truth) {
    if (est.h_ra.rows() != truth.h_ra.rows() || est.h_ra.cols() != truth.h_ra.cols() ||
        est.h_ur.rows() != truth.h_ur.rows()) {
        throw ShapeError("resolve_scaling: estimate and truth shapes differ");
    }
    ChannelEstimate out = est;
    out.scaling_fallbacks = 0;
    for (Eigen::Index c = 0; c < truth.h_ra.cols(); ++c) {
        Eigen::Index ref = 0;
        if (truth.h_ra(0, c) == cplx(0.0) || est.h_ra(0, c) == cplx(0.0)) {
            truth.h_ra.col(c).cwiseAbs().maxCoeff(&ref);
            ++out.scaling_fallbacks;
        }
        if (truth.h_ra(ref, c) == cplx(0.0) || est.h_ra(ref, c) == cplx(0.0)) continue;
        const cplx lambda = est.h_ra(ref, c) / truth.h_ra(ref, c);
        out.h_ra.col(c) /= lambda;
        out.h_ur.row(c) *= lambda;
    }
    return out;
}

}  // namespace risce
