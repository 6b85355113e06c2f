#include <gtest/gtest.h>

#include "risce/errors.hpp"
#include "risce/signal_model.hpp"
#include "test_support.hpp"

using namespace risce;
using risce::testing::oracle_khatri_rao;
using risce::testing::random_matrix;
using risce::testing::rel_err;
using risce::testing::unit_gain_channels;

TEST(Pilots, TwoByTwo) {
    CMatrix want(2, 2);
    want << 1.0, 1.0, 1.0, -1.0;
    const CMatrix x = make_pilots(2, 2, 1.0);
    EXPECT_LE((x - want).norm(), 1e-15);
    EXPECT_LE((x * x.adjoint() - 2.0 * CMatrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(Pilots, ReferenceOrthogonality) {
    const CMatrix x = make_pilots(8, 8, 1.0);
    EXPECT_LE((x * x.adjoint() - 8.0 * CMatrix::Identity(8, 8)).norm(), 1e-10);
}

TEST(Pilots, PowerScalesModulus) {
    const CMatrix x = make_pilots(3, 5, 4.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) EXPECT_NEAR(std::abs(x(i)), 2.0, 1e-14);
    EXPECT_LE((x * x.adjoint() - 20.0 * CMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Pilots, TooFewSlots) {
    EXPECT_THROW(make_pilots(8, 7, 1.0), ConfigError);
}

TEST(Phases, TwoStageSmall) {
    CMatrix want(2, 2);
    want << 1.0, 1.0, 1.0, -1.0;
    EXPECT_LE((make_phase_schedule(2, Method::two_stage) - want).norm(), 1e-15);
}

TEST(Phases, JointScheduleReconstitutesDft) {
    const CMatrix psi = make_phase_schedule(25, Method::e_als);
    ASSERT_EQ(psi.rows(), 26);
    ASSERT_EQ(psi.cols(), 25);
    CMatrix full(26, 26);
    full << CMatrix::Ones(26, 1), psi;
    EXPECT_EQ(full, dft_matrix(26));
    EXPECT_EQ(make_phase_schedule(25, Method::ls), psi);
    for (Eigen::Index i = 0; i < psi.size(); ++i) EXPECT_NEAR(std::abs(psi(i)), 1.0, 1e-12);
}

TEST(Schedule, TrainingBudgetParity) {
    const SystemConfig sys;
    const TrainingSchedule two = make_schedule(sys, Method::two_stage);
    const TrainingSchedule joint = make_schedule(sys, Method::e_als);
    EXPECT_EQ(two.training_length(), 208);
    EXPECT_EQ(joint.training_length(), 208);
    EXPECT_EQ(sys.training_length(Method::two_stage), 208);
    EXPECT_EQ(sys.training_length(Method::e_als), 208);
    EXPECT_EQ(two.blocks(), 25);
    EXPECT_EQ(joint.blocks(), 26);
    ASSERT_TRUE(two.off_pilots.has_value());
    EXPECT_FALSE(joint.off_pilots.has_value());
}

TEST(Synthesize, ScalarDegenerate) {
    const ChannelSet ch{CMatrix::Constant(1, 1, cplx(0.5, 1.0)), CMatrix::Constant(1, 1, cplx(2.0, -1.0)),
                        CMatrix::Constant(1, 1, cplx(-0.3, 0.2))};
    TrainingSchedule sched{make_pilots(1, 3, 1.0), CMatrix::Ones(1, 1), std::nullopt};
    const ReceiveTensor r = synthesize(ch, sched, CMatrix::Zero(1, 3));
    const CMatrix want = (ch.h_ua + ch.h_ra * ch.h_ur) * sched.pilots;
    EXPECT_EQ(r.tensor.dim3(), 1);
    EXPECT_LE((r.tensor.slice(0) - want).norm(), 1e-15);
    EXPECT_FALSE(r.off_stage.has_value());
}

TEST(Synthesize, UnfoldingsMatchFactorFormulas) {
    SystemConfig sys;
    const TrainingSchedule sched = make_schedule(sys, Method::e_als);
    const CMatrix& x = sched.pilots;
    const CMatrix& psi = sched.phases;
    const CMatrix ones = CMatrix::Ones(psi.rows(), x.rows());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ChannelSet ch = unit_gain_channels(sys.M, sys.K, sys.N, 10 * seed);
        const CMatrix z = ch.h_ur * x;
        const ReceiveTensor r = synthesize(ch, sched, CMatrix::Zero(sys.M, sched.training_length()));
        const CMatrix y1 = ch.h_ua * oracle_khatri_rao(ones, x.transpose()).transpose() +
                           ch.h_ra * oracle_khatri_rao(psi, z.transpose()).transpose();
        const CMatrix y2 = x.transpose() * oracle_khatri_rao(ones, ch.h_ua).transpose() +
                           z.transpose() * oracle_khatri_rao(psi, ch.h_ra).transpose();
        EXPECT_LE(rel_err(unfold_mode1(r.tensor), y1), 1e-12);
        EXPECT_LE(rel_err(unfold_mode2(r.tensor), y2), 1e-12);
        EXPECT_LE(rel_err(unfold_mode1(noiseless_tensor(ch, sched)), y1), 1e-12);
    }
}

TEST(Synthesize, RisOffStageComesFirst) {
    SystemConfig sys;
    const TrainingSchedule sched = make_schedule(sys, Method::two_stage);
    const ChannelSet ch = unit_gain_channels(sys.M, sys.K, sys.N, 77);
    const CMatrix noise = random_matrix(sys.M, sched.training_length(), 78);
    const ReceiveTensor r = synthesize(ch, sched, noise);
    ASSERT_TRUE(r.off_stage.has_value());
    EXPECT_LE(rel_err(*r.off_stage, ch.h_ua * *sched.off_pilots + noise.leftCols(sys.L_off)), 1e-14);
    const CTensor3 clean = noiseless_tensor(ch, sched);
    for (Eigen::Index b = 0; b < sched.blocks(); ++b) {
        const CMatrix n_b = noise.middleCols(sys.L_off + b * sys.L, sys.L);
        EXPECT_LE(rel_err(r.tensor.slice(b), clean.slice(b) + n_b), 1e-14);
    }
}

TEST(Synthesize, SharedNoiseAcrossSchedules) {
    // Both schedules consume the same realisation from slot 0.
    SystemConfig sys;
    const ChannelSet ch = unit_gain_channels(sys.M, sys.K, sys.N, 3);
    const CMatrix noise = random_matrix(sys.M, 208, 4);
    const TrainingSchedule joint = make_schedule(sys, Method::e_als);
    const ReceiveTensor r = synthesize(ch, joint, noise);
    EXPECT_LE(rel_err(r.tensor.slice(0), noiseless_tensor(ch, joint).slice(0) + noise.leftCols(sys.L)), 1e-14);
    EXPECT_THROW(synthesize(ch, joint, CMatrix::Zero(sys.M, 100)), ShapeError);
}

TEST(Noise, EmpiricalPower) {
    Rng rng(99);
    const double sigma2 = 2.5;
    const CMatrix n = draw_noise(1000, 1000, sigma2, rng);
    const double mean = n.squaredNorm() / static_cast<double>(n.size());
    EXPECT_NEAR(mean, sigma2, 0.01 * sigma2);
    Rng rng2(1);
    EXPECT_EQ(draw_noise(3, 4, 0.0, rng2), CMatrix(CMatrix::Zero(3, 4)));
}

TEST(Noise, DeterministicGivenSeed) {
    SystemConfig sys;
    const TrainingSchedule sched = make_schedule(sys, Method::two_stage);
    const ChannelSet ch = unit_gain_channels(sys.M, sys.K, sys.N, 5);
    Rng a(12), b(12);
    const ReceiveTensor x = synthesize(ch, sched, 1.0, a);
    const ReceiveTensor y = synthesize(ch, sched, 1.0, b);
    EXPECT_EQ(unfold_mode1(x.tensor), unfold_mode1(y.tensor));
    EXPECT_EQ(*x.off_stage, *y.off_stage);
}
