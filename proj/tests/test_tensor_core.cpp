#include <gtest/gtest.h>

#include <numbers>

#include "risce/errors.hpp"
#include "risce/tensor_core.hpp"
#include "test_support.hpp"

using namespace risce;
using risce::testing::oracle_cp_slice;
using risce::testing::oracle_khatri_rao;
using risce::testing::random_matrix;
using risce::testing::rel_err;

TEST(KhatriRao, IdentityCase) {
    const CMatrix i2 = CMatrix::Identity(2, 2);
    CMatrix want = CMatrix::Zero(4, 2);
    want(0, 0) = 1.0;
    want(3, 1) = 1.0;
    EXPECT_EQ(khatri_rao(i2, i2), want);
}

TEST(KhatriRao, SingleColumnKronecker) {
    CMatrix a(2, 1), b(2, 1), want(4, 1);
    a << 1.0, 2.0;
    b << 3.0, 4.0;
    want << 3.0, 4.0, 6.0, 8.0;
    EXPECT_EQ(khatri_rao(a, b), want);
}

TEST(KhatriRao, MatchesElementwiseDefinition) {
    const CMatrix a = random_matrix(3, 2, 11);
    const CMatrix b = random_matrix(4, 2, 12);
    EXPECT_EQ(khatri_rao(a, b), oracle_khatri_rao(a, b));
}

TEST(KhatriRao, ColumnsAreKroneckerOfColumns) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const CMatrix a = random_matrix(1 + seed % 4, 3, seed);
        const CMatrix b = random_matrix(2 + seed % 3, 3, seed + 100);
        const CMatrix kr = khatri_rao(a, b);
        for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(CMatrix(kr.col(j)), kronecker(a.col(j), b.col(j)));
    }
}

TEST(KhatriRao, ColumnMismatchNamesBothOperands) {
    try {
        khatri_rao(CMatrix::Ones(2, 3), CMatrix::Ones(2, 2));
        FAIL() << "expected ShapeError";
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("2x3"), std::string::npos);
        EXPECT_NE(msg.find("2x2"), std::string::npos);
    }
}

TEST(KhatriRao, CountsOneMacPerEntry) {
    OpTally t;
    khatri_rao(CMatrix::Ones(3, 2), CMatrix::Ones(4, 2), &t);
    EXPECT_EQ(t.macs, 24u);
}

TEST(Kronecker, IdentityTimesIdentity) {
    EXPECT_EQ(kronecker(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)), CMatrix(CMatrix::Identity(6, 6)));
}

TEST(Kronecker, HandExpansion) {
    CMatrix a(1, 2), b(2, 1), want(2, 2);
    a << 1.0, 2.0;
    b << 0.0, 1.0;
    want << 0.0, 0.0, 1.0, 2.0;
    EXPECT_EQ(kronecker(a, b), want);
}

TEST(Kronecker, BlocksAreScaledCopies) {
    const CMatrix a = random_matrix(2, 3, 5);
    const CMatrix b = random_matrix(3, 2, 6);
    const CMatrix k = kronecker(a, b);
    ASSERT_EQ(k.rows(), 6);
    ASSERT_EQ(k.cols(), 6);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(CMatrix(k.block(i * 3, j * 2, 3, 2)), CMatrix(a(i, j) * b));
}

TEST(Unfold, Mode1TinySlices) {
    CTensor3 t(std::vector<CMatrix>{CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 2.0)});
    CMatrix want(1, 2);
    want << 1.0, 2.0;
    EXPECT_EQ(unfold_mode1(t), want);
}

TEST(Unfold, Mode2TinySlice) {
    CMatrix s(1, 2);
    s << 1.0, 2.0;
    CTensor3 t(std::vector<CMatrix>{s});
    CMatrix want(2, 1);
    want << 1.0, 2.0;
    EXPECT_EQ(unfold_mode2(t), want);
}

TEST(Unfold, ZeroTensor) {
    const CTensor3 t(3, 4, 5);
    EXPECT_EQ(unfold_mode1(t), CMatrix(CMatrix::Zero(3, 20)));
    EXPECT_EQ(unfold_mode2(t), CMatrix(CMatrix::Zero(4, 15)));
}

TEST(Unfold, MatchesFactorFormulas) {
    // Q = [[H_RA, Z^T, Psi]] built slice by slice from the entry-wise sum.
    const Eigen::Index M = 4, L = 8, B = 25, N = 25;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CMatrix h_ra = random_matrix(M, N, seed);
        const CMatrix zt = random_matrix(L, N, seed + 10);
        const CMatrix psi = dft_matrix(N);
        std::vector<CMatrix> slices;
        for (Eigen::Index b = 0; b < B; ++b) slices.push_back(oracle_cp_slice(h_ra, zt, psi, b));
        const CTensor3 q(std::move(slices));

        EXPECT_LE(rel_err(unfold_mode1(q), h_ra * oracle_khatri_rao(psi, zt).transpose()), 1e-12);
        EXPECT_LE(rel_err(unfold_mode2(q), zt * oracle_khatri_rao(psi, h_ra).transpose()), 1e-12);
        // cp_tensor builds the same slices
        const CTensor3 q2 = cp_tensor(h_ra, zt, psi);
        for (Eigen::Index b = 0; b < B; ++b) EXPECT_LE(rel_err(q2.slice(b), q.slice(b)), 1e-12);
    }
}

TEST(CTensor3, RejectsRaggedSlices) {
    EXPECT_THROW(CTensor3(std::vector<CMatrix>{CMatrix::Zero(2, 2), CMatrix::Zero(2, 3)}), ShapeError);
    EXPECT_THROW(CTensor3(std::vector<CMatrix>{}), ShapeError);
}

TEST(PinvRight, Identity) {
    EXPECT_LE(rel_err(pinv_right(CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3)), 1e-15);
}

TEST(PinvRight, RowVector) {
    CMatrix a(1, 3), want(3, 1);
    a << 1.0, 0.0, 0.0;
    want << 1.0, 0.0, 0.0;
    EXPECT_LE((pinv_right(a) - want).norm(), 1e-15);
}

TEST(PinvRight, DftRowsGiveScaledAdjoint) {
    // Rows of a DFT matrix are orthogonal with squared norm n, so a a^H = n I.
    const CMatrix a = dft_matrix(8);
    EXPECT_LE(rel_err(pinv_right(a), a.adjoint() / 8.0), 1e-12);
    const CMatrix wide = dft_matrix(10).topRows(4);
    EXPECT_LE(rel_err(pinv_right(wide), wide.adjoint() / 10.0), 1e-12);
}

TEST(PinvRight, ResidualBoundForWellConditioned) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const CMatrix a = random_matrix(3 + seed % 5, 12, seed);
        const CMatrix r = pinv_right(a);
        const auto rows = a.rows();
        EXPECT_LE((a * r - CMatrix::Identity(rows, rows)).norm(), 1e-9 * a.norm());
    }
}

TEST(PinvRight, RankDeficientThrows) {
    CMatrix a(2, 3);
    a << 1.0, 2.0, 3.0, 2.0, 4.0, 6.0;
    try {
        pinv_right(a);
        FAIL() << "expected SingularityError";
    } catch (const SingularityError& e) {
        EXPECT_EQ(e.rows(), 2);
        EXPECT_EQ(e.cols(), 3);
    }
    EXPECT_THROW(pinv_right(CMatrix::Zero(2, 4)), SingularityError);
    EXPECT_THROW(pinv_right(CMatrix::Ones(4, 2)), ShapeError);
}

TEST(PinvLeft, Identity) {
    EXPECT_LE(rel_err(pinv_left(CMatrix::Identity(4, 4)), CMatrix::Identity(4, 4)), 1e-15);
}

TEST(PinvLeft, TallOnes) {
    CMatrix want(1, 2);
    want << 0.5, 0.5;
    EXPECT_LE((pinv_left(CMatrix::Ones(2, 1)) - want).norm(), 1e-15);
}

TEST(PinvLeft, KhatriRaoOfDftRowsAndRandom) {
    const Eigen::Index N = 25, M = 4;
    const CMatrix psi = dft_matrix(N + 1).rightCols(N);
    const CMatrix a = khatri_rao(psi, random_matrix(M, N, 3));
    ASSERT_GE(a.rows(), N);
    EXPECT_LE((pinv_left(a) * a - CMatrix::Identity(N, N)).norm(), 1e-10);
}

TEST(PinvLeft, RankDeficientThrows) {
    EXPECT_THROW(pinv_left(CMatrix::Ones(4, 2)), SingularityError);
    EXPECT_THROW(pinv_left(CMatrix::Ones(2, 4)), ShapeError);
}

TEST(Dft, SmallCases) {
    EXPECT_EQ(dft_matrix(1), CMatrix(CMatrix::Ones(1, 1)));
    CMatrix f2(2, 2);
    f2 << 1.0, 1.0, 1.0, -1.0;
    EXPECT_LE((dft_matrix(2) - f2).norm(), 1e-15);
}

TEST(Dft, OrthogonalColumns) {
    for (Eigen::Index n : {3, 8, 25, 26}) {
        const CMatrix f = dft_matrix(n);
        const double scale = static_cast<double>(n);
        EXPECT_LE((f.adjoint() * f - scale * CMatrix::Identity(n, n)).norm(), 1e-10 * scale);
        EXPECT_EQ(CMatrix(f.row(0)), CMatrix(CMatrix::Ones(1, n)));
        EXPECT_EQ(CMatrix(f.col(0)), CMatrix(CMatrix::Ones(n, 1)));
    }
}

TEST(Dft, EntryDefinition) {
    const CMatrix f = dft_matrix(7);
    for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
            EXPECT_NEAR(std::abs(f(j, k) - std::exp(cplx(0.0, -2.0 * std::numbers::pi * j * k / 7.0))), 0.0, 1e-13);
}

TEST(RowDiag, PicksRow) {
    CMatrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    CMatrix want = CMatrix::Zero(2, 2);
    want(0, 0) = 3.0;
    want(1, 1) = 4.0;
    EXPECT_EQ(row_diag(a, 1), want);
}

TEST(RowDiag, OnesRowIsIdentity) {
    const CMatrix ones = CMatrix::Ones(5, 8);
    for (Eigen::Index b = 0; b < 5; ++b) EXPECT_EQ(row_diag(ones, b), CMatrix(CMatrix::Identity(8, 8)));
}

TEST(RowDiag, RandomRowOnDiagonal) {
    const CMatrix a = random_matrix(5, 3, 9);
    const CMatrix d = row_diag(a, 2);
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(d(j, j), a(2, j));
    EXPECT_EQ((d - CMatrix(d.diagonal().asDiagonal())).norm(), 0.0);
    EXPECT_THROW(row_diag(a, 5), ShapeError);
    EXPECT_THROW(row_diag(a, -1), ShapeError);
}
