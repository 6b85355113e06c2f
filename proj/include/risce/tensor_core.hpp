#pragma once

// Dense complex matrix and third-order tensor primitives.
//
// Matrices are Eigen column-major, so vec() and unfolding orders follow the
// usual column-stacking convention. Tensors hold their frontal slices.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace risce {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultPinvTol = 1e-12;

/// Running count of complex multiply-accumulates. Passed by pointer into the
/// primitives below; a null tally disables counting.
struct OpTally {
    std::uint64_t macs = 0;
    void add(std::uint64_t n) noexcept { macs += n; }
};

/// Third-order tensor of shape dim1 x dim2 x dim3 stored as dim3 frontal
/// slices of shape dim1 x dim2.
class CTensor3 {
public:
    CTensor3() = default;
    CTensor3(Eigen::Index dim1, Eigen::Index dim2, Eigen::Index dim3);
    explicit CTensor3(std::vector<CMatrix> slices);

    Eigen::Index dim1() const noexcept { return dim1_; }
    Eigen::Index dim2() const noexcept { return dim2_; }
    Eigen::Index dim3() const noexcept { return static_cast<Eigen::Index>(slices_.size()); }

    const CMatrix& slice(Eigen::Index b) const { return slices_.at(static_cast<std::size_t>(b)); }
    CMatrix& slice(Eigen::Index b) { return slices_.at(static_cast<std::size_t>(b)); }
    const std::vector<CMatrix>& slices() const noexcept { return slices_; }

private:
    Eigen::Index dim1_ = 0;
    Eigen::Index dim2_ = 0;
    std::vector<CMatrix> slices_;
};

/// Column-wise Kronecker product. Column j of the result is a.col(j) ⊗ b.col(j).
CMatrix khatri_rao(const CMatrix& a, const CMatrix& b, OpTally* tally = nullptr);

CMatrix kronecker(const CMatrix& a, const CMatrix& b);

/// dim1 x (dim2*dim3): frontal slices concatenated left to right.
CMatrix unfold_mode1(const CTensor3& t);

/// dim2 x (dim1*dim3): transposed frontal slices concatenated left to right.
CMatrix unfold_mode2(const CTensor3& t);

/// Builds the tensor whose slice b is a * D_b(c) * bf^T.
CTensor3 cp_tensor(const CMatrix& a, const CMatrix& bf, const CMatrix& c);

/// Right pseudoinverse a^H (a a^H)^{-1} of a wide matrix, computed through a
/// column-pivoted QR of a^H. Throws SingularityError if the ratio of the
/// smallest to largest pivot falls below `tol`.
CMatrix pinv_right(const CMatrix& a, double tol = kDefaultPinvTol, OpTally* tally = nullptr);

/// Left pseudoinverse (a^H a)^{-1} a^H of a tall matrix.
CMatrix pinv_left(const CMatrix& a, double tol = kDefaultPinvTol, OpTally* tally = nullptr);

/// n x n DFT matrix, entry (j,k) = exp(-i 2 pi j k / n).
CMatrix dft_matrix(Eigen::Index n);

/// Diagonal matrix holding row i of a.
CMatrix row_diag(const CMatrix& a, Eigen::Index i);

/// a * b with the product's MAC count added to `tally`.
CMatrix multiply(const CMatrix& a, const CMatrix& b, OpTally* tally = nullptr);

/// True when every entry is finite.
bool all_finite(const CMatrix& a);

}  // namespace risce
