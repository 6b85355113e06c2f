#include "risce/tensor_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "risce/errors.hpp"

namespace risce {

namespace {

std::string shape_of(const CMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

void count(OpTally* tally, std::uint64_t n) {
    if (tally != nullptr) tally->add(n);
}

std::uint64_t u64(Eigen::Index v) { return static_cast<std::uint64_t>(v); }

}  // namespace

CTensor3::CTensor3(Eigen::Index dim1, Eigen::Index dim2, Eigen::Index dim3) : dim1_(dim1), dim2_(dim2) {
    if (dim1 < 1 || dim2 < 1 || dim3 < 1) throw ShapeError("CTensor3: every dimension must be >= 1");
    slices_.assign(static_cast<std::size_t>(dim3), CMatrix::Zero(dim1, dim2));
}

CTensor3::CTensor3(std::vector<CMatrix> slices) : slices_(std::move(slices)) {
    if (slices_.empty()) throw ShapeError("CTensor3: at least one frontal slice required");
    dim1_ = slices_.front().rows();
    dim2_ = slices_.front().cols();
    if (dim1_ < 1 || dim2_ < 1) throw ShapeError("CTensor3: empty frontal slice");
    for (const auto& s : slices_) {
        if (s.rows() != dim1_ || s.cols() != dim2_) {
            throw ShapeError("CTensor3: frontal slice " + shape_of(s) + " differs from " + shape_of(slices_.front()));
        }
    }
}

CMatrix khatri_rao(const CMatrix& a, const CMatrix& b, OpTally* tally) {
    if (a.cols() != b.cols()) {
        throw ShapeError("khatri_rao: column mismatch between a (" + shape_of(a) + ") and b (" + shape_of(b) + ")");
    }
    const Eigen::Index rb = b.rows();
    CMatrix out(a.rows() * rb, a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            out.col(j).segment(i * rb, rb) = a(i, j) * b.col(j);
        }
    }
    count(tally, u64(out.size()));
    return out;
}

CMatrix kronecker(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix unfold_mode1(const CTensor3& t) {
    const Eigen::Index m = t.dim1();
    const Eigen::Index l = t.dim2();
    CMatrix out(m, l * t.dim3());
    for (Eigen::Index b = 0; b < t.dim3(); ++b) out.middleCols(b * l, l) = t.slice(b);
    return out;
}

CMatrix unfold_mode2(const CTensor3& t) {
    const Eigen::Index m = t.dim1();
    const Eigen::Index l = t.dim2();
    CMatrix out(l, m * t.dim3());
    for (Eigen::Index b = 0; b < t.dim3(); ++b) out.middleCols(b * m, m) = t.slice(b).transpose();
    return out;
}

CTensor3 cp_tensor(const CMatrix& a, const CMatrix& bf, const CMatrix& c) {
    if (a.cols() != bf.cols() || a.cols() != c.cols()) {
        throw ShapeError("cp_tensor: factor column counts differ (" + shape_of(a) + ", " + shape_of(bf) + ", " +
                         shape_of(c) + ")");
    }
    std::vector<CMatrix> slices;
    slices.reserve(static_cast<std::size_t>(c.rows()));
    for (Eigen::Index b = 0; b < c.rows(); ++b) {
        slices.emplace_back(a * c.row(b).transpose().asDiagonal() * bf.transpose());
    }
    return CTensor3(std::move(slices));
}

CMatrix pinv_right(const CMatrix& a, double tol, OpTally* tally) {
    const Eigen::Index r = a.rows();
    const Eigen::Index c = a.cols();
    if (r > c) throw ShapeError("pinv_right: expected a wide matrix, got " + shape_of(a));

    // a^H P = Q R  =>  a^+ = Q R^{-H} P^T
    Eigen::ColPivHouseholderQR<CMatrix> qr(a.adjoint());
    const auto& packed = qr.matrixQR();
    const double lead = std::abs(packed(0, 0));
    const double tail = std::abs(packed(r - 1, r - 1));
    if (!(lead > 0.0) || tail < tol * lead) {
        std::ostringstream os;
        os << "pinv_right: " << r << "x" << c << " matrix is rank deficient (pivot ratio "
           << (lead > 0.0 ? tail / lead : 0.0) << " < " << tol << ")";
        throw SingularityError(os.str(), r, c);
    }
    CMatrix rhs = qr.colsPermutation().transpose() * CMatrix::Identity(r, r);
    const CMatrix w = packed.topLeftCorner(r, r).triangularView<Eigen::Upper>().adjoint().solve(rhs);
    CMatrix q_thin = qr.householderQ() * CMatrix::Identity(c, r);
    count(tally, 2 * u64(r) * u64(r) * u64(c) + u64(r) * u64(r) * u64(r));
    return q_thin * w;
}

CMatrix pinv_left(const CMatrix& a, double tol, OpTally* tally) {
    if (a.rows() < a.cols()) throw ShapeError("pinv_left: expected a tall matrix, got " + shape_of(a));
    try {
        return pinv_right(a.adjoint(), tol, tally).adjoint();
    } catch (const SingularityError&) {
        std::ostringstream os;
        os << "pinv_left: " << a.rows() << "x" << a.cols() << " matrix is rank deficient";
        throw SingularityError(os.str(), a.rows(), a.cols());
    }
}

CMatrix dft_matrix(Eigen::Index n) {
    if (n < 1) throw ShapeError("dft_matrix: n must be >= 1");
    CMatrix f(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            // reduce j*k mod n first so large products keep full phase accuracy
            const auto jk = static_cast<double>((j * k) % n);
            f(j, k) = std::polar(1.0, -2.0 * std::numbers::pi * jk / static_cast<double>(n));
        }
    }
    return f;
}

CMatrix row_diag(const CMatrix& a, Eigen::Index i) {
    if (i < 0 || i >= a.rows()) {
        throw ShapeError("row_diag: row " + std::to_string(i) + " out of range for " + shape_of(a));
    }
    return a.row(i).transpose().asDiagonal();
}

CMatrix multiply(const CMatrix& a, const CMatrix& b, OpTally* tally) {
    if (a.cols() != b.rows()) {
        throw ShapeError("multiply: inner dimensions differ (" + shape_of(a) + " * " + shape_of(b) + ")");
    }
    count(tally, u64(a.rows()) * u64(a.cols()) * u64(b.cols()));
    return a * b;
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

}  // namespace risce
