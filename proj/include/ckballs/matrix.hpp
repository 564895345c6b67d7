#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace ckballs {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Carrier for similarity matrices Q,
/// canonical matrix units and polynomial evaluations of operator tuples.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols);
    ComplexMatrix(int rows, int cols, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * cols_ + j];
    }

    std::span<const cplx> data() const { return entries_; }
    std::span<cplx> data() { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    std::vector<cplx> apply(std::span<const cplx> x) const;

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> entries_;
};

/// Gauss-Jordan inverse with partial pivoting. Throws on (numerically)
/// singular input.
ComplexMatrix inverse(const ComplexMatrix& m);

ComplexMatrix diag_matrix(std::span<const cplx> d);

}  // namespace ckballs
