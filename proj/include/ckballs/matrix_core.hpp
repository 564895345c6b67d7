#pragma once

#include <span>
#include <vector>

#include "ckballs/matrix.hpp"

namespace ckballs {

/// Complex square matrix with Hermitian symmetry enforced at construction.
/// Asymmetry beyond 1e-12 relative to the entry scale is rejected; accepted
/// input is symmetrized so downstream code can rely on A == A* exactly.
class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m);
    HermitianMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
        : HermitianMatrix(ComplexMatrix(rows)) {}

    static HermitianMatrix identity(int n) { return HermitianMatrix(ComplexMatrix::identity(n)); }
    static HermitianMatrix all_ones(int n);

    int dim() const { return mat_.rows(); }
    const cplx& operator()(int i, int j) const { return mat_(i, j); }
    const ComplexMatrix& matrix() const { return mat_; }

    double max_abs_diagonal() const;

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix(a.mat_ + b.mat_);
    }

private:
    ComplexMatrix mat_;
};

struct PsdReport {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    std::vector<cplx> witness;  // unit eigenvector for the smallest eigenvalue
};

struct EigDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // unitary, columns match eigenvalues
};

/// Entrywise (Schur) product of Hermitian matrices of equal dimension.
HermitianMatrix schur_product(const HermitianMatrix& a, const HermitianMatrix& b);

/// Positive semidefiniteness at relative tolerance: passes when the smallest
/// eigenvalue is >= -tol * max(1, largest |diagonal entry|). A Cholesky sweep
/// with pivot threshold decides the clear cases; pivots within 10*tol*scale
/// of zero fall back to the eigensolver.
PsdReport psd_check(const HermitianMatrix& a, double tol = 1e-10);

/// Cyclic Jacobi rotations with a fixed sweep cap; deterministic.
/// Reconstruction residual is <= 1e-10 * ||A||.
EigDecomposition hermitian_eig(const HermitianMatrix& a);

/// Largest singular value via hermitian_eig of A*A.
double operator_norm(const ComplexMatrix& a);

/// Square root of a PSD matrix through its eigendecomposition; eigenvalues
/// within tolerance below zero are clamped to zero.
HermitianMatrix sqrt_psd(const HermitianMatrix& a, double tol = 1e-10);

/// ||Q^{1/2} Diag(w) Q^{-1/2}|| for PSD invertible Q. Throws "not invertible"
/// when the smallest eigenvalue of Q is at or below tolerance.
double similarity_rep_norm(const HermitianMatrix& q, std::span<const cplx> w, double tol = 1e-10);

}  // namespace ckballs
