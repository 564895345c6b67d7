#include "ckballs/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ckballs {

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("hermitian: matrix not square");
    if (mat_.rows() < 1) throw std::invalid_argument("hermitian: dimension must be >= 1");
    if (!mat_.all_finite()) throw std::invalid_argument("hermitian: non-finite entries");
    const double scale = std::max(1.0, mat_.max_abs());
    const int n = mat_.rows();
    for (int i = 0; i < n; ++i) {
        if (std::abs(mat_(i, i).imag()) > 1e-12 * scale)
            throw std::invalid_argument("hermitian: diagonal entry has imaginary part");
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(mat_(i, j) - std::conj(mat_(j, i))) > 1e-12 * scale)
                throw std::invalid_argument("hermitian: asymmetry beyond tolerance");
        }
    }
    // symmetrize so A == A* holds exactly
    for (int i = 0; i < n; ++i) {
        mat_(i, i) = mat_(i, i).real();
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
            mat_(i, j) = v;
            mat_(j, i) = std::conj(v);
        }
    }
}

HermitianMatrix HermitianMatrix::all_ones(int n) {
    ComplexMatrix m(n, n);
    for (auto& e : m.data()) e = 1.0;
    return HermitianMatrix(std::move(m));
}

double HermitianMatrix::max_abs_diagonal() const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i) m = std::max(m, std::abs(mat_(i, i).real()));
    return m;
}

HermitianMatrix schur_product(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("schur_product: dimension mismatch");
    ComplexMatrix out(a.dim(), a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) * b(i, j);
    return HermitianMatrix(std::move(out));
}

EigDecomposition hermitian_eig(const HermitianMatrix& a) {
    const int n = a.dim();
    ComplexMatrix work = a.matrix();
    ComplexMatrix vecs = ComplexMatrix::identity(n);
    const double fro = work.frobenius_norm();
    const double off_target = std::max(1e-300, 5e-16 * fro * n);

    auto off_norm = [&]() {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) sum += 2.0 * std::norm(work(i, j));
        return std::sqrt(sum);
    };

    constexpr int kSweepCap = 100;
    int sweep = 0;
    for (; sweep < kSweepCap; ++sweep) {
        if (off_norm() <= off_target) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx beta = work(p, q);
                const double babs = std::abs(beta);
                if (babs <= 1e-300) continue;
                const double alpha = work(p, p).real();
                const double gamma = work(q, q).real();
                const cplx phase = beta / babs;
                const double tau = (gamma - alpha) / (2.0 * babs);
                const double sgn = tau >= 0.0 ? 1.0 : -1.0;
                const double t = -sgn / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sigma = s * phase;

                // A <- J* A J with the rotation supported on rows/cols (p, q)
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx aip = work(i, p);
                    const cplx aiq = work(i, q);
                    work(i, p) = c * aip + std::conj(sigma) * aiq;
                    work(i, q) = -sigma * aip + c * aiq;
                    work(p, i) = std::conj(work(i, p));
                    work(q, i) = std::conj(work(i, q));
                }
                work(p, p) = alpha * c * c + 2.0 * s * c * babs + gamma * s * s;
                work(q, q) = alpha * s * s - 2.0 * s * c * babs + gamma * c * c;
                work(p, q) = 0.0;
                work(q, p) = 0.0;

                for (int i = 0; i < n; ++i) {
                    const cplx vip = vecs(i, p);
                    const cplx viq = vecs(i, q);
                    vecs(i, p) = c * vip + std::conj(sigma) * viq;
                    vecs(i, q) = -sigma * vip + c * viq;
                }
            }
        }
    }
    if (sweep == kSweepCap && off_norm() > off_target) {
        throw std::runtime_error("hermitian_eig: no convergence after 100 sweeps, off-diagonal residual " +
                                 std::to_string(off_norm()));
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return work(i, i).real() < work(j, j).real(); });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = work(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = vecs(i, order[j]);
    }
    return out;
}

namespace {

enum class CholeskyOutcome { psd, inconclusive };

// Semidefinite Cholesky sweep on the Schur complement; conclusive "psd" only
// when every pivot clears 10*tol*scale.
CholeskyOutcome cholesky_probe(const HermitianMatrix& a, double tol, double scale) {
    const int n = a.dim();
    ComplexMatrix s = a.matrix();
    const double clear = 10.0 * tol * scale;
    for (int j = 0; j < n; ++j) {
        const double d = s(j, j).real();
        if (d < clear) return CholeskyOutcome::inconclusive;
        for (int r = j + 1; r < n; ++r) {
            for (int col = j + 1; col <= r; ++col) {
                const cplx v = s(r, col) - s(r, j) * std::conj(s(col, j)) / d;
                s(r, col) = v;
                s(col, r) = std::conj(v);
            }
        }
    }
    return CholeskyOutcome::psd;
}

}  // namespace

PsdReport psd_check(const HermitianMatrix& a, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("psd_check: tol must be positive");
    const double scale = std::max(1.0, a.max_abs_diagonal());

    PsdReport report;
    const auto eig = hermitian_eig(a);
    report.min_eigenvalue = eig.eigenvalues.front();
    report.witness.resize(a.dim());
    for (int i = 0; i < a.dim(); ++i) report.witness[i] = eig.eigenvectors(i, 0);

    if (cholesky_probe(a, tol, scale) == CholeskyOutcome::psd) {
        report.is_psd = true;
    } else {
        report.is_psd = report.min_eigenvalue >= -tol * scale;
    }
    return report;
}

double operator_norm(const ComplexMatrix& a) {
    if (!a.all_finite()) throw std::invalid_argument("operator_norm: non-finite entries");
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const HermitianMatrix gram(a.adjoint() * a);
    const auto eig = hermitian_eig(gram);
    return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

HermitianMatrix sqrt_psd(const HermitianMatrix& a, double tol) {
    const auto eig = hermitian_eig(a);
    const double scale = std::max(1.0, a.max_abs_diagonal());
    const int n = a.dim();
    ComplexMatrix scaled(n, n);
    for (int j = 0; j < n; ++j) {
        const double lambda = eig.eigenvalues[j];
        if (lambda < -tol * scale)
            throw std::invalid_argument("sqrt_psd: matrix is not positive semidefinite");
        const double r = std::sqrt(std::max(0.0, lambda));
        for (int i = 0; i < n; ++i) scaled(i, j) = eig.eigenvectors(i, j) * r;
    }
    return HermitianMatrix(scaled * eig.eigenvectors.adjoint());
}

double similarity_rep_norm(const HermitianMatrix& q, std::span<const cplx> w, double tol) {
    const int n = q.dim();
    if (static_cast<int>(w.size()) != n)
        throw std::invalid_argument("similarity_rep_norm: point dimension mismatch");
    const auto eig = hermitian_eig(q);
    const double scale = std::max(1.0, q.max_abs_diagonal());
    if (eig.eigenvalues.front() <= tol * scale)
        throw std::invalid_argument("similarity_rep_norm: not invertible");

    ComplexMatrix root(n, n), inv_root(n, n);
    for (int j = 0; j < n; ++j) {
        const double r = std::sqrt(eig.eigenvalues[j]);
        for (int i = 0; i < n; ++i) {
            root(i, j) = eig.eigenvectors(i, j) * r;
            inv_root(i, j) = eig.eigenvectors(i, j) / r;
        }
    }
    const ComplexMatrix q_half = root * eig.eigenvectors.adjoint();
    const ComplexMatrix q_inv_half = inv_root * eig.eigenvectors.adjoint();
    std::vector<cplx> wv(w.begin(), w.end());
    return operator_norm(q_half * diag_matrix(wv) * q_inv_half);
}

}  // namespace ckballs
