#pragma once

// Test-side oracles, kept independent of the library paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "ckballs/matrix.hpp"
#include "ckballs/matrix_core.hpp"
#include "ckballs/oracle.hpp"
#include "ckballs/rng.hpp"

namespace testsupport {

using ckballs::cplx;
using ckballs::ComplexMatrix;
using ckballs::HermitianMatrix;
using ckballs::PointCk;
using ckballs::Rng;

// pseudo-hyperbolic distance on the open disk
inline double rho(cplx z, cplx w) { return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z); }

// closed-form eigenvalues of a 3x3 Hermitian matrix (trigonometric method);
// independent of the Jacobi path in the library
inline std::array<double, 3> eig3_closed_form(const HermitianMatrix& a) {
    const double p1 = std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2));
    const double q = (a(0, 0).real() + a(1, 1).real() + a(2, 2).real()) / 3.0;
    if (p1 < 1e-300) {
        std::array<double, 3> d{a(0, 0).real(), a(1, 1).real(), a(2, 2).real()};
        std::sort(d.begin(), d.end());
        return d;
    }
    const double p2 = (a(0, 0).real() - q) * (a(0, 0).real() - q) +
                      (a(1, 1).real() - q) * (a(1, 1).real() - q) +
                      (a(2, 2).real() - q) * (a(2, 2).real() - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    ComplexMatrix b(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            b(i, j) = (a(i, j) - (i == j ? cplx{q, 0.0} : cplx{0.0, 0.0})) / p;
    const cplx detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(detb.real() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    std::array<double, 3> out{e3, 3.0 * q - e1 - e3, e1};
    std::sort(out.begin(), out.end());
    return out;
}

// determinant by cofactor expansion; fine for the small fixtures used here
inline cplx det_small(const ComplexMatrix& m) {
    const int n = m.rows();
    if (n == 1) return m(0, 0);
    cplx acc = 0.0;
    double sign = 1.0;
    for (int c = 0; c < n; ++c) {
        ComplexMatrix minor(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int jj = 0;
            for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i - 1, jj++) = m(i, j);
            }
        }
        acc += sign * m(0, c) * det_small(minor);
        sign = -sign;
    }
    return acc;
}

inline HermitianMatrix random_hermitian(Rng& rng, int n, double scale = 1.0) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = scale * rng.normal();
        for (int j = i + 1; j < n; ++j) {
            const cplx v = scale * rng.complex_normal();
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return HermitianMatrix(std::move(m));
}

// unitary via Gram-Schmidt on a random complex Gaussian matrix
inline ComplexMatrix random_unitary(Rng& rng, int n) {
    ComplexMatrix m(n, n);
    for (auto& e : m.data()) e = rng.complex_normal();
    for (int c = 0; c < n; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            cplx proj = 0.0;
            for (int i = 0; i < n; ++i) proj += std::conj(m(i, prev)) * m(i, c);
            for (int i = 0; i < n; ++i) m(i, c) -= proj * m(i, prev);
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += std::norm(m(i, c));
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) m(i, c) /= norm;
    }
    return m;
}

// PSD with eigenvalues log-uniform in [1/cond, 1] * scale
inline HermitianMatrix random_psd(Rng& rng, int n, double cond, double scale = 1.0) {
    const ComplexMatrix u = random_unitary(rng, n);
    ComplexMatrix scaled(n, n);
    for (int c = 0; c < n; ++c) {
        const double lambda =
            scale * std::exp(std::log(1.0 / cond) * rng.uniform());
        for (int i = 0; i < n; ++i) scaled(i, c) = u(i, c) * lambda;
    }
    return HermitianMatrix(scaled * u.adjoint());
}

inline PointCk random_polydisk_point(Rng& rng, int k, double radius = 1.0) {
    PointCk p(k);
    for (auto& c : p) c = radius * rng.unit_disk();
    return p;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace testsupport
