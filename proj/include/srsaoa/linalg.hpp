// SPDX-License-Identifier: Apache-2.0
//
// srsaoa - 5G NR SRS uplink angle-of-arrival simulation laboratory
// Copyright (C) 2026 srsaoa contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef srsaoa_linalg_H
#define srsaoa_linalg_H

#include <algorithm>
#include <numeric>

#include "srsaoa/common.hpp"

namespace srsaoa
{

// Dense row-major complex matrix. Sized for the small systems that appear
// here (covariances up to M*m = 24, selection blocks, 2x2 solves).
struct cmatrix
{
    size_t rows = 0;
    size_t cols = 0;
    cvec data;

    cmatrix() = default;
    cmatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, cpx(0.0, 0.0)) {}

    cpx &operator()(size_t i, size_t j) { return data[i * cols + j]; }
    const cpx &operator()(size_t i, size_t j) const { return data[i * cols + j]; }

    static cmatrix identity(size_t n)
    {
        cmatrix m(n, n);
        for (size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    cmatrix adjoint() const
    {
        cmatrix m(cols, rows);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    double frobenius_norm() const
    {
        double s = 0.0;
        for (const auto &v : data)
            s += std::norm(v);
        return std::sqrt(s);
    }
};

inline cmatrix matmul(const cmatrix &a, const cmatrix &b)
{
    if (a.cols != b.rows)
        throw std::invalid_argument("matmul: dimension mismatch");
    cmatrix c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t k = 0; k < a.cols; ++k)
        {
            const cpx aik = a(i, k);
            if (aik == cpx(0.0, 0.0))
                continue;
            for (size_t j = 0; j < b.cols; ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

// c = a^H * b
inline cmatrix matmul_adjoint_left(const cmatrix &a, const cmatrix &b)
{
    if (a.rows != b.rows)
        throw std::invalid_argument("matmul_adjoint_left: dimension mismatch");
    cmatrix c(a.cols, b.cols);
    for (size_t k = 0; k < a.rows; ++k)
        for (size_t i = 0; i < a.cols; ++i)
        {
            const cpx aki = std::conj(a(k, i));
            for (size_t j = 0; j < b.cols; ++j)
                c(i, j) += aki * b(k, j);
        }
    return c;
}

inline cmatrix select_rows(const cmatrix &a, const std::vector<size_t> &idx)
{
    cmatrix c(idx.size(), a.cols);
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < a.cols; ++j)
            c(i, j) = a(idx[i], j);
    return c;
}

struct eig_result
{
    std::vector<double> eigenvalues; // descending
    cmatrix eigenvectors;            // columns match eigenvalue order
};

// Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
// Off-diagonal entries are annihilated pairwise with unitary plane rotations
// until the remaining off-diagonal mass is below tol * ||A||_F.
inline eig_result hermitian_eig(const cmatrix &input, double tol = 1e-12)
{
    if (input.rows != input.cols)
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    const size_t n = input.rows;

    const double scale = input.frobenius_norm();
    double herm_err = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            herm_err = std::max(herm_err, std::abs(input(i, j) - std::conj(input(j, i))));
    if (herm_err > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

    cmatrix a = input;
    // symmetrize to kill roundoff asymmetry before iterating
    for (size_t i = 0; i < n; ++i)
    {
        for (size_t j = i + 1; j < n; ++j)
        {
            const cpx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
        a(i, i) = cpx(a(i, i).real(), 0.0);
    }

    cmatrix v = cmatrix::identity(n);
    const double thresh = tol * std::max(scale, 1e-300);

    auto offdiag_mass = [&]() {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 60 && offdiag_mass() > thresh; ++sweep)
    {
        for (size_t p = 0; p + 1 < n; ++p)
        {
            for (size_t q = p + 1; q < n; ++q)
            {
                const cpx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= thresh / static_cast<double>(n * n))
                    continue;
                const cpx phase = apq / r; // e^{j phi}

                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cpx s_pos = s * phase;             //  s e^{j phi}
                const cpx s_neg = s * std::conj(phase);  //  s e^{-j phi}

                // A <- G^H A G with G = [[c, s e^{j phi}], [-s e^{-j phi}, c]]
                for (size_t k = 0; k < n; ++k)
                {
                    const cpx akp = a(k, p);
                    const cpx akq = a(k, q);
                    a(k, p) = c * akp - s_neg * akq;
                    a(k, q) = s_pos * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k)
                {
                    const cpx apk = a(p, k);
                    const cpx aqk = a(q, k);
                    a(p, k) = c * apk - s_pos * aqk;
                    a(q, k) = s_neg * apk + c * aqk;
                }
                a(p, q) = cpx(0.0, 0.0);
                a(q, p) = cpx(0.0, 0.0);
                a(p, p) = cpx(a(p, p).real(), 0.0);
                a(q, q) = cpx(a(q, q).real(), 0.0);

                for (size_t k = 0; k < n; ++k)
                {
                    const cpx vkp = v(k, p);
                    const cpx vkq = v(k, q);
                    v(k, p) = c * vkp - s_neg * vkq;
                    v(k, q) = s_pos * vkp + c * vkq;
                }
            }
        }
    }

    if (offdiag_mass() > thresh)
        throw std::runtime_error("hermitian_eig: Jacobi iteration did not converge");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return a(i, i).real() > a(j, j).real(); });

    eig_result res;
    res.eigenvalues.resize(n);
    res.eigenvectors = cmatrix(n, n);
    for (size_t j = 0; j < n; ++j)
    {
        res.eigenvalues[j] = a(order[j], order[j]).real();
        for (size_t i = 0; i < n; ++i)
            res.eigenvectors(i, j) = v(i, order[j]);
    }
    return res;
}

// Eigenvalues and eigenvectors of a general complex 2x2 (or 1x1) matrix in
// closed form. Larger systems do not occur: source counts are capped at
// M - 1 = 2 throughout.
struct eig_general_result
{
    cvec eigenvalues;
    cmatrix eigenvectors; // columns
};

inline eig_general_result eig_general_small(const cmatrix &a)
{
    if (a.rows != a.cols || a.rows == 0 || a.rows > 2)
        throw std::invalid_argument("eig_general_small: supported sizes are 1x1 and 2x2");

    eig_general_result res;
    if (a.rows == 1)
    {
        res.eigenvalues = {a(0, 0)};
        res.eigenvectors = cmatrix::identity(1);
        return res;
    }

    const cpx tr = a(0, 0) + a(1, 1);
    const cpx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cpx disc = std::sqrt(tr * tr - 4.0 * det);
    const cpx l1 = 0.5 * (tr + disc);
    const cpx l2 = 0.5 * (tr - disc);

    res.eigenvalues = {l1, l2};
    res.eigenvectors = cmatrix(2, 2);
    for (size_t k = 0; k < 2; ++k)
    {
        const cpx lam = res.eigenvalues[k];
        // (A - lam I) v = 0; pick the numerically larger row construction
        cpx v0, v1;
        const cpx r1[2] = {a(0, 0) - lam, a(0, 1)};
        const cpx r2[2] = {a(1, 0), a(1, 1) - lam};
        if (std::abs(r1[0]) + std::abs(r1[1]) >= std::abs(r2[0]) + std::abs(r2[1]))
        {
            v0 = -r1[1];
            v1 = r1[0];
        }
        else
        {
            v0 = -r2[1];
            v1 = r2[0];
        }
        double nv = std::sqrt(std::norm(v0) + std::norm(v1));
        if (nv == 0.0) // diagonal matrix: fall back to the standard basis
        {
            v0 = (k == 0) ? 1.0 : 0.0;
            v1 = (k == 0) ? 0.0 : 1.0;
            nv = 1.0;
        }
        res.eigenvectors(0, k) = v0 / nv;
        res.eigenvectors(1, k) = v1 / nv;
    }
    return res;
}

inline cmatrix inverse_small(const cmatrix &a)
{
    if (a.rows != a.cols || a.rows == 0 || a.rows > 2)
        throw std::invalid_argument("inverse_small: supported sizes are 1x1 and 2x2");
    cmatrix inv(a.rows, a.rows);
    if (a.rows == 1)
    {
        if (a(0, 0) == cpx(0.0, 0.0))
            throw std::runtime_error("inverse_small: singular matrix");
        inv(0, 0) = 1.0 / a(0, 0);
        return inv;
    }
    const cpx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (std::abs(det) == 0.0)
        throw std::runtime_error("inverse_small: singular matrix");
    inv(0, 0) = a(1, 1) / det;
    inv(0, 1) = -a(0, 1) / det;
    inv(1, 0) = -a(1, 0) / det;
    inv(1, 1) = a(0, 0) / det;
    return inv;
}

// Least-squares solve of A X = B through the normal equations. A is tall
// (rows >= cols), cols <= 2.
inline cmatrix solve_least_squares(const cmatrix &a, const cmatrix &b)
{
    if (a.rows < a.cols)
        throw std::invalid_argument("solve_least_squares: system is underdetermined");
    const cmatrix aha = matmul_adjoint_left(a, a);
    const cmatrix ahb = matmul_adjoint_left(a, b);
    return matmul(inverse_small(aha), ahb);
}

} // namespace srsaoa

#endif
