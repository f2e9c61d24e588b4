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

#include <catch2/catch_amalgamated.hpp>

#include "srsaoa/linalg.hpp"
#include "srsaoa/rng.hpp"

using namespace srsaoa;

namespace
{
// random Hermitian PSD built as B B^H with a few extra columns
cmatrix random_psd(size_t n, uint64_t seed)
{
    rng_stream rng(seed);
    cmatrix b(n, n + 2);
    for (auto &v : b.data)
        v = rng.complex_normal(1.0);
    cmatrix r(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
        {
            cpx acc(0.0, 0.0);
            for (size_t k = 0; k < b.cols; ++k)
                acc += b(i, k) * std::conj(b(j, k));
            r(i, j) = acc;
        }
    return r;
}

double reconstruction_error(const cmatrix &r, const eig_result &eig)
{
    const size_t n = r.rows;
    cmatrix rebuilt(n, n);
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                rebuilt(i, j) += eig.eigenvalues[k] * eig.eigenvectors(i, k) *
                                 std::conj(eig.eigenvectors(j, k));
    double err = 0.0;
    for (size_t i = 0; i < r.data.size(); ++i)
        err += std::norm(r.data[i] - rebuilt.data[i]);
    return std::sqrt(err) / std::max(r.frobenius_norm(), 1e-300);
}
} // namespace

TEST_CASE("hermitian eigendecomposition on canonical matrices")
{
    SECTION("identity")
    {
        const eig_result eig = hermitian_eig(cmatrix::identity(3));
        for (double lam : eig.eigenvalues)
            CHECK(lam == Catch::Approx(1.0).margin(1e-14));
    }

    SECTION("diagonal matrix keeps the standard basis")
    {
        cmatrix d(3, 3);
        d(0, 0) = 3.0;
        d(1, 1) = 2.0;
        d(2, 2) = 1.0;
        const eig_result eig = hermitian_eig(d);
        CHECK(eig.eigenvalues[0] == Catch::Approx(3.0).margin(1e-14));
        CHECK(eig.eigenvalues[1] == Catch::Approx(2.0).margin(1e-14));
        CHECK(eig.eigenvalues[2] == Catch::Approx(1.0).margin(1e-14));
        for (size_t k = 0; k < 3; ++k)
            CHECK(std::abs(std::abs(eig.eigenvectors(k, k)) - 1.0) < 1e-14);
    }

    SECTION("non-Hermitian input is rejected")
    {
        cmatrix bad(2, 2);
        bad(0, 1) = cpx(1.0, 0.0);
        bad(1, 0) = cpx(0.5, 0.0);
        CHECK_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
    }
}

TEST_CASE("hermitian eigendecomposition reconstructs random PSD matrices")
{
    for (const size_t n : {2, 3, 6, 12, 24})
    {
        for (uint64_t seed = 0; seed < 4; ++seed)
        {
            const cmatrix r = random_psd(n, mix_seed(n, seed));
            const eig_result eig = hermitian_eig(r);

            CHECK(reconstruction_error(r, eig) < 1e-9);

            // descending, nonnegative up to roundoff
            double trace = 0.0;
            for (size_t i = 0; i < n; ++i)
                trace += r(i, i).real();
            for (size_t k = 0; k < n; ++k)
            {
                if (k > 0)
                    CHECK(eig.eigenvalues[k] <= eig.eigenvalues[k - 1] + 1e-12);
                CHECK(eig.eigenvalues[k] >= -1e-10 * trace);
            }

            // orthonormal eigenvectors and bounded residuals
            for (size_t a = 0; a < n; ++a)
            {
                for (size_t b = 0; b < n; ++b)
                {
                    cpx dot(0.0, 0.0);
                    for (size_t i = 0; i < n; ++i)
                        dot += std::conj(eig.eigenvectors(i, a)) * eig.eigenvectors(i, b);
                    CHECK(std::abs(dot - (a == b ? cpx(1.0, 0.0) : cpx(0.0, 0.0))) < 1e-10);
                }
                double resid = 0.0;
                for (size_t i = 0; i < n; ++i)
                {
                    cpx rv(0.0, 0.0);
                    for (size_t j = 0; j < n; ++j)
                        rv += r(i, j) * eig.eigenvectors(j, a);
                    resid += std::norm(rv - eig.eigenvalues[a] * eig.eigenvectors(i, a));
                }
                CHECK(std::sqrt(resid) < 1e-9 * r.frobenius_norm());
            }
        }
    }
}

TEST_CASE("closed-form general eigensolver")
{
    rng_stream rng(31);
    for (int t = 0; t < 50; ++t)
    {
        cmatrix a(2, 2);
        for (auto &v : a.data)
            v = rng.complex_normal(1.0);
        const eig_general_result eig = eig_general_small(a);
        for (size_t k = 0; k < 2; ++k)
        {
            // residual (A - lambda I) v = 0
            for (size_t i = 0; i < 2; ++i)
            {
                cpx rv(0.0, 0.0);
                for (size_t j = 0; j < 2; ++j)
                    rv += a(i, j) * eig.eigenvectors(j, k);
                rv -= eig.eigenvalues[k] * eig.eigenvectors(i, k);
                CHECK(std::abs(rv) < 1e-10 * a.frobenius_norm());
            }
        }
    }

    CHECK_THROWS_AS(eig_general_small(cmatrix(3, 3)), std::invalid_argument);
}

TEST_CASE("small least squares")
{
    rng_stream rng(32);
    for (int t = 0; t < 20; ++t)
    {
        cmatrix a(5, 2);
        cmatrix x(2, 2);
        for (auto &v : a.data)
            v = rng.complex_normal(1.0);
        for (auto &v : x.data)
            v = rng.complex_normal(1.0);
        const cmatrix b = matmul(a, x);
        const cmatrix got = solve_least_squares(a, b);
        for (size_t i = 0; i < x.data.size(); ++i)
            CHECK(std::abs(got.data[i] - x.data[i]) < 1e-10);
    }

    CHECK_THROWS_AS(solve_least_squares(cmatrix(1, 2), cmatrix(1, 1)),
                    std::invalid_argument);
}
