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

#ifndef srsaoa_subspace_H
#define srsaoa_subspace_H

#include "srsaoa/array.hpp"
#include "srsaoa/linalg.hpp"
#include "srsaoa/waveform.hpp"

namespace srsaoa
{

// M antennas x N observations; observations are the occupied subcarriers of
// the SRS symbols of one slot, flattened.
using frequency_snapshots = cmatrix;

// R = Y Y^H / N. Hermitian by construction, PSD up to roundoff.
inline cmatrix sample_covariance(const frequency_snapshots &y)
{
    if (y.cols == 0)
        throw std::invalid_argument("sample_covariance: no observations");
    const size_t m = y.rows, n = y.cols;
    cmatrix r(m, m);
    for (size_t i = 0; i < m; ++i)
    {
        for (size_t j = i; j < m; ++j)
        {
            cpx acc(0.0, 0.0);
            for (size_t k = 0; k < n; ++k)
                acc += y(i, k) * std::conj(y(j, k));
            acc /= static_cast<double>(n);
            r(i, j) = acc;
            r(j, i) = std::conj(acc);
        }
    }
    return r;
}

// Source count from the eigenvalue profile: eigenvalues that stand a factor
// above the smallest one are counted as signal, clamped to [1, max_sources].
inline int estimate_num_sources(const std::vector<double> &eigenvalues_desc, int max_sources,
                                double threshold_factor = 10.0)
{
    if (eigenvalues_desc.empty())
        throw std::invalid_argument("estimate_num_sources: empty eigenvalue list");
    const double floor = eigenvalues_desc.back();
    int d = 0;
    for (double lam : eigenvalues_desc)
        if (lam > threshold_factor * floor)
            ++d;
    return std::clamp(d, 1, max_sources);
}

struct subspace_split
{
    cmatrix signal_basis; // M x D
    cmatrix noise_basis;  // M x (M - D)
    std::vector<double> eigenvalues; // descending
};

inline subspace_split make_subspace_split(const eig_result &eig, int d)
{
    const size_t m = eig.eigenvectors.rows;
    if (d < 1 || static_cast<size_t>(d) > m)
        throw std::invalid_argument("make_subspace_split: invalid source count");

    subspace_split s;
    s.eigenvalues = eig.eigenvalues;
    s.signal_basis = cmatrix(m, d);
    s.noise_basis = cmatrix(m, m - d);
    for (size_t i = 0; i < m; ++i)
    {
        for (size_t j = 0; j < static_cast<size_t>(d); ++j)
            s.signal_basis(i, j) = eig.eigenvectors(i, j);
        for (size_t j = d; j < m; ++j)
            s.noise_basis(i, j - d) = eig.eigenvectors(i, j);
    }
    return s;
}

inline subspace_split make_subspace_split(const cmatrix &covariance, int d)
{
    return make_subspace_split(hermitian_eig(covariance), d);
}

// Orthogonality measure 1 / (a^H U_n U_n^H a) on each grid angle.
inline std::vector<double> music_spectrum(const subspace_split &split, const ula_geometry &geom,
                                          const std::vector<double> &angle_grid_deg)
{
    if (split.noise_basis.cols == 0)
        throw std::invalid_argument("music_spectrum: noise subspace is empty (D = M)");
    if (angle_grid_deg.empty())
        throw std::invalid_argument("music_spectrum: empty angle grid");

    std::vector<double> spec(angle_grid_deg.size());
    for (size_t g = 0; g < angle_grid_deg.size(); ++g)
    {
        const cvec a = steering_vector(geom, angle_grid_deg[g]);
        double denom = 0.0;
        for (size_t j = 0; j < split.noise_basis.cols; ++j)
        {
            cpx acc(0.0, 0.0);
            for (size_t i = 0; i < split.noise_basis.rows; ++i)
                acc += std::conj(split.noise_basis(i, j)) * a[i];
            denom += std::norm(acc);
        }
        spec[g] = 1.0 / std::max(denom, 1e-300);
    }
    return spec;
}

struct angle_estimate
{
    double angle_deg = 0.0;
    double power = 0.0; // ordering metric: spectrum peak height or fitted path power
};

struct doa_result
{
    std::vector<angle_estimate> sources; // descending by power
    bool complete = true;                // false when fewer than D sources materialized
};

namespace detail
{
inline std::vector<double> make_angle_grid(double step_deg)
{
    std::vector<double> grid;
    for (double th = -90.0 + step_deg; th < 90.0 - 0.5 * step_deg; th += step_deg)
        grid.push_back(th);
    return grid;
}
} // namespace detail

// Spectral peak search over (-90, 90): the D largest local maxima, each
// refined by a three-point parabola on the orthogonality denominator.
inline doa_result music_from_split(const subspace_split &split, const ula_geometry &geom, int d,
                                   double grid_step_deg)
{
    const std::vector<double> grid = detail::make_angle_grid(grid_step_deg);
    const std::vector<double> spec = music_spectrum(split, geom, grid);

    std::vector<size_t> maxima;
    for (size_t i = 0; i < spec.size(); ++i)
    {
        const bool left_ok = (i == 0) || spec[i] > spec[i - 1];
        const bool right_ok = (i + 1 == spec.size()) || spec[i] >= spec[i + 1];
        if (left_ok && right_ok)
            maxima.push_back(i);
    }
    std::sort(maxima.begin(), maxima.end(),
              [&](size_t a, size_t b) { return spec[a] > spec[b]; });

    doa_result res;
    for (size_t r = 0; r < maxima.size() && static_cast<int>(r) < d; ++r)
    {
        const size_t i = maxima[r];
        double theta = grid[i];
        if (i > 0 && i + 1 < spec.size())
        {
            // refine on 1/spectrum, which is smooth through the null
            const double dl = 1.0 / spec[i - 1];
            const double dc = 1.0 / spec[i];
            const double dr = 1.0 / spec[i + 1];
            const double denom = dl - 2.0 * dc + dr;
            if (denom > 0.0)
                theta += 0.5 * grid_step_deg * (dl - dr) / denom;
        }
        res.sources.push_back({theta, spec[i]});
    }
    res.complete = static_cast<int>(res.sources.size()) == d;
    return res;
}

inline doa_result music_estimate(const frequency_snapshots &y, const ula_geometry &geom, int d,
                                 double grid_step_deg = 0.1)
{
    if (d < 1 || d >= static_cast<int>(y.rows))
        throw std::invalid_argument("music_estimate: need 1 <= D <= M - 1");
    return music_from_split(make_subspace_split(sample_covariance(y), d), geom, d,
                            grid_step_deg);
}

namespace detail
{
// Per-source powers from the covariance: diag(pinv(A) R pinv(A)^H) for the
// fitted steering matrix A.
inline std::vector<double> source_powers(const cmatrix &r, const ula_geometry &geom,
                                         const std::vector<double> &angles_deg)
{
    const size_t d = angles_deg.size();
    cmatrix a(geom.n_elements, d);
    for (size_t j = 0; j < d; ++j)
    {
        const cvec col = steering_vector(geom, angles_deg[j]);
        for (int i = 0; i < geom.n_elements; ++i)
            a(i, j) = col[i];
    }
    const cmatrix gram_inv = inverse_small(matmul_adjoint_left(a, a));
    const cmatrix proj = matmul(gram_inv, matmul_adjoint_left(a, r)); // D x M
    // powers = diag(proj * A * gram_inv^H); compute column by column
    std::vector<double> powers(d, 0.0);
    const cmatrix t = matmul(proj, matmul(a, gram_inv.adjoint())); // D x D
    for (size_t j = 0; j < d; ++j)
        powers[j] = std::max(0.0, t(j, j).real());
    return powers;
}

inline double shift_phase_to_angle_deg(double phase, const ula_geometry &geom, bool &valid)
{
    const double kappa = -phase * geom.wavelength() / (2.0 * pi * geom.element_spacing);
    valid = std::abs(kappa) <= 1.0;
    return valid ? rad2deg(std::asin(kappa)) : 0.0;
}
} // namespace detail

// Shift invariance between the two maximal subarrays: S2 = S1 P in the least
// squares sense, eigenvalue phases of P map to arrival angles in closed form.
inline doa_result esprit_from_split(const subspace_split &split, const cmatrix &covariance,
                                    const ula_geometry &geom)
{
    const size_t m = split.signal_basis.rows;
    const size_t d = split.signal_basis.cols;
    if (d < 1 || d > static_cast<size_t>(2) || d >= m)
        throw std::invalid_argument("esprit: need 1 <= D <= min(2, M - 1)");

    std::vector<size_t> lower(m - 1), upper(m - 1);
    for (size_t i = 0; i + 1 < m; ++i)
    {
        lower[i] = i;
        upper[i] = i + 1;
    }
    const cmatrix s1 = select_rows(split.signal_basis, lower);
    const cmatrix s2 = select_rows(split.signal_basis, upper);
    const cmatrix p = solve_least_squares(s1, s2);
    const eig_general_result pe = eig_general_small(p);

    std::vector<double> angles;
    for (const cpx &lam : pe.eigenvalues)
    {
        bool valid = false;
        const double th = detail::shift_phase_to_angle_deg(std::arg(lam), geom, valid);
        if (valid)
            angles.push_back(th);
    }

    doa_result res;
    if (!angles.empty())
    {
        std::vector<double> powers(angles.size(), 0.0);
        try
        {
            powers = detail::source_powers(covariance, geom, angles);
        }
        catch (const std::runtime_error &)
        {
            // coincident angles make the fit singular; keep eigenvalue order
        }
        for (size_t i = 0; i < angles.size(); ++i)
            res.sources.push_back({angles[i], powers[i]});
        std::sort(res.sources.begin(), res.sources.end(),
                  [](const angle_estimate &a, const angle_estimate &b) { return a.power > b.power; });
    }
    res.complete = res.sources.size() == d;
    return res;
}

inline doa_result esprit_estimate(const frequency_snapshots &y, const ula_geometry &geom, int d)
{
    if (d < 1 || d >= static_cast<int>(y.rows))
        throw std::invalid_argument("esprit_estimate: need 1 <= D <= M - 1");
    const cmatrix r = sample_covariance(y);
    return esprit_from_split(make_subspace_split(r, d), r, geom);
}

// ---------------------------------------------------------------------------
// Joint angle/delay estimation: 2D ESPRIT on the frequency-smoothed
// block-Hankel stack of the channel estimate.
// ---------------------------------------------------------------------------

// Per-antenna, per-pilot-subcarrier channel, M x N_pilot.
using channel_estimate = cmatrix;

struct angle_delay_pair
{
    double angle_deg = 0.0;
    double delay_samples = 0.0; // pilot-grid units, in [0, L) with L = N_pilot
    double power = 0.0;
};

struct jade_result
{
    std::vector<angle_delay_pair> pairs; // descending by power
    bool complete = true;
};

// Block-Hankel smoothing: row (i*m + r) holds H[i, r + col], so columns are
// spanned by Kronecker products a(theta) (x) f_m(psi) with
// f_m(psi) = [1, psi, ..., psi^(m-1)].
inline cmatrix jade_smoothed_matrix(const channel_estimate &h, int m)
{
    if (m < 2 || static_cast<size_t>(m) >= h.cols)
        throw std::invalid_argument("jade: stacking factor out of range");
    const size_t n_col = h.cols - m + 1;
    cmatrix g(h.rows * m, n_col);
    for (size_t i = 0; i < h.rows; ++i)
        for (int r = 0; r < m; ++r)
            for (size_t c = 0; c < n_col; ++c)
                g(i * m + r, c) = h(i, r + c);
    return g;
}

namespace detail
{
inline jade_result jade_from_basis(const cmatrix &signal_basis, const channel_estimate &h,
                                   const ula_geometry &geom, int m, double rho)
{
    const size_t n_ant = h.rows;
    const size_t d = signal_basis.cols;
    const double l_period = static_cast<double>(h.cols);

    std::vector<size_t> tau1, tau2, th1, th2;
    for (size_t i = 0; i < n_ant; ++i)
    {
        for (int r = 0; r < m; ++r)
        {
            const size_t row = i * m + r;
            if (r <= m - 2)
                tau1.push_back(row);
            if (r >= 1)
                tau2.push_back(row);
            if (i + 1 < n_ant)
                th1.push_back(row);
            if (i >= 1)
                th2.push_back(row);
        }
    }

    const cmatrix phi_tau =
        solve_least_squares(select_rows(signal_basis, tau1), select_rows(signal_basis, tau2));
    const cmatrix phi_theta =
        solve_least_squares(select_rows(signal_basis, th1), select_rows(signal_basis, th2));

    // Joint diagonalization through a generic mixture: distinct (angle, delay)
    // pairs separate under almost any rho; retry once if the first draw is
    // defective.
    eig_general_result mix;
    bool usable = false;
    for (double rho_try : {rho, (rho == 0.3) ? 0.7 : 0.3})
    {
        cmatrix phi_mix = phi_tau;
        for (size_t i = 0; i < phi_mix.data.size(); ++i)
            phi_mix.data[i] += rho_try * phi_theta.data[i];
        mix = eig_general_small(phi_mix);
        if (mix.eigenvalues.size() < 2 ||
            std::abs(mix.eigenvalues[0] - mix.eigenvalues[1]) > 1e-8)
        {
            usable = true;
            break;
        }
    }
    if (!usable)
        throw std::runtime_error("jade: joint eigenbasis is defective");

    const cmatrix w = mix.eigenvectors;
    const cmatrix w_inv = inverse_small(w);
    const cmatrix diag_theta = matmul(w_inv, matmul(phi_theta, w));
    const cmatrix diag_tau = matmul(w_inv, matmul(phi_tau, w));

    jade_result res;
    std::vector<double> angles;
    std::vector<double> delays;
    for (size_t i = 0; i < d; ++i)
    {
        bool valid = false;
        const double th = shift_phase_to_angle_deg(std::arg(diag_theta(i, i)), geom, valid);
        if (!valid)
            continue;
        double tau = -std::arg(diag_tau(i, i)) * l_period / (2.0 * pi);
        tau = std::fmod(tau, l_period);
        if (tau < 0.0)
            tau += l_period;
        angles.push_back(th);
        delays.push_back(tau);
    }

    // Path powers from a least-squares fit of H onto the recovered
    // angle/delay basis; the Gram matrix separates over the two factors.
    const size_t n_found = angles.size();
    if (n_found > 0)
    {
        cmatrix gram(n_found, n_found);
        cmatrix rhs(n_found, 1);
        std::vector<cvec> steer(n_found);
        for (size_t p = 0; p < n_found; ++p)
            steer[p] = steering_vector(geom, angles[p]);
        for (size_t p = 0; p < n_found; ++p)
        {
            for (size_t q = 0; q < n_found; ++q)
            {
                cpx sa(0.0, 0.0);
                for (size_t i = 0; i < n_ant; ++i)
                    sa += std::conj(steer[p][i]) * steer[q][i];
                cpx sf(0.0, 0.0);
                const double dph = 2.0 * pi * (delays[p] - delays[q]) / l_period;
                for (size_t k = 0; k < h.cols; ++k)
                    sf += cpx(std::cos(dph * k), std::sin(dph * k));
                gram(p, q) = sa * sf;
            }
            cpx acc(0.0, 0.0);
            for (size_t i = 0; i < n_ant; ++i)
            {
                for (size_t k = 0; k < h.cols; ++k)
                {
                    const double ph = 2.0 * pi * delays[p] * k / l_period;
                    acc += std::conj(steer[p][i]) * cpx(std::cos(ph), std::sin(ph)) * h(i, k);
                }
            }
            rhs(p, 0) = acc;
        }
        cmatrix coef;
        try
        {
            coef = matmul(inverse_small(gram), rhs);
        }
        catch (const std::runtime_error &)
        {
            coef = rhs; // degenerate fit: order by projection instead
        }
        for (size_t p = 0; p < n_found; ++p)
            res.pairs.push_back({angles[p], delays[p], std::norm(coef(p, 0))});
        std::sort(res.pairs.begin(), res.pairs.end(),
                  [](const angle_delay_pair &a, const angle_delay_pair &b) {
                      return a.power > b.power;
                  });
    }
    res.complete = res.pairs.size() == d;
    return res;
}
} // namespace detail

// Full JADE path: smooth, split off the rank-D basis, exploit both shift
// invariances, pair through the joint eigenbasis.
inline jade_result jade_esprit_estimate(const channel_estimate &h, const ula_geometry &geom,
                                        int d, int m, double rho = 0.3)
{
    if (m < 2)
        throw std::invalid_argument("jade: stacking factor must be at least 2");
    if (d < 1 || d > std::min<int>(static_cast<int>(h.rows), m) || d > 2)
        throw std::invalid_argument("jade: source count out of range");

    const cmatrix g = jade_smoothed_matrix(h, m);
    const cmatrix r = sample_covariance(g);
    const eig_result eig = hermitian_eig(r);
    if (eig.eigenvalues[d - 1] < 1e-12 * std::max(eig.eigenvalues[0], 1e-300))
        throw std::runtime_error("jade: effective rank below requested source count");

    cmatrix basis(g.rows, d);
    for (size_t i = 0; i < g.rows; ++i)
        for (int j = 0; j < d; ++j)
            basis(i, j) = eig.eigenvectors(i, j);
    return detail::jade_from_basis(basis, h, geom, m, rho);
}

} // namespace srsaoa

#endif
