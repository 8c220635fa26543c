// SPDX-License-Identifier: Apache-2.0
//
// blindcfo: blind multiuser carrier-frequency offset estimation
// Copyright (C) 2026 The blindcfo authors
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

#include "blindcfo/bss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "blindcfo/error.hpp"

namespace blindcfo::bss
{

namespace
{

constexpr double rank_tolerance = 1e-10;

CMatrix hermitian_part(const CMatrix &m) { return (m + m.adjoint()) * 0.5; }

} // namespace

Whitening whiten(const CMatrix &observations, int sources)
{
    const Eigen::Index P = observations.rows();
    const Eigen::Index N = observations.cols();
    if (sources < 1 || sources > P)
        throw Error(ErrorCode::invalid_configuration, "source count must lie in [1, P]");
    if (N <= P)
        throw Error(ErrorCode::invalid_configuration, "whitening needs more samples than observation rows");

    Whitening w;
    w.mean = observations.rowwise().mean();
    const CMatrix centered = observations.colwise() - w.mean;
    const CMatrix cov = hermitian_part(centered * centered.adjoint() / static_cast<double>(N));

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov);
    const Eigen::VectorXd &values = eig.eigenvalues(); // ascending
    const double largest = values(P - 1);

    // Noise floor: mean of the P-K smallest eigenvalues (zero when P == K).
    w.noise_floor = P > sources ? values.head(P - sources).mean() : 0.0;
    const Eigen::VectorXd signal = values.tail(sources).array() - w.noise_floor;
    if (!(largest > 0.0) || signal(0) <= rank_tolerance * largest)
        throw Error(ErrorCode::degenerate_mixture,
                    "sample covariance has rank below K=" + std::to_string(sources));

    const CMatrix basis = eig.eigenvectors().rightCols(sources);
    const Eigen::VectorXd scale = signal.cwiseSqrt();
    w.transform = scale.cwiseInverse().asDiagonal() * basis.adjoint();
    w.inverse = basis * scale.asDiagonal();
    w.whitened = w.transform * centered;
    w.mean_removed = true;
    return w;
}

Whitening whiten(const sigmodel::PolyphaseObservations &observations, int sources)
{
    return whiten(observations.samples, sources);
}

CumulantSet cumulant_matrices(const CMatrix &whitened)
{
    const Eigen::Index K = whitened.rows();
    const Eigen::Index N = whitened.cols();
    if (K < 1)
        throw Error(ErrorCode::invalid_configuration, "no whitened sources");
    if (N < K * K)
        throw Error(ErrorCode::invalid_configuration, "cumulant estimation needs N >= K^2 samples");

    const double inv_n = 1.0 / static_cast<double>(N);
    const CMatrix &Z = whitened;
    const CMatrix R = Z * Z.adjoint() * inv_n;   // E[z_a z_b*]
    const CMatrix C = Z * Z.transpose() * inv_n; // E[z_a z_b]

    auto raw = [&](Eigen::Index p, Eigen::Index q) {
        const Eigen::RowVectorXcd weight = Z.row(p).array() * Z.row(q).conjugate().array();
        const CMatrix weighted = Z.array().rowwise() * weight.array();
        CMatrix Q = weighted * Z.adjoint() * inv_n;
        Q -= R * R(p, q);
        Q -= C.col(p) * C.col(q).adjoint();
        Q -= R.col(q) * R.row(p);
        return Q;
    };

    std::vector<CMatrix> q(static_cast<std::size_t>(K * K));
    for (Eigen::Index p = 0; p < K; ++p)
        for (Eigen::Index r = 0; r < K; ++r)
            q[static_cast<std::size_t>(p * K + r)] = raw(p, r);

    const cx two_j(0.0, 2.0);
    CumulantSet set;
    set.matrices.reserve(q.size());
    for (Eigen::Index p = 0; p < K; ++p)
        for (Eigen::Index r = 0; r < K; ++r)
        {
            const auto &pr = q[static_cast<std::size_t>(p * K + r)];
            const auto &rp = q[static_cast<std::size_t>(r * K + p)];
            if (p == r)
                set.matrices.push_back(hermitian_part(pr));
            else if (p < r)
                set.matrices.push_back(hermitian_part((pr + rp) * 0.5));
            else
                set.matrices.push_back(hermitian_part((rp - pr) / two_j));
        }
    return set;
}

double diagonal_mass(const CumulantSet &set)
{
    double mass = 0.0;
    for (const auto &m : set.matrices)
        mass += m.diagonal().squaredNorm();
    return mass;
}

JointDiagonalization joint_diagonalize(const CumulantSet &set, double sweep_tolerance)
{
    if (set.matrices.empty())
        throw Error(ErrorCode::invalid_configuration, "joint diagonalization needs at least one matrix");
    const Eigen::Index K = set.matrices.front().rows();

    CumulantSet work = set;
    JointDiagonalization out;
    out.rotation = CMatrix::Identity(K, K);
    out.objective_history.push_back(diagonal_mass(work));
    if (K == 1)
    {
        out.converged = true;
        return out;
    }

    const cx j(0.0, 1.0);
    for (int sweep = 0; sweep < max_jacobi_sweeps; ++sweep)
    {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < K; ++p)
            for (Eigen::Index q = p + 1; q < K; ++q)
            {
                // Gram matrix of g = [M_pp - M_qq, M_pq + M_qp, j (M_qp - M_pq)], real for Hermitian M
                Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
                for (const auto &m : work.matrices)
                {
                    const Eigen::Vector3d g((m(p, p) - m(q, q)).real(), (m(p, q) + m(q, p)).real(),
                                            (j * (m(q, p) - m(p, q))).real());
                    gram += g * g.transpose();
                }
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
                Eigen::Vector3d angles = eig.eigenvectors().col(2);
                if (angles(0) < 0.0)
                    angles = -angles;
                const double c = std::sqrt(0.5 + angles(0) / 2.0);
                const cx s = 0.5 * cx(angles(1), -angles(2)) / c;
                if (std::abs(s) <= sweep_tolerance)
                    continue;
                rotated = true;

                Eigen::Matrix2cd G;
                G << c, -std::conj(s), s, c;
                auto apply_cols = [&](CMatrix &m) {
                    const CVector cp = m.col(p);
                    const CVector cq = m.col(q);
                    m.col(p) = G(0, 0) * cp + G(1, 0) * cq;
                    m.col(q) = G(0, 1) * cp + G(1, 1) * cq;
                };
                apply_cols(out.rotation);
                for (auto &m : work.matrices)
                {
                    // rows: G^H * M(idx, :)
                    const Eigen::RowVectorXcd rp = m.row(p);
                    const Eigen::RowVectorXcd rq = m.row(q);
                    m.row(p) = std::conj(G(0, 0)) * rp + std::conj(G(1, 0)) * rq;
                    m.row(q) = std::conj(G(0, 1)) * rp + std::conj(G(1, 1)) * rq;
                    apply_cols(m);
                }
            }
        out.sweeps = sweep + 1;
        out.objective_history.push_back(diagonal_mass(work));
        if (!rotated)
        {
            out.converged = true;
            break;
        }
    }
    return out;
}

double default_sweep_tolerance(Eigen::Index samples)
{
    return 1e-8 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(samples, 1)));
}

SeparationResult estimate_mixing(const sigmodel::PolyphaseObservations &observations, int sources)
{
    const Eigen::Index N = observations.samples.cols();
    if (sources > observations.samples.rows())
        throw Error(ErrorCode::invalid_configuration, "oversampling factor must be >= number of users");
    if (N < static_cast<Eigen::Index>(sources) * sources)
        throw Error(ErrorCode::invalid_configuration, "too few samples for fourth-order statistics");

    const Whitening w = whiten(observations, sources);
    const CumulantSet set = cumulant_matrices(w.whitened);
    const JointDiagonalization jd = joint_diagonalize(set, default_sweep_tolerance(N));

    SeparationResult result;
    result.mixing_estimate = w.inverse * jd.rotation;
    return result;
}

CMatrix ls_equalize(const CMatrix &mixing_estimate, const CMatrix &observations)
{
    if (mixing_estimate.rows() != observations.rows())
        throw Error(ErrorCode::invalid_configuration, "mixing estimate and observations disagree on P");
    if (mixing_estimate.cols() > mixing_estimate.rows())
        throw Error(ErrorCode::singular_equalizer, "more sources than observation rows");

    Eigen::JacobiSVD<CMatrix> svd(mixing_estimate);
    const auto &sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(0) > 0.0) || sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw Error(ErrorCode::singular_equalizer, "mixing estimate is rank deficient");

    return mixing_estimate.colPivHouseholderQr().solve(observations);
}

} // namespace blindcfo::bss
