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

#pragma once

#include <vector>

#include "blindcfo/sigmodel.hpp"
#include "blindcfo/types.hpp"

/// Blind identification of the virtual P x K mixing matrix from fourth-order statistics
/// (whitening, cumulant eigen-matrices, Jacobi joint diagonalization) and least-squares recovery
/// of the decoupled, still CFO-rotated user streams.
namespace blindcfo::bss
{

struct Whitening
{
    CMatrix transform; // K x P
    CMatrix inverse;   // P x K, pseudo-inverse of transform
    CMatrix whitened;  // K x N
    CVector mean;      // P, the removed sample mean
    bool mean_removed = true;
    double noise_floor = 0.0; // subtracted from the signal eigenvalues
};

/// K^2 Hermitian K x K matrices spanning the fourth-order cumulant eigen-matrices of the whitened data.
struct CumulantSet
{
    std::vector<CMatrix> matrices;
};

struct JointDiagonalization
{
    CMatrix rotation;                     // K x K unitary
    std::vector<double> objective_history; // summed squared diagonal mass, before sweep 1 and after each sweep
    int sweeps = 0;
    bool converged = false;
};

struct SeparationResult
{
    CMatrix mixing_estimate; // P x K, A * Perm * Lambda up to estimation error
    CMatrix streams;         // K x N, empty until ls_equalize has run
};

inline constexpr int max_jacobi_sweeps = 100;

/// Dominant-subspace whitening: W = (D - s I)^{-1/2} U^H over the K largest eigenpairs of the sample
/// covariance, where s is the mean of the P - K smallest eigenvalues (s = 0 when P == K).
/// Throws degenerate_mixture when the covariance has rank below K.
Whitening whiten(const CMatrix &observations, int sources);
Whitening whiten(const sigmodel::PolyphaseObservations &observations, int sources);

/// Sample cumulant matrices Q_pq[a,b] = Cum[z_a, z_b*, z_p, z_q*], Gaussian part removed with biased
/// (1/N) moment estimates, combined into the Hermitian set
///   Q_pp,  (Q_pq + Q_qp) / 2,  (Q_pq - Q_qp) / 2j   for p < q.
CumulantSet cumulant_matrices(const CMatrix &whitened);

/// Summed squared modulus of the diagonals of every matrix in the set.
double diagonal_mass(const CumulantSet &set);

/// Jacobi joint diagonalization of Hermitian matrices. Stops after the first sweep in which no
/// rotation sine exceeds sweep_tolerance, or after max_jacobi_sweeps.
JointDiagonalization joint_diagonalize(const CumulantSet &set, double sweep_tolerance);

/// 1e-8 / sqrt(N)
double default_sweep_tolerance(Eigen::Index samples);

/// A_hat = pinv(W) * V. The returned streams are left empty.
SeparationResult estimate_mixing(const sigmodel::PolyphaseObservations &observations, int sources);

/// (A^H A)^{-1} A^H Y. Throws singular_equalizer if A_hat is (numerically) rank deficient.
CMatrix ls_equalize(const CMatrix &mixing_estimate, const CMatrix &observations);

} // namespace blindcfo::bss
