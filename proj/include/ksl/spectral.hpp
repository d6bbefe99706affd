#pragma once

#include "ksl/kernel.hpp"

#include <Eigen/Dense>
#include <vector>

namespace ksl {

/// Spectral decomposition of a PSD kernel matrix.
///
/// Eigenvalues are sorted descending; values below tau = rank_tol * lambda_1
/// are clamped to 0 and excluded from the rank. Eigenvector signs follow a
/// fixed convention (first entry of largest magnitude is positive) and exact
/// eigenvalue ties are ordered by the index of the first nonzero entry, so
/// repeated runs produce identical models.
///
/// `eigenvectors` holds one column per retained eigen-pair; decompose keeps
/// all N columns, while SVD-backed constructions may keep fewer.
struct SpectralModel {
    Eigen::VectorXd eigenvalues;   // descending, clamped at 0
    Eigen::MatrixXd eigenvectors;  // N x L, orthonormal columns
    int rank = 0;                  // count of eigenvalues > tau
    double rank_tol = 1e-10;
    double tau = 0.0;              // rank_tol * lambda_1

    int sample_count() const { return static_cast<int>(eigenvectors.rows()); }
};

SpectralModel decompose(const KernelMatrix& km, double rank_tol = 1e-10);

/// Effective-subspace training embedding: row d = sqrt(lambda_d) u_d^T,
/// for d = 1..rank. The Gram of the result reconstructs K to rank-r accuracy.
Eigen::MatrixXd embed_training(const SpectralModel& model);

/// Out-of-sample projection of a kernel vector onto the selected dimensions:
/// out_l = lambda_l^{-1/2} u_l^T k. Indices are 0-based positions in the
/// descending eigen order; requesting a dimension at or beyond the rank
/// throws rank_error.
Eigen::VectorXd project(const SpectralModel& model, const Eigen::VectorXd& k,
                        const std::vector<int>& dims);

/// Column-wise projection of an N x T block of kernel vectors.
Eigen::MatrixXd project_columns(const SpectralModel& model, const Eigen::MatrixXd& k_cols,
                                const std::vector<int>& dims);

/// Shared post-processing for eigen/SVD bases: sorts descending, applies the
/// sign convention and tie order, clamps sub-tau values. Used by decompose
/// and by the approximate-feature path.
SpectralModel finalize_spectrum(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                                double rank_tol);

} // namespace ksl
