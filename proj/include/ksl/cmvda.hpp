#pragma once

#include "ksl/components.hpp"
#include "ksl/spectral.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ksl {

/// Whitened effective subspace: the training representation becomes the rows
/// of U_r^T, and the implied kernel matrix U_r U_r^T has eigenvalues in {0,1}.
struct WhitenedModel {
    Eigen::MatrixXd u_r;       // N x r
    Eigen::VectorXd lambda_r;  // r source eigenvalues (for pseudo-inversion)
    int n = 0;
    int rank = 0;

    bool full_rank() const { return rank == n; }
    Eigen::MatrixXd representation() const { return u_r.transpose(); }
    Eigen::MatrixXd gram() const { return u_r * u_r.transpose(); }
};

WhitenedModel whiten(const SpectralModel& model);

/// Orthonormal basis of the whitened space led by the scaled class
/// indicators b_c = sqrt(N_c) e_c (ordered by descending Rayleigh score
/// 1/N_c, ties by class index), completed per class block by modified
/// Gram-Schmidt against the class indicator. N columns in total.
struct IndicatorBasis {
    Eigen::MatrixXd vectors;          // N x N, ordered columns
    std::vector<int> leading_class;   // class of column i, i < C
    std::vector<double> leading_score;  // 1/N_c per leading column
    int num_classes = 0;
};

IndicatorBasis indicator_basis(const ClassIndicators& ind);

/// Training CMVDA embedding. When the source kernel has full rank the first
/// C rows are the exact scaled one-hot rows (entries 1/sqrt(N_c)); otherwise
/// the basis is routed through the rank-r projector U_r U_r^T.
Eigen::MatrixXd cmvda_embed_train(const WhitenedModel& wm, const IndicatorBasis& basis,
                                  const ClassIndicators& ind, int m);

/// Same, for an arbitrary orthonormal basis (e.g. the random CMVDA-R basis).
Eigen::MatrixXd cmvda_embed_train(const WhitenedModel& wm, const Eigen::MatrixXd& basis_cols,
                                  int m);

/// Out-of-sample CMVDA embedding of kernel columns k against the training
/// set: column t = B^T U_r Lambda_r^{-1} U_r^T k_t. Consistent with
/// cmvda_embed_train on training columns of K when the rank is full.
Eigen::MatrixXd cmvda_embed_test(const WhitenedModel& wm, const Eigen::MatrixXd& basis_cols,
                                 const Eigen::MatrixXd& k_cols, int m);

/// Seeded random orthonormal basis whose first vector is 1/sqrt(N); the rest
/// come from Gaussian draws via modified Gram-Schmidt with re-draw on
/// near-linear dependence.
Eigen::MatrixXd cmvda_r_basis(int n, std::uint64_t seed);

/// Discriminant per-axis score (2/N) sum_k (lambda/N_k) cos^2(axis, e_k);
/// with lambda = 1 this is the whitened-space CMVCA score of the axis and
/// equals (2/N) times its Rayleigh score.
double discriminant_axis_score(const Eigen::VectorXd& axis, const ClassIndicators& ind,
                               double lambda = 1.0);

/// Reorder basis columns by descending Rayleigh score (ties keep
/// construction order).
Eigen::MatrixXd order_basis_by_rayleigh(const Eigen::MatrixXd& basis_cols,
                                        const ClassIndicators& ind);

} // namespace ksl
