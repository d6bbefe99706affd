#pragma once

#include "ksl/kernel.hpp"
#include "ksl/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace ksl {

enum class ApproxMethod { nystrom, rff };

// Explicit feature representation of the training set. `representation` holds
// one q-dimensional feature vector per training sample, column per sample, so
// the approximate Gram matrix is representation^T * representation.
struct ApproxFeatures {
    ApproxMethod method = ApproxMethod::nystrom;
    Eigen::MatrixXd representation;  // q x N

    // Nystrom state.
    std::vector<int> reference_indices;    // rows of the training set, ascending
    Eigen::MatrixXd reference_points;      // n x D
    Eigen::MatrixXd transform;             // q x n, Lambda^{-1/2} U^T of the reference Gram
    KernelSpec spec = KernelSpec::gaussian(1.0);

    // Random Fourier state.
    Eigen::MatrixXd frequencies;  // n x D
    Eigen::VectorXd phases;       // n
    double scale = 0.0;           // sqrt(2 / n)

    std::uint64_t seed = 0;

    int feature_dim() const { return static_cast<int>(representation.rows()); }
    int sample_count() const { return static_cast<int>(representation.cols()); }

    // Map out-of-sample points into the same feature space. `rows` holds one
    // point per row, matching the training feature layout.
    Eigen::VectorXd map_point(const Eigen::VectorXd& point) const;
    Eigen::MatrixXd map_rows(const Eigen::MatrixXd& rows) const;
};

// Nystrom features from `n` reference samples drawn uniformly without
// replacement. Reference eigenpairs below the relative rank tolerance are
// dropped, so q may come out smaller than n.
ApproxFeatures nystrom(const Eigen::MatrixXd& features, const KernelSpec& spec, int n,
                       std::uint64_t seed, double rank_tol = 1e-10);

// Random Fourier features for the Gaussian kernel with bandwidth sigma:
// z(x) = sqrt(2/n) cos(Wx + b) with Gaussian frequencies and uniform phases.
ApproxFeatures rff(const Eigen::MatrixXd& features, double sigma, int n, std::uint64_t seed);

// Spectral model of the approximate Gram matrix, computed from the thin SVD
// of the representation instead of forming the N x N matrix. Right singular
// vectors become the eigenvectors and squared singular values the
// eigenvalues, then the usual rank and sign conventions apply.
SpectralModel subspace_from_features(const ApproxFeatures& features, double rank_tol = 1e-10);

// Kernel columns of the approximate kernel between the training set and the
// given points: representation^T * map_rows(points), shaped N x T.
Eigen::MatrixXd approx_kernel_columns(const ApproxFeatures& features,
                                      const Eigen::MatrixXd& points);

} // namespace ksl
