#pragma once

#include "ksl/dataset.hpp"

#include <Eigen/Dense>

namespace ksl {

enum class KernelKind { gaussian, linear };

struct KernelSpec {
    KernelKind kind = KernelKind::gaussian;
    double sigma = 1.0;  // gaussian only

    static KernelSpec gaussian(double sigma);
    static KernelSpec linear();
    void validate() const;
};

/// Symmetric N x N kernel matrix. Symmetry is exact by construction
/// (each unordered pair evaluated once).
struct KernelMatrix {
    Eigen::MatrixXd values;

    int size() const { return static_cast<int>(values.rows()); }
};

/// Kernel function value for a single pair.
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Mean Euclidean distance over all N(N-1)/2 unordered distinct pairs.
/// Self-pairs are excluded. Throws on N < 2 and on coincident data.
double sigma_heuristic(const Eigen::MatrixXd& rows);
double sigma_heuristic(const Dataset& ds);

/// Kernel matrix of a sample-per-row matrix under the given spec.
KernelMatrix gram(const Eigen::MatrixXd& rows, const KernelSpec& spec);
KernelMatrix gram(const Dataset& ds, const KernelSpec& spec);

/// Kernel vector k with k_i = kappa(x_i, x) against the training rows.
Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& rows, const Eigen::VectorXd& x,
                              const KernelSpec& spec);
Eigen::VectorXd kernel_vector(const Dataset& train, const Eigen::VectorXd& x, const KernelSpec& spec);

/// Kernel vectors for every row of `points` (T x D), returned as N x T columns.
Eigen::MatrixXd kernel_columns(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& points,
                               const KernelSpec& spec);
Eigen::MatrixXd kernel_columns(const Dataset& train, const Eigen::MatrixXd& points, const KernelSpec& spec);

} // namespace ksl
