#pragma once

#include "ksl/dataset.hpp"
#include "ksl/spectral.hpp"

#include <Eigen/Dense>
#include <vector>

namespace ksl {

/// Class indicator vectors: column c of `indicator` is e_c with entries
/// 1/N_c on class-c rows and 0 elsewhere; `total` is e with all entries 1/N.
struct ClassIndicators {
    int n = 0;
    std::vector<int> counts;
    std::vector<double> priors;
    std::vector<std::vector<int>> rows;  // per-class row indices, ascending
    Eigen::MatrixXd indicator;           // N x C
    Eigen::VectorXd total;               // N

    int num_classes() const { return static_cast<int>(counts.size()); }
};

ClassIndicators class_indicators(const Dataset& ds);
ClassIndicators class_indicators(const std::vector<int>& labels, int num_classes);

/// Per-eigen-pair scores of the orderings this library supports.
///
/// lambda    eigenvalue (kPCA order)
/// entropy   (sqrt(lambda_d) u_d^T 1)^2 (kECA order)
/// alignment weighted indicator-difference alignment D_d of u_d
/// cmvca     lambda_d * D_d (additive class-mean-distance contribution)
/// rayleigh  sum_k (1/N_k) cos^2(u_d, e_k) (per-axis discrimination score)
struct ComponentScores {
    Eigen::VectorXd lambda;
    Eigen::VectorXd entropy;
    Eigen::VectorXd alignment;
    Eigen::VectorXd cmvca;
    Eigen::VectorXd rayleigh;

    int size() const { return static_cast<int>(lambda.size()); }
};

enum class Criterion { kpca, keca, cmvca, rayleigh };

const Eigen::VectorXd& scores_for(const ComponentScores& scores, Criterion criterion);

/// A selected, ordered set of projection directions. Self-contained:
/// retains the eigen-pairs needed for out-of-sample projection.
struct SubspaceMap {
    std::vector<int> dims;      // indices into the model's eigen order
    Criterion criterion = Criterion::cmvca;
    Eigen::VectorXd lambdas;    // per selected dim
    Eigen::MatrixXd basis;      // N x M, u_d columns in selected order
};

/// Squared distance between the class-k and class-m mean vectors in the
/// effective subspace: sum_d lambda_d (u_d^T (e_k - e_m))^2.
double class_pair_distance(const SpectralModel& model, const ClassIndicators& ind, int k, int m);

/// Weighted pairwise distance between all class means:
/// D = sum_k sum_m p_k p_m class_pair_distance(k, m).
double criterion_total(const SpectralModel& model, const ClassIndicators& ind);

ComponentScores score_components(const SpectralModel& model, const ClassIndicators& ind);

/// Rayleigh score of an arbitrary unit axis in sample-coefficient space:
/// sum_k (1/N_k) cos^2(axis, e_k). cos against a zero vector is 0.
double rayleigh_axis_score(const Eigen::VectorXd& axis, const ClassIndicators& ind);

/// Keep the M dimensions with the largest score under the criterion
/// (ties broken by ascending eigen index). For cmvca this minimizes
/// (D - D_selected)^2 because the scores are nonnegative and additive.
SubspaceMap select(const SpectralModel& model, const ComponentScores& scores,
                   Criterion criterion, int m);

/// Project N x T kernel columns through the map: row l of the result is the
/// dims[l] component of every column.
Eigen::MatrixXd project_dataset(const SubspaceMap& map, const Eigen::MatrixXd& k_cols);

/// KDA-style projector built in the whitened effective subspace: the top-M
/// eigenvectors of the between-class scatter of whitened class means.
/// At most C-1 directions carry nonzero eigenvalue.
struct KdaMap {
    Eigen::MatrixXd projector;   // M x N, applied to kernel columns
    Eigen::MatrixXd directions;  // r x M, the scatter eigenvectors in whitened coordinates
    int dims = 0;
};

KdaMap kda_baseline(const SpectralModel& model, const ClassIndicators& ind, int m);

Eigen::MatrixXd project_dataset(const KdaMap& map, const Eigen::MatrixXd& k_cols);

} // namespace ksl
