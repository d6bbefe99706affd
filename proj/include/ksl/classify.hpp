#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ksl {

// Nearest class centroid in whatever embedding space the caller provides.
struct CentroidModel {
    Eigen::MatrixXd centroids;  // M x C, one column per class

    int num_classes() const { return static_cast<int>(centroids.cols()); }
    int dim() const { return static_cast<int>(centroids.rows()); }
};

// Column-per-sample embedding plus dense class labels. Every class in
// 0..num_classes-1 must appear at least once.
CentroidModel fit_centroids(const Eigen::MatrixXd& embedding, const std::vector<int>& labels,
                            int num_classes);

// Euclidean nearest centroid; distance ties go to the smallest class id.
int predict(const CentroidModel& model, const Eigen::VectorXd& point);
std::vector<int> predict(const CentroidModel& model, const Eigen::MatrixXd& embedding);

// Fraction of matching entries.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual);

} // namespace ksl
