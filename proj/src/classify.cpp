#include "ksl/classify.hpp"

#include "ksl/error.hpp"

#include <string>

namespace ksl {

CentroidModel fit_centroids(const Eigen::MatrixXd& embedding, const std::vector<int>& labels,
                            int num_classes) {
    if (num_classes < 1) throw domain_error("fit_centroids: need at least one class");
    if (static_cast<int>(labels.size()) != embedding.cols())
        throw domain_error("fit_centroids: label count does not match embedding columns");

    CentroidModel model;
    model.centroids.setZero(embedding.rows(), num_classes);
    std::vector<int> counts(num_classes, 0);
    for (int j = 0; j < embedding.cols(); ++j) {
        const int label = labels[j];
        if (label < 0 || label >= num_classes)
            throw domain_error("fit_centroids: label " + std::to_string(label) +
                               " outside 0.." + std::to_string(num_classes - 1));
        model.centroids.col(label) += embedding.col(j);
        ++counts[label];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[c] == 0)
            throw domain_error("fit_centroids: class " + std::to_string(c) + " has no samples");
        model.centroids.col(c) /= counts[c];
    }
    return model;
}

int predict(const CentroidModel& model, const Eigen::VectorXd& point) {
    if (point.size() != model.dim())
        throw domain_error("predict: point dimension does not match centroids");
    int best = 0;
    double best_d2 = (model.centroids.col(0) - point).squaredNorm();
    for (int c = 1; c < model.num_classes(); ++c) {
        const double d2 = (model.centroids.col(c) - point).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

std::vector<int> predict(const CentroidModel& model, const Eigen::MatrixXd& embedding) {
    std::vector<int> out(embedding.cols());
    for (int j = 0; j < embedding.cols(); ++j) {
        const Eigen::VectorXd point = embedding.col(j);
        out[j] = predict(model, point);
    }
    return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw domain_error("accuracy: prediction and label counts differ");
    if (predicted.empty()) throw domain_error("accuracy: empty prediction set");
    int hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == actual[i]) ++hits;
    return static_cast<double>(hits) / predicted.size();
}

} // namespace ksl
