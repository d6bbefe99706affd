#pragma once

#include "ksl/components.hpp"
#include "ksl/dataset.hpp"
#include "ksl/kernel.hpp"
#include "ksl/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace ksl::testing {

// Random labeled dataset with loose cluster structure so class means differ:
// class means drawn on a sphere of radius `spread`, unit-variance noise.
// Every class id appears at least once.
inline Dataset random_dataset(std::uint64_t seed, int n, int c, int dim, double spread = 2.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> pick_class(0, c - 1);

    Eigen::MatrixXd means(c, dim);
    for (int k = 0; k < c; ++k) {
        for (int j = 0; j < dim; ++j) means(k, j) = gauss(rng);
        means.row(k) *= spread / means.row(k).norm();
    }

    Eigen::MatrixXd features(n, dim);
    std::vector<long long> labels(n);
    for (int i = 0; i < n; ++i) {
        const int k = i < c ? i : pick_class(rng);
        labels[i] = k;
        for (int j = 0; j < dim; ++j) features(i, j) = means(k, j) + gauss(rng);
    }
    return make_dataset(std::move(features), labels);
}

// Criterion computed straight from kernel matrix entries, no eigenanalysis:
// sum_k sum_m p_k p_m (e_k^T K e_k - 2 e_k^T K e_m + e_m^T K e_m).
inline double kernel_entry_total(const Eigen::MatrixXd& k, const ClassIndicators& ind) {
    const int c = ind.num_classes();
    Eigen::MatrixXd quad(c, c);  // quad(a, b) = e_a^T K e_b
    for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b)
            quad(a, b) = ind.indicator.col(a).dot(k * ind.indicator.col(b));
    double total = 0.0;
    for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b)
            total += ind.priors[a] * ind.priors[b] *
                     (quad(a, a) - 2.0 * quad(a, b) + quad(b, b));
    return total;
}

// Criterion via class means in the effective embedding:
// 2 sum_k p_k ||mean_k - mean||^2 over columns of Lambda^{1/2} U^T.
inline double mean_distance_total(const SpectralModel& model, const ClassIndicators& ind) {
    const Eigen::MatrixXd embedding = embed_training(model);  // r x N
    const Eigen::VectorXd total_mean = embedding * ind.total;
    double total = 0.0;
    for (int k = 0; k < ind.num_classes(); ++k) {
        const Eigen::VectorXd class_mean = embedding * ind.indicator.col(k);
        total += ind.priors[k] * (class_mean - total_mean).squaredNorm();
    }
    return 2.0 * total;
}

// Minimum of (total - subset sum)^2 over all M-subsets of the scores,
// by exhaustive enumeration.
inline double brute_force_min_delta(const Eigen::VectorXd& scores, int m) {
    const int n = static_cast<int>(scores.size());
    const double total = scores.sum();
    double best = -1.0;
    std::vector<int> index(m);
    for (int i = 0; i < m; ++i) index[i] = i;
    while (true) {
        double sum = 0.0;
        for (int i : index) sum += scores(i);
        const double delta = (total - sum) * (total - sum);
        if (best < 0.0 || delta < best) best = delta;

        int pos = m - 1;
        while (pos >= 0 && index[pos] == n - m + pos) --pos;
        if (pos < 0) break;
        ++index[pos];
        for (int i = pos + 1; i < m; ++i) index[i] = index[i - 1] + 1;
    }
    return best;
}

} // namespace ksl::testing
