#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ksl {

/// Labeled feature vectors with class partition bookkeeping.
///
/// Labels are dense ids 0..C-1; `label_values[c]` remembers the original
/// label that was remapped to id c (first-appearance order).
struct Dataset {
    Eigen::MatrixXd features;             // N x D, one sample per row
    std::vector<int> labels;              // dense class ids, 0..C-1
    std::vector<int> class_counts;        // N_c per class
    std::vector<double> class_priors;     // p_c = N_c / N
    std::vector<long long> label_values;  // dense id -> original label

    int sample_count() const { return static_cast<int>(features.rows()); }
    int feature_dim() const { return static_cast<int>(features.cols()); }
    int num_classes() const { return static_cast<int>(class_counts.size()); }
};

/// Build a Dataset from raw features and labels. Labels are remapped to a
/// dense 0..C-1 range preserving first-appearance order; class counts and
/// priors are computed; all feature values must be finite.
Dataset make_dataset(Eigen::MatrixXd features, const std::vector<long long>& raw_labels);

/// Load a comma-separated file where each row holds D numeric fields
/// followed by one integer label field. Throws data_error naming the
/// offending line on malformed rows, and on empty input.
Dataset load_csv(const std::string& path, bool has_header);

/// Write a Dataset in the same format load_csv reads (dense labels,
/// full-precision features).
void write_csv(const Dataset& ds, const std::string& path);

/// Isotropic Gaussian blobs, one per class. Identical (seed, parameters)
/// give bit-identical output on the same platform.
Dataset make_blobs(const std::vector<int>& n_per_class,
                   const std::vector<Eigen::VectorXd>& means,
                   double stddev,
                   std::uint64_t seed);

/// Stratified train/test split: round-half-up(train_fraction * N_c) samples
/// per class to train (at least 1, at most N_c - 1), rest to test.
/// Deterministic under seed. Throws data_error if a class has one sample.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed);

} // namespace ksl
