#include "ksl/dataset.hpp"

#include "ksl/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace ksl {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& value) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, value);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_int(const std::string& s, long long& value) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, value);
    return res.ec == std::errc() && res.ptr == last;
}

} // namespace

Dataset make_dataset(Eigen::MatrixXd features, const std::vector<long long>& raw_labels) {
    const int n = static_cast<int>(features.rows());
    if (n == 0) throw data_error("dataset is empty");
    if (static_cast<int>(raw_labels.size()) != n)
        throw data_error("label count does not match row count");
    if (!features.allFinite()) throw data_error("dataset contains non-finite feature values");

    Dataset ds;
    ds.features = std::move(features);
    ds.labels.resize(n);

    std::unordered_map<long long, int> remap;
    for (int i = 0; i < n; ++i) {
        auto it = remap.find(raw_labels[i]);
        if (it == remap.end()) {
            int id = static_cast<int>(ds.label_values.size());
            remap.emplace(raw_labels[i], id);
            ds.label_values.push_back(raw_labels[i]);
            ds.labels[i] = id;
        } else {
            ds.labels[i] = it->second;
        }
    }

    const int c = static_cast<int>(ds.label_values.size());
    ds.class_counts.assign(c, 0);
    for (int lab : ds.labels) ++ds.class_counts[lab];
    ds.class_priors.resize(c);
    for (int k = 0; k < c; ++k)
        ds.class_priors[k] = static_cast<double>(ds.class_counts[k]) / n;
    return ds;
}

Dataset load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);

    std::string line;
    int line_no = 0;
    if (has_header) {
        if (!std::getline(in, line)) throw data_error("empty file: " + path);
        ++line_no;
    }

    std::vector<std::vector<double>> rows;
    std::vector<long long> labels;
    int dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (dim < 0) {
            if (fields.size() < 2)
                throw data_error(path + ":" + std::to_string(line_no) +
                                 ": expected at least one feature and a label");
            dim = static_cast<int>(fields.size()) - 1;
        }
        if (static_cast<int>(fields.size()) != dim + 1)
            throw data_error(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(dim + 1) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<double> row(dim);
        for (int j = 0; j < dim; ++j) {
            if (!parse_double(fields[j], row[j]))
                throw data_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric field '" + fields[j] + "'");
        }
        long long label = 0;
        if (!parse_int(fields.back(), label))
            throw data_error(path + ":" + std::to_string(line_no) +
                             ": non-integer label '" + fields.back() + "'");
        rows.push_back(std::move(row));
        labels.push_back(label);
    }
    if (rows.empty()) throw data_error("no data rows in file: " + path);

    Eigen::MatrixXd features(static_cast<int>(rows.size()), dim);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
        for (int j = 0; j < dim; ++j) features(i, j) = rows[i][j];
    return make_dataset(std::move(features), labels);
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open file for writing: " + path);
    char buf[64];
    for (int i = 0; i < ds.sample_count(); ++i) {
        for (int j = 0; j < ds.feature_dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
            out << buf << ',';
        }
        out << ds.labels[i] << '\n';
    }
}

Dataset make_blobs(const std::vector<int>& n_per_class,
                   const std::vector<Eigen::VectorXd>& means,
                   double stddev,
                   std::uint64_t seed) {
    if (means.empty()) throw domain_error("make_blobs: means list is empty");
    if (!(stddev > 0)) throw domain_error("make_blobs: stddev must be positive");
    if (n_per_class.size() != means.size())
        throw domain_error("make_blobs: counts and means differ in length");
    const int dim = static_cast<int>(means.front().size());
    for (const auto& m : means)
        if (static_cast<int>(m.size()) != dim)
            throw domain_error("make_blobs: means have inconsistent dimensions");
    int total = 0;
    for (int cnt : n_per_class) {
        if (cnt <= 0) throw domain_error("make_blobs: counts must be positive");
        total += cnt;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, stddev);
    Eigen::MatrixXd features(total, dim);
    std::vector<long long> labels(total);
    int row = 0;
    for (int c = 0; c < static_cast<int>(means.size()); ++c) {
        for (int i = 0; i < n_per_class[c]; ++i, ++row) {
            for (int j = 0; j < dim; ++j) features(row, j) = means[c](j) + gauss(rng);
            labels[row] = c;
        }
    }
    return make_dataset(std::move(features), labels);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw domain_error("split: train_fraction must lie in (0,1)");
    const int c = ds.num_classes();
    for (int k = 0; k < c; ++k)
        if (ds.class_counts[k] < 2)
            throw data_error("split: class " + std::to_string(k) +
                             " has fewer than 2 samples, cannot stratify");

    std::mt19937_64 rng(seed);
    std::vector<char> in_train(ds.sample_count(), 0);
    for (int k = 0; k < c; ++k) {
        std::vector<int> rows;
        for (int i = 0; i < ds.sample_count(); ++i)
            if (ds.labels[i] == k) rows.push_back(i);
        // Fisher-Yates so the draw sequence is pinned to (seed, class order).
        for (int i = static_cast<int>(rows.size()) - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(rows[i], rows[pick(rng)]);
        }
        const int nc = ds.class_counts[k];
        int n_train = static_cast<int>(std::floor(train_fraction * nc + 0.5));
        n_train = std::max(1, std::min(nc - 1, n_train));
        for (int i = 0; i < n_train; ++i) in_train[rows[i]] = 1;
    }

    auto take = [&](bool train_side) {
        std::vector<int> keep;
        for (int i = 0; i < ds.sample_count(); ++i)
            if ((in_train[i] != 0) == train_side) keep.push_back(i);
        Dataset part;
        part.features.resize(static_cast<int>(keep.size()), ds.feature_dim());
        part.labels.resize(keep.size());
        for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
            part.features.row(i) = ds.features.row(keep[i]);
            part.labels[i] = ds.labels[keep[i]];
        }
        part.label_values = ds.label_values;
        part.class_counts.assign(c, 0);
        for (int lab : part.labels) ++part.class_counts[lab];
        part.class_priors.resize(c);
        for (int k = 0; k < c; ++k)
            part.class_priors[k] =
                static_cast<double>(part.class_counts[k]) / part.sample_count();
        return part;
    };
    return {take(true), take(false)};
}

} // namespace ksl
