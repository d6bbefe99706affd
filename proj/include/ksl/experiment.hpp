#pragma once

#include "ksl/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ksl {

enum class Method { kpca, keca, cmvca, rayleigh, kda, cmvda, cmvda_r };
enum class KernelMode { exact, nystrom, rff };

// Canonical method order used everywhere output order matters.
const std::vector<Method>& all_methods();
std::string method_name(Method method);
std::string kernel_mode_name(KernelMode mode);

// Gaussian blobs with class means at mutual Euclidean distance `distance`
// (scaled standard basis directions, so dim >= classes is required).
struct SyntheticSpec {
    int classes = 3;
    int per_class = 50;
    int dim = 3;
    double stddev = 1.0;
    double distance = 10.0;
    std::uint64_t seed = 1;
};

Dataset make_synthetic(const SyntheticSpec& spec);

struct ExperimentConfig {
    bool use_synthetic = true;  // cleared when data.path is set
    std::string data_path;
    bool has_header = false;
    SyntheticSpec synthetic;

    KernelMode kernel_mode = KernelMode::exact;
    bool sigma_is_heuristic = true;
    double sigma = 0.0;  // used when sigma_is_heuristic is false
    int approx_n = 0;    // reference/feature count for nystrom and rff

    std::vector<Method> methods = all_methods();
    bool m_grid_full = true;     // the "1..r" grid
    std::vector<int> m_grid;     // explicit grid otherwise, ascending unique
    double split_fraction = 0.5;
    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir = "out";

    // Throws config_error on any out-of-range or inconsistent value.
    void validate() const;
};

// Applies one `key = value` setting. Shared by the config-file parser and
// the CLI flag overrides; unknown keys throw config_error listing the
// valid ones.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

// Parses a plain-text config file: `key = value` lines, `#` comments,
// blank lines ignored. Entries are applied on top of `config`.
void load_config_file(ExperimentConfig& config, const std::string& path);

struct CurvePoint {
    Method method = Method::kpca;
    int m = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double rayleigh = 0.0;  // Tr(S_b)/Tr(S_T) of the selected subspace
};

struct SeedInfo {
    std::uint64_t seed = 0;
    int train_count = 0;
    int test_count = 0;
    double sigma = 0.0;
    int rank = 0;
    bool cmvda_fallback = false;  // rank-deficient projector path was used
};

struct ExperimentResult {
    ExperimentConfig config;
    int num_classes = 0;
    int feature_dim = 0;
    int sample_count = 0;
    std::vector<SeedInfo> seed_info;       // seeds ascending
    std::vector<CurvePoint> points;        // method, M, seed ascending
    std::vector<std::string> skips;        // per-method skip records
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes curves.csv, rayleigh.csv, summary.csv, and metadata.txt under
// `out_dir` (created if needed). Deterministic byte-for-byte given equal
// results.
void write_results(const ExperimentResult& result, const std::string& out_dir);

// CSV float formatting: 6 significant digits, '.' decimal separator.
std::string format_float(double value);

} // namespace ksl
