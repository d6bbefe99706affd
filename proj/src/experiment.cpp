#include "ksl/experiment.hpp"

#include "ksl/approx.hpp"
#include "ksl/classify.hpp"
#include "ksl/cmvda.hpp"
#include "ksl/components.hpp"
#include "ksl/error.hpp"
#include "ksl/kernel.hpp"
#include "ksl/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace ksl {

namespace {

const char* const valid_keys =
    "data.path, data.has_header, data.synthetic.classes, data.synthetic.per_class, "
    "data.synthetic.dim, data.synthetic.stddev, data.synthetic.distance, data.synthetic.seed, "
    "kernel.mode, kernel.sigma, approx.n, methods, m_grid, split.fraction, seeds, out.dir";

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string current;
    std::stringstream stream(s);
    while (std::getline(stream, current, ',')) parts.push_back(trim(current));
    return parts;
}

long long parse_integer(const std::string& key, const std::string& value) {
    long long out = 0;
    const std::string v = trim(value);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw config_error(key + ": expected an integer, got '" + value + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        if (!std::isfinite(out)) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw config_error(key + ": expected a real number, got '" + value + "'");
    }
}

bool parse_flag(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error(key + ": expected true or false, got '" + value + "'");
}

bool method_from_name(const std::string& name, Method& out) {
    for (Method m : all_methods()) {
        if (method_name(m) == name) {
            out = m;
            return true;
        }
    }
    return false;
}

Criterion criterion_of(Method method) {
    switch (method) {
        case Method::kpca: return Criterion::kpca;
        case Method::keca: return Criterion::keca;
        case Method::cmvca: return Criterion::cmvca;
        case Method::rayleigh: return Criterion::rayleigh;
        default: break;
    }
    throw domain_error("criterion_of: method has no eigen-axis criterion");
}

bool is_spectral(Method method) {
    return method == Method::kpca || method == Method::keca || method == Method::cmvca ||
           method == Method::rayleigh;
}

// Tr(S_b)/Tr(S_T) of a column-per-sample embedding.
double trace_ratio(const Eigen::MatrixXd& embedding, const std::vector<int>& labels,
                   int num_classes) {
    const int n = static_cast<int>(embedding.cols());
    const Eigen::VectorXd total_mean = embedding.rowwise().mean();

    Eigen::MatrixXd class_means = Eigen::MatrixXd::Zero(embedding.rows(), num_classes);
    std::vector<int> counts(num_classes, 0);
    for (int j = 0; j < n; ++j) {
        class_means.col(labels[j]) += embedding.col(j);
        ++counts[labels[j]];
    }

    double between = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        class_means.col(c) /= counts[c];
        between += counts[c] * (class_means.col(c) - total_mean).squaredNorm();
    }
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += (embedding.col(j) - total_mean).squaredNorm();
    return total > 0.0 ? between / total : 0.0;
}

struct Embeddings {
    Eigen::MatrixXd train;     // used for centroids
    Eigen::MatrixXd test;      // used for accuracy
    Eigen::MatrixXd whitened;  // used for the Rayleigh quotient
};

} // namespace

const std::vector<Method>& all_methods() {
    static const std::vector<Method> order = {Method::kpca, Method::keca,  Method::cmvca,
                                              Method::rayleigh, Method::kda, Method::cmvda,
                                              Method::cmvda_r};
    return order;
}

std::string method_name(Method method) {
    switch (method) {
        case Method::kpca: return "kpca";
        case Method::keca: return "keca";
        case Method::cmvca: return "cmvca";
        case Method::rayleigh: return "rayleigh";
        case Method::kda: return "kda";
        case Method::cmvda: return "cmvda";
        case Method::cmvda_r: return "cmvda_r";
    }
    return "unknown";
}

std::string kernel_mode_name(KernelMode mode) {
    switch (mode) {
        case KernelMode::exact: return "exact";
        case KernelMode::nystrom: return "nystrom";
        case KernelMode::rff: return "rff";
    }
    return "unknown";
}

Dataset make_synthetic(const SyntheticSpec& spec) {
    if (spec.classes < 2) throw config_error("data.synthetic.classes: need at least 2");
    if (spec.per_class < 2) throw config_error("data.synthetic.per_class: need at least 2");
    if (spec.dim < spec.classes)
        throw config_error("data.synthetic.dim: need dim >= classes to place the means");
    if (!(spec.stddev > 0.0)) throw config_error("data.synthetic.stddev: must be positive");
    if (!(spec.distance > 0.0)) throw config_error("data.synthetic.distance: must be positive");

    // Means on scaled standard basis directions: ||m_i - m_j|| = distance.
    std::vector<Eigen::VectorXd> means;
    for (int c = 0; c < spec.classes; ++c) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.dim);
        mean(c) = spec.distance / std::sqrt(2.0);
        means.push_back(mean);
    }
    return make_blobs(std::vector<int>(spec.classes, spec.per_class), means, spec.stddev,
                      spec.seed);
}

void ExperimentConfig::validate() const {
    if (!use_synthetic && data_path.empty())
        throw config_error("data.path: empty path");
    if (kernel_mode != KernelMode::exact && approx_n < 1)
        throw config_error("approx.n: required (>= 1) for nystrom and rff kernel modes");
    if (!sigma_is_heuristic && !(sigma > 0.0 && std::isfinite(sigma)))
        throw config_error("kernel.sigma: must be 'heuristic' or a positive real");
    if (methods.empty()) throw config_error("methods: empty selection");
    if (!m_grid_full) {
        if (m_grid.empty()) throw config_error("m_grid: empty grid");
        for (int m : m_grid)
            if (m < 1) throw config_error("m_grid: entries must be >= 1");
    }
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw config_error("split.fraction: must lie strictly between 0 and 1");
    if (seeds.empty()) throw config_error("seeds: empty list");
    if (out_dir.empty()) throw config_error("out.dir: empty path");
}

void apply_config_entry(ExperimentConfig& config, const std::string& raw_key,
                        const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);

    if (key == "data.path") {
        if (value.empty()) throw config_error("data.path: empty path");
        config.data_path = value;
        config.use_synthetic = false;
    } else if (key == "data.has_header") {
        config.has_header = parse_flag(key, value);
    } else if (key == "data.synthetic.classes") {
        config.synthetic.classes = static_cast<int>(parse_integer(key, value));
        config.use_synthetic = true;
    } else if (key == "data.synthetic.per_class") {
        config.synthetic.per_class = static_cast<int>(parse_integer(key, value));
        config.use_synthetic = true;
    } else if (key == "data.synthetic.dim") {
        config.synthetic.dim = static_cast<int>(parse_integer(key, value));
        config.use_synthetic = true;
    } else if (key == "data.synthetic.stddev") {
        config.synthetic.stddev = parse_real(key, value);
        config.use_synthetic = true;
    } else if (key == "data.synthetic.distance") {
        config.synthetic.distance = parse_real(key, value);
        config.use_synthetic = true;
    } else if (key == "data.synthetic.seed") {
        config.synthetic.seed = static_cast<std::uint64_t>(parse_integer(key, value));
        config.use_synthetic = true;
    } else if (key == "kernel.mode") {
        if (value == "exact") config.kernel_mode = KernelMode::exact;
        else if (value == "nystrom") config.kernel_mode = KernelMode::nystrom;
        else if (value == "rff") config.kernel_mode = KernelMode::rff;
        else throw config_error("kernel.mode: expected exact, nystrom, or rff; got '" + value + "'");
    } else if (key == "kernel.sigma") {
        if (value == "heuristic") {
            config.sigma_is_heuristic = true;
        } else {
            config.sigma = parse_real(key, value);
            config.sigma_is_heuristic = false;
            if (!(config.sigma > 0.0))
                throw config_error("kernel.sigma: must be 'heuristic' or a positive real");
        }
    } else if (key == "approx.n") {
        config.approx_n = static_cast<int>(parse_integer(key, value));
    } else if (key == "methods") {
        if (value == "all") {
            config.methods = all_methods();
        } else {
            std::set<int> chosen;
            for (const std::string& name : split_list(value)) {
                Method m;
                if (!method_from_name(name, m))
                    throw config_error("methods: unknown method '" + name +
                                       "' (valid: kpca, keca, cmvca, rayleigh, kda, cmvda, "
                                       "cmvda_r, or 'all')");
                chosen.insert(static_cast<int>(m));
            }
            config.methods.clear();
            for (Method m : all_methods())
                if (chosen.count(static_cast<int>(m))) config.methods.push_back(m);
        }
    } else if (key == "m_grid") {
        if (value == "1..r") {
            config.m_grid_full = true;
            config.m_grid.clear();
        } else {
            config.m_grid_full = false;
            std::set<int> grid;
            for (const std::string& part : split_list(value)) {
                const int m = static_cast<int>(parse_integer(key, part));
                if (m < 1) throw config_error("m_grid: entries must be >= 1");
                grid.insert(m);
            }
            config.m_grid.assign(grid.begin(), grid.end());
        }
    } else if (key == "split.fraction") {
        config.split_fraction = parse_real(key, value);
    } else if (key == "seeds") {
        std::set<std::uint64_t> seeds;
        for (const std::string& part : split_list(value)) {
            const long long v = parse_integer(key, part);
            if (v < 0) throw config_error("seeds: must be non-negative");
            seeds.insert(static_cast<std::uint64_t>(v));
        }
        config.seeds.assign(seeds.begin(), seeds.end());
    } else if (key == "out.dir") {
        config.out_dir = value;
    } else {
        throw config_error("unknown config key '" + key + "' (valid keys: " +
                           std::string(valid_keys) + ")");
    }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(line_number) +
                               ": expected 'key = value'");
        try {
            apply_config_entry(config, stripped.substr(0, eq), stripped.substr(eq + 1));
        } catch (const config_error& e) {
            throw config_error(path + ":" + std::to_string(line_number) + ": " + e.what());
        }
    }
}

std::string format_float(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

namespace {

std::string format_exact(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

struct SeedState {
    Dataset train;
    Dataset test;
    SpectralModel model;
    Eigen::MatrixXd k_test;  // N_train x N_test kernel columns
    ClassIndicators ind;
    ComponentScores scores;

    // Built lazily, only when a CMVDA-family method runs.
    std::optional<WhitenedModel> wm;
    std::optional<IndicatorBasis> basis;
    std::optional<Eigen::MatrixXd> random_basis;
};

Embeddings embed_spectral(const SeedState& state, Method method, int m) {
    const SubspaceMap map = select(state.model, state.scores, criterion_of(method), m);
    Embeddings out;
    out.whitened = map.basis.transpose();
    out.train = map.lambdas.cwiseSqrt().asDiagonal() * out.whitened;
    out.test = project_dataset(map, state.k_test);
    return out;
}

Embeddings embed_kda(const SeedState& state, int m) {
    const KdaMap map = kda_baseline(state.model, state.ind, m);
    Embeddings out;
    out.train = map.directions.transpose() *
                state.model.eigenvectors.leftCols(state.model.rank).transpose();
    out.test = project_dataset(map, state.k_test);
    out.whitened = out.train;
    return out;
}

Embeddings embed_cmvda(SeedState& state, Method method, int m, std::uint64_t seed) {
    if (!state.wm) state.wm = whiten(state.model);
    Embeddings out;
    if (method == Method::cmvda) {
        if (!state.basis) state.basis = indicator_basis(state.ind);
        out.train = cmvda_embed_train(*state.wm, *state.basis, state.ind, m);
        out.test = cmvda_embed_test(*state.wm, state.basis->vectors, state.k_test, m);
    } else {
        if (!state.random_basis)
            state.random_basis =
                order_basis_by_rayleigh(cmvda_r_basis(state.train.sample_count(), seed),
                                        state.ind);
        out.train = cmvda_embed_train(*state.wm, *state.random_basis, m);
        out.test = cmvda_embed_test(*state.wm, *state.random_basis, state.k_test, m);
    }
    out.whitened = out.train;
    return out;
}

// The M values a method can serve on this seed, plus skip records for
// requested values it cannot.
std::vector<int> method_grid(const ExperimentConfig& config, Method method, int rank,
                             int num_classes, int train_count, std::uint64_t seed,
                             std::vector<std::string>& skips) {
    int cap = 0;
    std::string reason;
    if (is_spectral(method)) {
        cap = rank;
        reason = "exceeds rank " + std::to_string(rank);
    } else if (method == Method::kda) {
        if (rank < num_classes) {
            skips.push_back("seed=" + std::to_string(seed) + " method=kda skipped: rank " +
                            std::to_string(rank) + " below class count " +
                            std::to_string(num_classes));
            return {};
        }
        cap = num_classes - 1;
        reason = "exceeds C-1 = " + std::to_string(cap);
    } else {
        cap = config.m_grid_full ? rank : train_count;
        reason = "exceeds " + std::string(config.m_grid_full ? "rank " : "train size ") +
                 std::to_string(cap);
    }

    std::vector<int> grid;
    if (config.m_grid_full) {
        for (int m = 1; m <= cap; ++m) grid.push_back(m);
    } else {
        for (int m : config.m_grid) {
            if (m <= cap) {
                grid.push_back(m);
            } else {
                skips.push_back("seed=" + std::to_string(seed) + " method=" +
                                method_name(method) + " M=" + std::to_string(m) +
                                " skipped: " + reason);
            }
        }
    }
    return grid;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& raw_config) {
    raw_config.validate();

    ExperimentConfig config = raw_config;
    std::sort(config.seeds.begin(), config.seeds.end());
    config.seeds.erase(std::unique(config.seeds.begin(), config.seeds.end()),
                       config.seeds.end());

    Dataset ds = config.use_synthetic ? make_synthetic(config.synthetic)
                                      : load_csv(config.data_path, config.has_header);
    if (ds.num_classes() < 2) throw data_error("experiment: need at least 2 classes");

    ExperimentResult result;
    result.config = config;
    result.num_classes = ds.num_classes();
    result.feature_dim = ds.feature_dim();
    result.sample_count = ds.sample_count();

    const int c = ds.num_classes();

    // One state per seed, then emit points in (method, M, seed) order.
    std::vector<SeedState> states;
    for (std::uint64_t seed : config.seeds) {
        SeedState state;
        auto parts = split(ds, config.split_fraction, seed);
        state.train = std::move(parts.first);
        state.test = std::move(parts.second);

        const double sigma =
            config.sigma_is_heuristic ? sigma_heuristic(state.train) : config.sigma;
        const KernelSpec spec = KernelSpec::gaussian(sigma);

        if (config.kernel_mode == KernelMode::exact) {
            state.model = decompose(gram(state.train, spec));
            state.k_test = kernel_columns(state.train, state.test.features, spec);
        } else {
            if (config.kernel_mode == KernelMode::nystrom &&
                config.approx_n > state.train.sample_count())
                throw config_error("approx.n: " + std::to_string(config.approx_n) +
                                   " exceeds the training size " +
                                   std::to_string(state.train.sample_count()));
            const ApproxFeatures features =
                config.kernel_mode == KernelMode::nystrom
                    ? nystrom(state.train.features, spec, config.approx_n, seed)
                    : rff(state.train.features, sigma, config.approx_n, seed);
            state.model = subspace_from_features(features);
            state.k_test = approx_kernel_columns(features, state.test.features);
        }

        state.ind = class_indicators(state.train);
        state.scores = score_components(state.model, state.ind);

        SeedInfo info;
        info.seed = seed;
        info.train_count = state.train.sample_count();
        info.test_count = state.test.sample_count();
        info.sigma = sigma;
        info.rank = state.model.rank;
        result.seed_info.push_back(info);
        states.push_back(std::move(state));
    }

    for (Method method : config.methods) {
        // Collect (M, seed) points; per-seed grids can differ when ranks do.
        std::map<int, std::vector<CurvePoint>> by_m;
        for (std::size_t si = 0; si < states.size(); ++si) {
            SeedState& state = states[si];
            const std::uint64_t seed = config.seeds[si];
            const std::vector<int> grid =
                method_grid(config, method, state.model.rank, c,
                            state.train.sample_count(), seed, result.skips);
            for (int m : grid) {
                Embeddings emb;
                if (is_spectral(method)) emb = embed_spectral(state, method, m);
                else if (method == Method::kda) emb = embed_kda(state, m);
                else emb = embed_cmvda(state, method, m, seed);

                const CentroidModel centroids =
                    fit_centroids(emb.train, state.train.labels, c);
                CurvePoint point;
                point.method = method;
                point.m = m;
                point.seed = seed;
                point.accuracy = accuracy(predict(centroids, emb.test), state.test.labels);
                point.rayleigh = trace_ratio(emb.whitened, state.train.labels, c);
                by_m[m].push_back(point);
            }
            if ((method == Method::cmvda || method == Method::cmvda_r) && state.wm &&
                !state.wm->full_rank())
                result.seed_info[si].cmvda_fallback = true;
        }
        for (auto& [m, row] : by_m)
            for (const CurvePoint& point : row) result.points.push_back(point);
    }
    return result;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write output file '" + path.string() + "'");
    out << content;
}

} // namespace

void write_results(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw data_error("cannot create output directory '" + out_dir + "'");

    // Group points per (method, M); input order already matches output order.
    struct Block {
        Method method;
        int m;
        std::vector<const CurvePoint*> rows;
    };
    std::vector<Block> blocks;
    for (const CurvePoint& point : result.points) {
        if (blocks.empty() || blocks.back().method != point.method || blocks.back().m != point.m)
            blocks.push_back({point.method, point.m, {}});
        blocks.back().rows.push_back(&point);
    }

    std::string curves = "method,M,seed,accuracy\n";
    std::string rayleigh = "method,M,seed,rayleigh_quotient\n";
    for (const Block& block : blocks) {
        double acc_sum = 0.0;
        double ray_sum = 0.0;
        for (const CurvePoint* point : block.rows) {
            const std::string prefix =
                method_name(block.method) + "," + std::to_string(block.m) + "," +
                std::to_string(point->seed) + ",";
            curves += prefix + format_float(point->accuracy) + "\n";
            rayleigh += prefix + format_float(point->rayleigh) + "\n";
            acc_sum += point->accuracy;
            ray_sum += point->rayleigh;
        }
        const std::string prefix =
            method_name(block.method) + "," + std::to_string(block.m) + ",mean,";
        curves += prefix + format_float(acc_sum / block.rows.size()) + "\n";
        rayleigh += prefix + format_float(ray_sum / block.rows.size()) + "\n";
    }

    std::string summary = "method,best_m,max_accuracy\n";
    for (Method method : result.config.methods) {
        int best_m = 0;
        double best = -1.0;
        for (const Block& block : blocks) {
            if (block.method != method) continue;
            double mean = 0.0;
            for (const CurvePoint* point : block.rows) mean += point->accuracy;
            mean /= block.rows.size();
            if (mean > best) {
                best = mean;
                best_m = block.m;
            }
        }
        if (best_m > 0)
            summary += method_name(method) + "," + std::to_string(best_m) + "," +
                       format_float(best) + "\n";
    }

    std::string meta;
    if (result.config.use_synthetic) {
        const SyntheticSpec& s = result.config.synthetic;
        meta += "data.source = synthetic\n";
        meta += "data.synthetic.classes = " + std::to_string(s.classes) + "\n";
        meta += "data.synthetic.per_class = " + std::to_string(s.per_class) + "\n";
        meta += "data.synthetic.dim = " + std::to_string(s.dim) + "\n";
        meta += "data.synthetic.stddev = " + format_exact(s.stddev) + "\n";
        meta += "data.synthetic.distance = " + format_exact(s.distance) + "\n";
        meta += "data.synthetic.seed = " + std::to_string(s.seed) + "\n";
    } else {
        meta += "data.source = " + result.config.data_path + "\n";
        meta += "data.has_header = " + std::string(result.config.has_header ? "true" : "false") +
                "\n";
    }
    meta += "data.samples = " + std::to_string(result.sample_count) + "\n";
    meta += "data.features = " + std::to_string(result.feature_dim) + "\n";
    meta += "data.classes = " + std::to_string(result.num_classes) + "\n";
    meta += "kernel.mode = " + kernel_mode_name(result.config.kernel_mode) + "\n";
    meta += "kernel.sigma = " + (result.config.sigma_is_heuristic
                                     ? std::string("heuristic")
                                     : format_exact(result.config.sigma)) + "\n";
    if (result.config.kernel_mode != KernelMode::exact)
        meta += "approx.n = " + std::to_string(result.config.approx_n) + "\n";
    meta += "methods = ";
    for (std::size_t i = 0; i < result.config.methods.size(); ++i) {
        if (i) meta += ",";
        meta += method_name(result.config.methods[i]);
    }
    meta += "\n";
    if (result.config.m_grid_full) {
        meta += "m_grid = 1..r\n";
    } else {
        meta += "m_grid = ";
        for (std::size_t i = 0; i < result.config.m_grid.size(); ++i) {
            if (i) meta += ",";
            meta += std::to_string(result.config.m_grid[i]);
        }
        meta += "\n";
    }
    meta += "split.fraction = " + format_exact(result.config.split_fraction) + "\n";
    meta += "seeds = ";
    for (std::size_t i = 0; i < result.config.seeds.size(); ++i) {
        if (i) meta += ",";
        meta += std::to_string(result.config.seeds[i]);
    }
    meta += "\n";
    for (const SeedInfo& info : result.seed_info) {
        meta += "seed " + std::to_string(info.seed) + ": train=" +
                std::to_string(info.train_count) + " test=" + std::to_string(info.test_count) +
                " sigma=" + format_exact(info.sigma) + " rank=" + std::to_string(info.rank);
        if (info.cmvda_fallback) meta += " cmvda_projector_fallback=true";
        meta += "\n";
    }
    for (const std::string& skip : result.skips) meta += "skip: " + skip + "\n";

    write_file(dir / "curves.csv", curves);
    write_file(dir / "rayleigh.csv", rayleigh);
    write_file(dir / "summary.csv", summary);
    write_file(dir / "metadata.txt", meta);
}

} // namespace ksl
