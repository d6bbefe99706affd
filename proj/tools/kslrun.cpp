#include "CLI11.hpp"

#include "ksl/error.hpp"
#include "ksl/experiment.hpp"

#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

// Mirrored config keys in application order: synthetic settings before
// data.path so an explicit --data.path always wins the source selection.
const std::vector<std::pair<std::string, std::string>> mirrored_keys = {
    {"data.synthetic.classes", "synthetic blob classes"},
    {"data.synthetic.per_class", "samples per synthetic class"},
    {"data.synthetic.dim", "synthetic feature dimension (>= classes)"},
    {"data.synthetic.stddev", "synthetic blob standard deviation"},
    {"data.synthetic.distance", "mutual distance between synthetic class means"},
    {"data.synthetic.seed", "synthetic generation seed"},
    {"data.path", "dataset CSV path (feature columns, then an integer label column)"},
    {"data.has_header", "skip the first CSV line (true/false)"},
    {"kernel.mode", "kernel computation: exact, nystrom, or rff"},
    {"kernel.sigma", "gaussian bandwidth: 'heuristic' or a positive real"},
    {"approx.n", "reference/feature count for nystrom and rff"},
    {"methods", "comma list of kpca,keca,cmvca,rayleigh,kda,cmvda,cmvda_r or 'all'"},
    {"m_grid", "subspace sizes: comma list or '1..r'"},
    {"split.fraction", "train fraction per class, strictly between 0 and 1"},
    {"seeds", "comma list of split seeds"},
    {"out.dir", "output directory"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel subspace experiment runner: accuracy and Rayleigh quotient "
                 "vs. subspace dimensionality, written as CSV"};

    std::string config_path;
    std::string out_alias;
    app.add_option("--config", config_path, "config file with 'key = value' lines");
    app.add_option("--out", out_alias, "output directory (same as --out.dir)");

    std::vector<std::string> values(mirrored_keys.size());
    for (std::size_t i = 0; i < mirrored_keys.size(); ++i)
        app.add_option("--" + mirrored_keys[i].first, values[i], mirrored_keys[i].second);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        ksl::ExperimentConfig config;
        if (!config_path.empty()) ksl::load_config_file(config, config_path);
        for (std::size_t i = 0; i < mirrored_keys.size(); ++i)
            if (app.count("--" + mirrored_keys[i].first) > 0)
                ksl::apply_config_entry(config, mirrored_keys[i].first, values[i]);
        if (app.count("--out") > 0) ksl::apply_config_entry(config, "out.dir", out_alias);

        const ksl::ExperimentResult result = ksl::run_experiment(config);
        ksl::write_results(result, config.out_dir);
        std::cout << "wrote curves.csv, rayleigh.csv, summary.csv, metadata.txt to "
                  << config.out_dir << "\n";
        return 0;
    } catch (const ksl::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ksl::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}
