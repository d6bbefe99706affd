#include "ksl/approx.hpp"

#include "ksl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace ksl {

Eigen::VectorXd ApproxFeatures::map_point(const Eigen::VectorXd& point) const {
    switch (method) {
        case ApproxMethod::nystrom:
            return transform * kernel_vector(reference_points, point, spec);
        case ApproxMethod::rff:
            if (point.size() != frequencies.cols())
                throw domain_error("map_point: point dimension does not match frequencies");
            return scale * (frequencies * point + phases).array().cos().matrix();
    }
    throw domain_error("map_point: unknown approximation method");
}

Eigen::MatrixXd ApproxFeatures::map_rows(const Eigen::MatrixXd& rows) const {
    switch (method) {
        case ApproxMethod::nystrom:
            return transform * kernel_columns(reference_points, rows, spec);
        case ApproxMethod::rff: {
            if (rows.cols() != frequencies.cols())
                throw domain_error("map_rows: point dimension does not match frequencies");
            Eigen::MatrixXd arg = frequencies * rows.transpose();
            arg.colwise() += phases;
            return scale * arg.array().cos().matrix();
        }
    }
    throw domain_error("map_rows: unknown approximation method");
}

ApproxFeatures nystrom(const Eigen::MatrixXd& features, const KernelSpec& spec, int n,
                       std::uint64_t seed, double rank_tol) {
    const int total = static_cast<int>(features.rows());
    if (n < 1 || n > total)
        throw domain_error("nystrom: reference count " + std::to_string(n) + " outside 1.." +
                           std::to_string(total));
    spec.validate();

    // Uniform sample without replacement: partial Fisher-Yates, then sort so
    // the reference order does not depend on the draw sequence.
    std::vector<int> pool(total);
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) {
        std::uniform_int_distribution<int> pick(i, total - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> chosen(pool.begin(), pool.begin() + n);
    std::sort(chosen.begin(), chosen.end());

    ApproxFeatures out;
    out.method = ApproxMethod::nystrom;
    out.spec = spec;
    out.seed = seed;
    out.reference_indices = chosen;
    out.reference_points.resize(n, features.cols());
    for (int i = 0; i < n; ++i) out.reference_points.row(i) = features.row(chosen[i]);

    const KernelMatrix knn = gram(out.reference_points, spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(knn.values);
    if (solver.info() != Eigen::Success)
        throw numeric_error("nystrom: eigendecomposition of the reference kernel failed");
    SpectralModel ref = finalize_spectrum(solver.eigenvalues(), solver.eigenvectors(), rank_tol);
    if (ref.rank < 1) throw rank_error("nystrom: reference kernel matrix has rank 0");

    out.transform = ref.eigenvalues.head(ref.rank).cwiseSqrt().cwiseInverse().asDiagonal() *
                    ref.eigenvectors.leftCols(ref.rank).transpose();
    out.representation = out.transform * kernel_columns(out.reference_points, features, spec);
    return out;
}

ApproxFeatures rff(const Eigen::MatrixXd& features, double sigma, int n, std::uint64_t seed) {
    if (n < 1) throw domain_error("rff: feature count must be at least 1");
    if (!(sigma > 0.0 && std::isfinite(sigma)))
        throw domain_error("rff: sigma must be finite and positive");
    const int dim = static_cast<int>(features.cols());

    ApproxFeatures out;
    out.method = ApproxMethod::rff;
    out.seed = seed;
    out.scale = std::sqrt(2.0 / n);
    out.frequencies.resize(n, dim);
    out.phases.resize(n);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0 / sigma);
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) out.frequencies(i, j) = gauss(rng);
    for (int i = 0; i < n; ++i) out.phases(i) = uniform(rng);

    Eigen::MatrixXd arg = out.frequencies * features.transpose();
    arg.colwise() += out.phases;
    out.representation = out.scale * arg.array().cos().matrix();
    return out;
}

SpectralModel subspace_from_features(const ApproxFeatures& features, double rank_tol) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(features.representation,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd lambdas = svd.singularValues().array().square();
    SpectralModel model = finalize_spectrum(lambdas, svd.matrixV(), rank_tol);
    if (model.rank < 1)
        throw rank_error("subspace_from_features: representation has rank 0");
    return model;
}

Eigen::MatrixXd approx_kernel_columns(const ApproxFeatures& features,
                                      const Eigen::MatrixXd& points) {
    return features.representation.transpose() * features.map_rows(points);
}

} // namespace ksl
