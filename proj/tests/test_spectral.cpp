#include "doctest.h"

#include "helpers.hpp"
#include "ksl/error.hpp"
#include "ksl/spectral.hpp"

#include <numeric>

using namespace ksl;

namespace {

KernelMatrix as_kernel(Eigen::MatrixXd values) {
    KernelMatrix km;
    km.values = std::move(values);
    return km;
}

SpectralModel gaussian_model(std::uint64_t seed, int n, double sigma = 1.5) {
    const Dataset ds = testing::random_dataset(seed, n, 3, 4);
    return decompose(gram(ds, KernelSpec::gaussian(sigma)));
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("identity kernel decomposes to unit spectrum") {
    const SpectralModel model = decompose(as_kernel(Eigen::MatrixXd::Identity(5, 5)));
    CHECK(model.rank == 5);
    CHECK((model.eigenvalues.array() == 1.0).all());
    CHECK((model.eigenvectors * model.eigenvectors.transpose() -
           Eigen::MatrixXd::Identity(5, 5))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("eigenvalues are sorted descending and sub-tau values clamp to zero") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(3, 3);
    k(0, 0) = 1.0;
    k(1, 1) = 4.0;
    k(2, 2) = 1e-14;
    const SpectralModel model = decompose(as_kernel(k));
    CHECK(model.eigenvalues(0) == 4.0);
    CHECK(model.eigenvalues(1) == 1.0);
    CHECK(model.eigenvalues(2) == 0.0);  // clamped below tau = 4e-10
    CHECK(model.rank == 2);
    CHECK(model.tau == doctest::Approx(4e-10));
}

TEST_CASE("rank_tol scales the truncation threshold") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2, 2);
    k(0, 0) = 1.0;
    k(1, 1) = 1e-6;
    CHECK(decompose(as_kernel(k), 1e-10).rank == 2);
    CHECK(decompose(as_kernel(k), 1e-4).rank == 1);
}

TEST_CASE("decomposition reconstructs the kernel matrix") {
    const Dataset ds = testing::random_dataset(21, 28, 3, 4);
    const KernelMatrix km = gram(ds, KernelSpec::gaussian(1.5));
    const SpectralModel model = decompose(km);
    const Eigen::MatrixXd rebuilt = model.eigenvectors * model.eigenvalues.asDiagonal() *
                                    model.eigenvectors.transpose();
    CHECK((rebuilt - km.values).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("eigenvector columns are orthonormal") {
    const SpectralModel model = gaussian_model(22, 20);
    const Eigen::MatrixXd gramian = model.eigenvectors.transpose() * model.eigenvectors;
    CHECK((gramian - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sign convention: the first entry of largest magnitude is positive") {
    const SpectralModel model = gaussian_model(23, 15);
    for (int d = 0; d < model.rank; ++d) {
        const Eigen::VectorXd u = model.eigenvectors.col(d);
        int arg = 0;
        u.cwiseAbs().maxCoeff(&arg);
        CHECK(u(arg) > 0.0);
    }
}

TEST_CASE("repeated decomposition of the same matrix is bit-identical") {
    const Dataset ds = testing::random_dataset(24, 18, 2, 3);
    const KernelMatrix km = gram(ds, KernelSpec::gaussian(2.0));
    const SpectralModel a = decompose(km);
    const SpectralModel b = decompose(km);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
    CHECK(a.rank == b.rank);
}

TEST_CASE("clearly indefinite input is rejected") {
    CHECK_THROWS_AS(decompose(as_kernel(-Eigen::MatrixXd::Identity(4, 4))), numeric_error);
}

TEST_CASE("embedding gram matrix reconstructs the kernel") {
    const Dataset ds = testing::random_dataset(25, 22, 3, 4);
    const KernelMatrix km = gram(ds, KernelSpec::gaussian(1.5));
    const SpectralModel model = decompose(km);
    const Eigen::MatrixXd embedding = embed_training(model);
    REQUIRE(embedding.rows() == model.rank);
    CHECK((embedding.transpose() * embedding - km.values).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("projecting training kernel columns recovers the training embedding") {
    const Dataset ds = testing::random_dataset(26, 16, 2, 3);
    const KernelMatrix km = gram(ds, KernelSpec::gaussian(1.5));
    const SpectralModel model = decompose(km);
    std::vector<int> dims(model.rank);
    std::iota(dims.begin(), dims.end(), 0);

    const Eigen::MatrixXd expected = embed_training(model);
    const Eigen::MatrixXd projected = project_columns(model, km.values, dims);
    CHECK((projected - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("projection onto a zero-eigenvalue dimension is refused") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(3, 3);
    k(0, 0) = 1.0;
    const SpectralModel model = decompose(as_kernel(k));
    REQUIRE(model.rank == 1);
    CHECK_THROWS_AS(project(model, Eigen::Vector3d(1, 0, 0), std::vector<int>{1}), rank_error);
    CHECK_THROWS_AS(project(model, Eigen::Vector3d(1, 0, 0), std::vector<int>{-1}), rank_error);
    CHECK_NOTHROW(project(model, Eigen::Vector3d(1, 0, 0), std::vector<int>{0}));
}

TEST_CASE("projection is linear in the kernel vector") {
    const SpectralModel model = gaussian_model(27, 12);
    std::vector<int> dims = {0, 2, 4};
    const Eigen::VectorXd a = Eigen::VectorXd::Random(12);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(12);
    const Eigen::VectorXd lhs = project(model, 2.0 * a + 3.0 * b, dims);
    const Eigen::VectorXd rhs = 2.0 * project(model, a, dims) + 3.0 * project(model, b, dims);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("equal eigenvalue ordering is deterministic") {
    // 2x2 identity has a repeated eigenvalue; the tie order and signs must be
    // stable and canonical.
    const SpectralModel model = decompose(as_kernel(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(model.eigenvectors(0, 0) == doctest::Approx(1.0));
    CHECK(model.eigenvectors(1, 1) == doctest::Approx(1.0));
}

}
