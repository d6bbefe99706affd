#include "ksl/spectral.hpp"

#include "ksl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ksl {

namespace {

int first_nonzero_index(const Eigen::VectorXd& v) {
    const double cutoff = 1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff());
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > cutoff) return i;
    return static_cast<int>(v.size());
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            arg = i;
        }
    }
    if (v(arg) < 0.0) v = -v;
}

} // namespace

SpectralModel finalize_spectrum(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                                double rank_tol) {
    const int l = static_cast<int>(eigenvalues.size());
    std::vector<int> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (eigenvalues(a) != eigenvalues(b)) return eigenvalues(a) > eigenvalues(b);
        return first_nonzero_index(eigenvectors.col(a)) < first_nonzero_index(eigenvectors.col(b));
    });

    SpectralModel model;
    model.rank_tol = rank_tol;
    model.eigenvalues.resize(l);
    model.eigenvectors.resize(eigenvectors.rows(), l);
    for (int d = 0; d < l; ++d) {
        model.eigenvalues(d) = eigenvalues(order[d]);
        model.eigenvectors.col(d) = eigenvectors.col(order[d]);
        fix_sign(model.eigenvectors.col(d));
    }

    const double lambda_max = l > 0 ? model.eigenvalues(0) : 0.0;
    if (l > 0 && model.eigenvalues(l - 1) < -1e-8 * std::max(lambda_max, 1.0))
        throw numeric_error("decompose: matrix is not numerically PSD (min eigenvalue " +
                            std::to_string(model.eigenvalues(l - 1)) + ")");

    model.tau = rank_tol * std::max(lambda_max, 0.0);
    model.rank = 0;
    for (int d = 0; d < l; ++d) {
        if (model.eigenvalues(d) > model.tau) {
            ++model.rank;
        } else {
            model.eigenvalues(d) = 0.0;
        }
    }
    return model;
}

SpectralModel decompose(const KernelMatrix& km, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(km.values);
    if (solver.info() != Eigen::Success)
        throw numeric_error("decompose: eigensolver failed to converge");
    return finalize_spectrum(solver.eigenvalues(), solver.eigenvectors(), rank_tol);
}

Eigen::MatrixXd embed_training(const SpectralModel& model) {
    Eigen::MatrixXd embedding(model.rank, model.sample_count());
    for (int d = 0; d < model.rank; ++d)
        embedding.row(d) = std::sqrt(model.eigenvalues(d)) * model.eigenvectors.col(d).transpose();
    return embedding;
}

Eigen::VectorXd project(const SpectralModel& model, const Eigen::VectorXd& k,
                        const std::vector<int>& dims) {
    if (k.size() != model.sample_count())
        throw domain_error("project: kernel vector length does not match training size");
    Eigen::VectorXd out(static_cast<int>(dims.size()));
    for (int l = 0; l < static_cast<int>(dims.size()); ++l) {
        const int d = dims[l];
        if (d < 0 || d >= model.rank)
            throw rank_error("project: dimension " + std::to_string(d) +
                             " is outside the numerical rank " + std::to_string(model.rank));
        out(l) = model.eigenvectors.col(d).dot(k) / std::sqrt(model.eigenvalues(d));
    }
    return out;
}

Eigen::MatrixXd project_columns(const SpectralModel& model, const Eigen::MatrixXd& k_cols,
                                const std::vector<int>& dims) {
    if (k_cols.rows() != model.sample_count())
        throw domain_error("project_columns: kernel columns do not match training size");
    Eigen::MatrixXd out(static_cast<int>(dims.size()), k_cols.cols());
    for (int l = 0; l < static_cast<int>(dims.size()); ++l) {
        const int d = dims[l];
        if (d < 0 || d >= model.rank)
            throw rank_error("project_columns: dimension " + std::to_string(d) +
                             " is outside the numerical rank " + std::to_string(model.rank));
        out.row(l) =
            model.eigenvectors.col(d).transpose() * k_cols / std::sqrt(model.eigenvalues(d));
    }
    return out;
}

} // namespace ksl
