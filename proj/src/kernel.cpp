#include "ksl/kernel.hpp"

#include "ksl/error.hpp"

#include <cmath>
#include <string>

namespace ksl {

KernelSpec KernelSpec::gaussian(double sigma) {
    KernelSpec spec;
    spec.kind = KernelKind::gaussian;
    spec.sigma = sigma;
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::linear() {
    KernelSpec spec;
    spec.kind = KernelKind::linear;
    return spec;
}

void KernelSpec::validate() const {
    if (kind == KernelKind::gaussian && !(sigma > 0.0 && std::isfinite(sigma)))
        throw domain_error("kernel spec: sigma must be finite and positive");
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) throw domain_error("kernel_eval: dimension mismatch");
    switch (spec.kind) {
        case KernelKind::gaussian: {
            const double d2 = (x - y).squaredNorm();
            return std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
        }
        case KernelKind::linear:
            return x.dot(y);
    }
    throw domain_error("kernel_eval: unknown kernel kind");
}

double sigma_heuristic(const Eigen::MatrixXd& rows) {
    const int n = static_cast<int>(rows.rows());
    if (n < 2) throw domain_error("sigma_heuristic: need at least 2 samples");
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            sum += (rows.row(i) - rows.row(j)).norm();
    const double mean = sum / (0.5 * n * (n - 1));
    if (!(mean > 0.0))
        throw numeric_error("sigma_heuristic: all samples coincide, sigma degenerates to 0");
    return mean;
}

double sigma_heuristic(const Dataset& ds) { return sigma_heuristic(ds.features); }

KernelMatrix gram(const Eigen::MatrixXd& rows, const KernelSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(rows.rows());
    KernelMatrix km;
    km.values.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = kernel_eval(spec, rows.row(i).transpose(), rows.row(j).transpose());
            if (!std::isfinite(v))
                throw numeric_error("gram: non-finite kernel value at pair (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
            km.values(i, j) = v;
            km.values(j, i) = v;
        }
    }
    return km;
}

KernelMatrix gram(const Dataset& ds, const KernelSpec& spec) { return gram(ds.features, spec); }

Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& rows, const Eigen::VectorXd& x,
                              const KernelSpec& spec) {
    spec.validate();
    if (x.size() != rows.cols())
        throw domain_error("kernel_vector: point dimension does not match training data");
    const int n = static_cast<int>(rows.rows());
    Eigen::VectorXd k(n);
    for (int i = 0; i < n; ++i) {
        const double v = kernel_eval(spec, rows.row(i).transpose(), x);
        if (!std::isfinite(v))
            throw numeric_error("kernel_vector: non-finite kernel value at training index " +
                                std::to_string(i));
        k(i) = v;
    }
    return k;
}

Eigen::VectorXd kernel_vector(const Dataset& train, const Eigen::VectorXd& x, const KernelSpec& spec) {
    return kernel_vector(train.features, x, spec);
}

Eigen::MatrixXd kernel_columns(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& points,
                               const KernelSpec& spec) {
    const int t = static_cast<int>(points.rows());
    Eigen::MatrixXd cols(rows.rows(), t);
    for (int j = 0; j < t; ++j)
        cols.col(j) = kernel_vector(rows, points.row(j).transpose(), spec);
    return cols;
}

Eigen::MatrixXd kernel_columns(const Dataset& train, const Eigen::MatrixXd& points, const KernelSpec& spec) {
    return kernel_columns(train.features, points, spec);
}

} // namespace ksl
