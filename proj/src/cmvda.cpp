#include "ksl/cmvda.hpp"

#include "ksl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace ksl {

namespace {

void fix_sign_first_nonzero(Eigen::Ref<Eigen::VectorXd> v) {
    const double cutoff = 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > cutoff) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

} // namespace

WhitenedModel whiten(const SpectralModel& model) {
    if (model.rank < 1) throw rank_error("whiten: model has rank 0");
    WhitenedModel wm;
    wm.n = model.sample_count();
    wm.rank = model.rank;
    wm.u_r = model.eigenvectors.leftCols(model.rank);
    wm.lambda_r = model.eigenvalues.head(model.rank);
    return wm;
}

IndicatorBasis indicator_basis(const ClassIndicators& ind) {
    const int n = ind.n;
    const int c = ind.num_classes();

    IndicatorBasis basis;
    basis.num_classes = c;
    basis.vectors.setZero(n, n);

    std::vector<int> class_order(c);
    std::iota(class_order.begin(), class_order.end(), 0);
    std::stable_sort(class_order.begin(), class_order.end(), [&](int a, int b) {
        if (ind.counts[a] != ind.counts[b]) return ind.counts[a] < ind.counts[b];
        return a < b;
    });

    for (int i = 0; i < c; ++i) {
        const int k = class_order[i];
        const double value = 1.0 / std::sqrt(static_cast<double>(ind.counts[k]));
        for (int row : ind.rows[k]) basis.vectors(row, i) = value;
        basis.leading_class.push_back(k);
        basis.leading_score.push_back(1.0 / ind.counts[k]);
    }

    // Per-class completion: orthonormalize the class block's standard basis
    // against the class indicator axis, class by class in index order.
    int col = c;
    for (int k = 0; k < c; ++k) {
        std::vector<Eigen::VectorXd> accepted;
        Eigen::VectorXd lead = Eigen::VectorXd::Zero(n);
        const double value = 1.0 / std::sqrt(static_cast<double>(ind.counts[k]));
        for (int row : ind.rows[k]) lead(row) = value;
        accepted.push_back(lead);

        for (int j = 0; j < static_cast<int>(ind.rows[k].size()) &&
                        static_cast<int>(accepted.size()) < ind.counts[k];
             ++j) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v(ind.rows[k][j]) = 1.0;
            for (const auto& u : accepted) v -= u.dot(v) * u;
            const double norm = v.norm();
            if (norm < 1e-8) continue;
            v /= norm;
            fix_sign_first_nonzero(v);
            accepted.push_back(v);
            basis.vectors.col(col++) = v;
        }
    }
    return basis;
}

Eigen::MatrixXd cmvda_embed_train(const WhitenedModel& wm, const Eigen::MatrixXd& basis_cols,
                                  int m) {
    if (m < 1 || m > wm.n)
        throw rank_error("cmvda_embed_train: M = " + std::to_string(m) + " outside 1.." +
                         std::to_string(wm.n));
    if (basis_cols.rows() != wm.n || basis_cols.cols() < m)
        throw domain_error("cmvda_embed_train: basis shape mismatch");
    if (wm.full_rank()) return basis_cols.leftCols(m).transpose();
    return (basis_cols.leftCols(m).transpose() * wm.u_r) * wm.u_r.transpose();
}

Eigen::MatrixXd cmvda_embed_train(const WhitenedModel& wm, const IndicatorBasis& basis,
                                  const ClassIndicators& ind, int m) {
    if (!wm.full_rank()) return cmvda_embed_train(wm, basis.vectors, m);
    if (m < 1 || m > wm.n)
        throw rank_error("cmvda_embed_train: M = " + std::to_string(m) + " outside 1.." +
                         std::to_string(wm.n));
    // Closed form: the leading rows are exact scaled one-hots.
    Eigen::MatrixXd embedding = Eigen::MatrixXd::Zero(m, wm.n);
    const int leading = std::min(m, basis.num_classes);
    for (int i = 0; i < leading; ++i) {
        const int k = basis.leading_class[i];
        const double value = 1.0 / std::sqrt(static_cast<double>(ind.counts[k]));
        for (int row : ind.rows[k]) embedding(i, row) = value;
    }
    for (int i = leading; i < m; ++i) embedding.row(i) = basis.vectors.col(i).transpose();
    return embedding;
}

Eigen::MatrixXd cmvda_embed_test(const WhitenedModel& wm, const Eigen::MatrixXd& basis_cols,
                                 const Eigen::MatrixXd& k_cols, int m) {
    if (m < 1 || m > wm.n)
        throw rank_error("cmvda_embed_test: M = " + std::to_string(m) + " outside 1.." +
                         std::to_string(wm.n));
    if (basis_cols.rows() != wm.n || basis_cols.cols() < m)
        throw domain_error("cmvda_embed_test: basis shape mismatch");
    if (k_cols.rows() != wm.n)
        throw domain_error("cmvda_embed_test: kernel columns do not match training size");
    return (basis_cols.leftCols(m).transpose() * wm.u_r) *
           wm.lambda_r.cwiseInverse().asDiagonal() * (wm.u_r.transpose() * k_cols);
}

Eigen::MatrixXd cmvda_r_basis(int n, std::uint64_t seed) {
    if (n < 1) throw domain_error("cmvda_r_basis: n must be at least 1");
    Eigen::MatrixXd basis(n, n);
    basis.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 1; k < n; ++k) {
        while (true) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = gauss(rng);
            for (int j = 0; j < k; ++j) v -= basis.col(j).dot(v) * basis.col(j);
            const double norm = v.norm();
            if (norm < 1e-8) continue;  // near-dependent draw, try again
            v /= norm;
            fix_sign_first_nonzero(v);
            basis.col(k) = v;
            break;
        }
    }
    return basis;
}

double discriminant_axis_score(const Eigen::VectorXd& axis, const ClassIndicators& ind,
                               double lambda) {
    if (axis.size() != ind.n)
        throw domain_error("discriminant_axis_score: axis length mismatch");
    const double axis_norm2 = axis.squaredNorm();
    if (axis_norm2 <= 0.0) return 0.0;
    double sum = 0.0;
    for (int k = 0; k < ind.num_classes(); ++k) {
        const double dot = ind.indicator.col(k).dot(axis);
        const double norm2_e = 1.0 / ind.counts[k];
        const double cos_sq = (dot * dot) / (axis_norm2 * norm2_e);
        sum += (lambda / ind.counts[k]) * cos_sq;
    }
    return 2.0 * sum / ind.n;
}

Eigen::MatrixXd order_basis_by_rayleigh(const Eigen::MatrixXd& basis_cols,
                                        const ClassIndicators& ind) {
    const int cols = static_cast<int>(basis_cols.cols());
    std::vector<double> score(cols);
    for (int j = 0; j < cols; ++j) score[j] = rayleigh_axis_score(basis_cols.col(j), ind);
    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    Eigen::MatrixXd out(basis_cols.rows(), cols);
    for (int j = 0; j < cols; ++j) out.col(j) = basis_cols.col(order[j]);
    return out;
}

} // namespace ksl
