#include "ksl/components.hpp"

#include "ksl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ksl {

namespace {

// cos^2 between a unit-or-general vector and a target; 0 when either is zero.
double cos2(double dot, double norm2_a, double norm2_b) {
    if (norm2_a <= 0.0 || norm2_b <= 0.0) return 0.0;
    return (dot * dot) / (norm2_a * norm2_b);
}

} // namespace

ClassIndicators class_indicators(const std::vector<int>& labels, int num_classes) {
    ClassIndicators ind;
    ind.n = static_cast<int>(labels.size());
    if (ind.n == 0) throw domain_error("class_indicators: no samples");
    ind.counts.assign(num_classes, 0);
    ind.rows.assign(num_classes, {});
    for (int i = 0; i < ind.n; ++i) {
        const int c = labels[i];
        if (c < 0 || c >= num_classes)
            throw domain_error("class_indicators: label out of range");
        ++ind.counts[c];
        ind.rows[c].push_back(i);
    }
    for (int c = 0; c < num_classes; ++c)
        if (ind.counts[c] == 0)
            throw domain_error("class_indicators: class " + std::to_string(c) + " is empty");

    ind.priors.resize(num_classes);
    ind.indicator = Eigen::MatrixXd::Zero(ind.n, num_classes);
    for (int c = 0; c < num_classes; ++c) {
        ind.priors[c] = static_cast<double>(ind.counts[c]) / ind.n;
        for (int i : ind.rows[c]) ind.indicator(i, c) = 1.0 / ind.counts[c];
    }
    ind.total = Eigen::VectorXd::Constant(ind.n, 1.0 / ind.n);
    return ind;
}

ClassIndicators class_indicators(const Dataset& ds) {
    return class_indicators(ds.labels, ds.num_classes());
}

double class_pair_distance(const SpectralModel& model, const ClassIndicators& ind, int k, int m) {
    if (k < 0 || k >= ind.num_classes() || m < 0 || m >= ind.num_classes())
        throw domain_error("class_pair_distance: class index out of range");
    if (k == m) return 0.0;
    const Eigen::VectorXd diff = ind.indicator.col(k) - ind.indicator.col(m);
    double sum = 0.0;
    for (int d = 0; d < model.rank; ++d) {
        const double a = model.eigenvectors.col(d).dot(diff);
        sum += model.eigenvalues(d) * a * a;
    }
    return sum;
}

double criterion_total(const SpectralModel& model, const ClassIndicators& ind) {
    const int c = ind.num_classes();
    double total = 0.0;
    for (int k = 0; k < c; ++k)
        for (int m = 0; m < c; ++m)
            if (k != m)
                total += ind.priors[k] * ind.priors[m] * class_pair_distance(model, ind, k, m);
    return total;
}

ComponentScores score_components(const SpectralModel& model, const ClassIndicators& ind) {
    const int r = model.rank;
    const int c = ind.num_classes();
    const int n = ind.n;

    ComponentScores scores;
    scores.lambda.resize(r);
    scores.entropy.resize(r);
    scores.alignment.resize(r);
    scores.cmvca.resize(r);
    scores.rayleigh.resize(r);

    // ||e_k||^2 = 1/N_k and ||e_k - e_m||^2 = 1/N_k + 1/N_m (disjoint supports).
    Eigen::VectorXd ind_norm2(c);
    for (int k = 0; k < c; ++k) ind_norm2(k) = 1.0 / ind.counts[k];

    const Eigen::MatrixXd dots = ind.indicator.transpose() * model.eigenvectors;  // C x L

    for (int d = 0; d < r; ++d) {
        const double lambda = model.eigenvalues(d);
        scores.lambda(d) = lambda;

        const double mass = model.eigenvectors.col(d).sum();
        scores.entropy(d) = lambda * mass * mass;

        double alignment = 0.0;
        double rayleigh = 0.0;
        for (int k = 0; k < c; ++k) {
            rayleigh += (1.0 / ind.counts[k]) * cos2(dots(k, d), 1.0, ind_norm2(k));
            for (int m = 0; m < c; ++m) {
                if (k == m) continue;
                const double a = cos2(dots(k, d) - dots(m, d), 1.0, ind_norm2(k) + ind_norm2(m));
                alignment += (ind.counts[k] + ind.counts[m]) * a;
            }
        }
        scores.alignment(d) = alignment / (static_cast<double>(n) * n);
        scores.cmvca(d) = lambda * scores.alignment(d);
        scores.rayleigh(d) = rayleigh;
    }
    return scores;
}

double rayleigh_axis_score(const Eigen::VectorXd& axis, const ClassIndicators& ind) {
    if (axis.size() != ind.n) throw domain_error("rayleigh_axis_score: axis length mismatch");
    const double axis_norm2 = axis.squaredNorm();
    double score = 0.0;
    for (int k = 0; k < ind.num_classes(); ++k) {
        const double dot = ind.indicator.col(k).dot(axis);
        score += (1.0 / ind.counts[k]) * cos2(dot, axis_norm2, 1.0 / ind.counts[k]);
    }
    return score;
}

const Eigen::VectorXd& scores_for(const ComponentScores& scores, Criterion criterion) {
    switch (criterion) {
        case Criterion::kpca: return scores.lambda;
        case Criterion::keca: return scores.entropy;
        case Criterion::cmvca: return scores.cmvca;
        case Criterion::rayleigh: return scores.rayleigh;
    }
    throw domain_error("scores_for: unknown criterion");
}

SubspaceMap select(const SpectralModel& model, const ComponentScores& scores,
                   Criterion criterion, int m) {
    const int r = scores.size();
    if (m < 1 || m > r)
        throw rank_error("select: M = " + std::to_string(m) + " outside 1.." + std::to_string(r));

    const Eigen::VectorXd& values = scores_for(scores, criterion);
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (values(a) != values(b)) return values(a) > values(b);
        return a < b;
    });

    SubspaceMap map;
    map.criterion = criterion;
    map.dims.assign(order.begin(), order.begin() + m);
    map.lambdas.resize(m);
    map.basis.resize(model.sample_count(), m);
    for (int l = 0; l < m; ++l) {
        map.lambdas(l) = model.eigenvalues(map.dims[l]);
        map.basis.col(l) = model.eigenvectors.col(map.dims[l]);
    }
    return map;
}

Eigen::MatrixXd project_dataset(const SubspaceMap& map, const Eigen::MatrixXd& k_cols) {
    if (k_cols.rows() != map.basis.rows())
        throw domain_error("project_dataset: kernel columns do not match training size");
    Eigen::MatrixXd out = map.basis.transpose() * k_cols;
    for (int l = 0; l < out.rows(); ++l) {
        if (!(map.lambdas(l) > 0.0))
            throw rank_error("project_dataset: selected dimension has zero eigenvalue");
        out.row(l) /= std::sqrt(map.lambdas(l));
    }
    return out;
}

KdaMap kda_baseline(const SpectralModel& model, const ClassIndicators& ind, int m) {
    const int c = ind.num_classes();
    const int r = model.rank;
    if (r < c)
        throw rank_error("kda_baseline: model rank " + std::to_string(r) +
                         " is below the number of classes " + std::to_string(c));
    if (m < 1 || m > c - 1)
        throw rank_error("kda_baseline: M = " + std::to_string(m) +
                         " exceeds the between-class scatter rank " + std::to_string(c - 1));

    // Whitened training data: rows of U_r^T. Class means and total mean there.
    const Eigen::MatrixXd u_r = model.eigenvectors.leftCols(r);
    Eigen::MatrixXd class_means(r, c);
    for (int k = 0; k < c; ++k) class_means.col(k) = u_r.transpose() * ind.indicator.col(k);
    const Eigen::VectorXd total_mean = u_r.transpose() * ind.total;

    Eigen::MatrixXd s_b = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < c; ++k) {
        const Eigen::VectorXd delta = class_means.col(k) - total_mean;
        s_b += ind.counts[k] * delta * delta.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s_b);
    if (solver.info() != Eigen::Success)
        throw numeric_error("kda_baseline: eigensolver failed on the between-class scatter");
    const SpectralModel sb_model =
        finalize_spectrum(solver.eigenvalues(), solver.eigenvectors(), 1e-12);

    Eigen::MatrixXd directions(r, m);  // in whitened coordinates
    for (int l = 0; l < m; ++l) directions.col(l) = sb_model.eigenvectors.col(l);

    // Projection of a kernel column k: V^T Lambda_r^{-1} U_r^T k.
    KdaMap map;
    map.dims = m;
    map.directions = directions;
    map.projector = directions.transpose() *
                    model.eigenvalues.head(r).cwiseInverse().asDiagonal() * u_r.transpose();
    return map;
}

Eigen::MatrixXd project_dataset(const KdaMap& map, const Eigen::MatrixXd& k_cols) {
    if (k_cols.rows() != map.projector.cols())
        throw domain_error("project_dataset: kernel columns do not match training size");
    return map.projector * k_cols;
}

} // namespace ksl
