#include "colglasso/types.hpp"

#include <cmath>
#include <limits>

namespace colglasso {

int pair_index(int q, int l, int p) {
    if (q < 0 || l <= q || l >= p)
        throw std::invalid_argument("pair_index: need 0 <= q < l < p");
    return q * p - q * (q + 1) / 2 + (l - q - 1);
}

std::pair<int, int> pair_from_index(int idx, int p) {
    if (idx < 0 || idx >= pair_count(p))
        throw std::invalid_argument("pair_from_index: index out of range");
    int q = 0;
    int offset = 0;
    while (offset + (p - q - 1) <= idx) {
        offset += p - q - 1;
        ++q;
    }
    return {q, q + 1 + (idx - offset)};
}

std::vector<std::pair<int, int>> pair_table(int p) {
    std::vector<std::pair<int, int>> tab;
    tab.reserve(pair_count(p));
    for (int q = 0; q < p; ++q)
        for (int l = q + 1; l < p; ++l) tab.emplace_back(q, l);
    return tab;
}

DataMatrix::DataMatrix(Eigen::MatrixXd values, bool centered)
    : values_(std::move(values)), centered_(centered) {
    if (values_.rows() < 2 || values_.cols() < 2)
        throw std::invalid_argument("DataMatrix: need n >= 2 and p >= 2");
    if (!values_.allFinite())
        throw std::invalid_argument("DataMatrix: non-finite entries");
}

DataMatrix center_columns(const DataMatrix& data) {
    const Eigen::MatrixXd& X = data.values();
    Eigen::MatrixXd C = X.rowwise() - X.colwise().mean();
    return DataMatrix(std::move(C), true);
}

GramCache::GramCache(Eigen::MatrixXd S) : S_(std::move(S)) {
    if (S_.rows() != S_.cols())
        throw std::invalid_argument("GramCache: matrix not square");
    if (!S_.isApprox(S_.transpose(), 1e-12))
        throw std::invalid_argument("GramCache: matrix not symmetric");
    if ((S_.diagonal().array() < 0).any())
        throw std::invalid_argument("GramCache: negative diagonal entry");
}

GramCache gram(const DataMatrix& data) {
    if (!data.centered())
        throw std::invalid_argument("gram: data must be centered");
    const Eigen::MatrixXd& X = data.values();
    Eigen::MatrixXd S = X.transpose() * X;
    S = ((S + S.transpose()) / 2.0).eval();  // kill asymmetric rounding
    return GramCache(std::move(S));
}

PrecisionParams::PrecisionParams(Eigen::VectorXd diag, Eigen::VectorXd beta)
    : diag_(std::move(diag)), beta_(std::move(beta)) {
    const int p = static_cast<int>(diag_.size());
    if (p < 2)
        throw std::invalid_argument("PrecisionParams: need p >= 2");
    if (beta_.size() != pair_count(p))
        throw std::invalid_argument("PrecisionParams: beta has wrong length");
    if (!(diag_.array() > 0).all())
        throw std::invalid_argument("PrecisionParams: diagonal must be positive");
    if (!diag_.allFinite() || !beta_.allFinite())
        throw std::invalid_argument("PrecisionParams: non-finite entries");
}

Eigen::MatrixXd PrecisionParams::to_matrix() const {
    const int d = p();
    Eigen::MatrixXd T = diag_.asDiagonal();
    int idx = 0;
    for (int q = 0; q < d; ++q)
        for (int l = q + 1; l < d; ++l, ++idx) T(q, l) = T(l, q) = beta_[idx];
    return T;
}

PrecisionParams PrecisionParams::from_matrix(const Eigen::MatrixXd& theta) {
    if (theta.rows() != theta.cols())
        throw std::invalid_argument("from_matrix: matrix not square");
    if (!theta.isApprox(theta.transpose(), 1e-12))
        throw std::invalid_argument("from_matrix: matrix not symmetric");
    const int p = static_cast<int>(theta.rows());
    Eigen::VectorXd beta(pair_count(p));
    int idx = 0;
    for (int q = 0; q < p; ++q)
        for (int l = q + 1; l < p; ++l, ++idx)
            beta[idx] = (theta(q, l) + theta(l, q)) / 2.0;
    return PrecisionParams(theta.diagonal(), std::move(beta));
}

void Hyperparams::validate() const {
    if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0)
        throw std::invalid_argument("Hyperparams: lambdas must be nonnegative");
    if (!(tau > 0)) throw std::invalid_argument("Hyperparams: tau must be positive");
    if (!(rho > 1)) throw std::invalid_argument("Hyperparams: rho must exceed 1");
    if (!(eps_cd > 0) || !(eps_alm > 0) || !(eps_dc > 0))
        throw std::invalid_argument("Hyperparams: tolerances must be positive");
    if (max_cd < 1 || max_alm < 1 || max_dc < 1)
        throw std::invalid_argument("Hyperparams: iteration caps must be >= 1");
    if (!(eps_zero > 0) || !(eps_merge > 0))
        throw std::invalid_argument("Hyperparams: thresholds must be positive");
}

void ColoredGraph::validate() const {
    std::vector<int> seen(p, 0);
    for (const auto& cls : vertex_classes) {
        if (cls.empty()) throw std::invalid_argument("ColoredGraph: empty vertex class");
        for (int v : cls) {
            if (v < 0 || v >= p) throw std::invalid_argument("ColoredGraph: vertex out of range");
            if (seen[v]++) throw std::invalid_argument("ColoredGraph: vertex in two classes");
        }
    }
    for (int v = 0; v < p; ++v)
        if (!seen[v]) throw std::invalid_argument("ColoredGraph: vertex missing from classes");

    std::vector<std::pair<int, int>> covered;
    for (const auto& cls : edge_classes) {
        if (cls.empty()) throw std::invalid_argument("ColoredGraph: empty edge class");
        covered.insert(covered.end(), cls.begin(), cls.end());
    }
    auto sorted_edges = edge_set;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end())
        throw std::invalid_argument("ColoredGraph: edge in two classes");
    if (covered != sorted_edges)
        throw std::invalid_argument("ColoredGraph: edge classes do not cover the edge set");
}

}  // namespace colglasso
