#include "colglasso/metrics.hpp"

#include <cmath>

namespace colglasso {

namespace {

bool values_equal(double x, double y, double eps) {
    if (eps > 0) return std::abs(x - y) < eps;
    return x == y;
}

}  // namespace

double mse(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols())
        throw std::invalid_argument("mse: dimension mismatch");
    const double denom = truth.squaredNorm();
    if (denom == 0) throw std::invalid_argument("mse: zero truth matrix");
    return (est - truth).squaredNorm() / denom;
}

F1Counts f1_score(const std::vector<char>& est_nonzero, const std::vector<char>& true_nonzero) {
    if (est_nonzero.size() != true_nonzero.size())
        throw std::invalid_argument("f1_score: pattern length mismatch");
    F1Counts out;
    for (std::size_t j = 0; j < est_nonzero.size(); ++j) {
        if (est_nonzero[j] && true_nonzero[j]) ++out.tp;
        else if (est_nonzero[j] && !true_nonzero[j]) ++out.fp;
        else if (!est_nonzero[j] && true_nonzero[j]) ++out.fn;
    }
    const int denom = 2 * out.tp + out.fp + out.fn;
    out.f1 = denom == 0 ? 1.0 : 2.0 * out.tp / denom;
    return out;
}

double d0(const std::vector<char>& est_nonzero, const std::vector<char>& true_nonzero) {
    if (est_nonzero.size() != true_nonzero.size())
        throw std::invalid_argument("d0: pattern length mismatch");
    if (est_nonzero.empty()) throw std::invalid_argument("d0: empty pattern");
    int correct = 0;
    for (std::size_t j = 0; j < est_nonzero.size(); ++j)
        if (static_cast<bool>(est_nonzero[j]) == static_cast<bool>(true_nonzero[j])) ++correct;
    return static_cast<double>(correct) / est_nonzero.size();
}

double d_vertex_class(const Eigen::VectorXd& est_diag, const std::vector<int>& true_class,
                      double eps_merge) {
    const int p = static_cast<int>(est_diag.size());
    if (true_class.empty()) throw std::invalid_argument("d_vertex_class: empty class");
    std::vector<char> member(p, 0);
    for (int j : true_class) member.at(j) = 1;

    int num = 0;
    for (int j : true_class) {
        for (int jp = 0; jp < p; ++jp) {
            if (jp == j) continue;
            const bool eq = values_equal(est_diag[j], est_diag[jp], eps_merge);
            if (member[jp] ? eq : !eq) ++num;
        }
    }
    return static_cast<double>(num) / (static_cast<double>(true_class.size()) * (p - 1));
}

double d_edge_class(const Eigen::VectorXd& est_beta, const std::vector<int>& true_class,
                    double eps_merge) {
    const int m = static_cast<int>(est_beta.size());
    if (true_class.empty()) throw std::invalid_argument("d_edge_class: empty class");
    std::vector<char> member(m, 0);
    for (int j : true_class) member.at(j) = 1;

    auto eq_slots = [&](int x, int y) {
        if (est_beta[x] == 0.0 && est_beta[y] == 0.0) return true;
        return values_equal(est_beta[x], est_beta[y], eps_merge);
    };
    int num = 0;
    for (int j : true_class) {
        for (int jp = 0; jp < m; ++jp) {
            if (jp == j) continue;
            const bool eq = eq_slots(j, jp);
            if (member[jp] ? eq : !eq) ++num;
        }
    }
    return static_cast<double>(num) / (static_cast<double>(true_class.size()) * (m - 1));
}

double acc_all(double d0_value, const std::vector<double>& d_vertex,
               const std::vector<double>& d_edge) {
    double total = d0_value;
    for (double v : d_vertex) total += v;
    for (double v : d_edge) total += v;
    return total / (1.0 + d_vertex.size() + d_edge.size());
}

MetricsReport evaluate(const PrecisionParams& est, const Eigen::MatrixXd& true_theta,
                       const ColoredGraph& true_graph, double eps_merge) {
    const int p = est.p();
    if (true_theta.rows() != p || true_graph.p != p)
        throw std::invalid_argument("evaluate: dimension mismatch");
    const int m = pair_count(p);

    MetricsReport rep;
    rep.mse = mse(est.to_matrix(), true_theta);

    std::vector<char> est_nz(m), true_nz(m);
    const auto tab = pair_table(p);
    for (int j = 0; j < m; ++j) {
        est_nz[j] = est.beta()[j] != 0.0;
        true_nz[j] = true_theta(tab[j].first, tab[j].second) != 0.0;
    }
    rep.f1 = f1_score(est_nz, true_nz);
    rep.d0 = d0(est_nz, true_nz);

    for (const auto& cls : true_graph.vertex_classes)
        rep.d_vertex.push_back(d_vertex_class(est.diag(), cls, eps_merge));
    for (const auto& cls : true_graph.edge_classes) {
        std::vector<int> slots;
        slots.reserve(cls.size());
        for (auto [u, v] : cls) slots.push_back(pair_index(u, v, p));
        rep.d_edge.push_back(d_edge_class(est.beta(), slots, eps_merge));
    }
    rep.acc_all = acc_all(rep.d0, rep.d_vertex, rep.d_edge);
    return rep;
}

}  // namespace colglasso
