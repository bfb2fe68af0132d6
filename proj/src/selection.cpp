#include "colglasso/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace colglasso {

void TuneGrid::validate() const {
    auto check = [](const std::vector<double>& v, const char* name) {
        if (v.empty()) throw std::invalid_argument(std::string("TuneGrid: empty ") + name);
    };
    check(lambda1s, "lambda1 list");
    check(lambda2s, "lambda2 list");
    check(lambda3s, "lambda3 list");
    check(taus, "tau list");
    for (double v : lambda1s)
        if (v < 0) throw std::invalid_argument("TuneGrid: negative lambda1");
    for (double v : lambda2s)
        if (v < 0) throw std::invalid_argument("TuneGrid: negative lambda2");
    for (double v : lambda3s)
        if (v < 0) throw std::invalid_argument("TuneGrid: negative lambda3");
    for (double v : taus)
        if (!(v > 0)) throw std::invalid_argument("TuneGrid: tau must be positive");
}

namespace {

// Single-linkage clustering of (value, index) items: split where the sorted
// gap reaches eps_merge. Returns classes as index lists ordered by value.
std::vector<std::vector<int>> cluster_values(std::vector<std::pair<double, int>> items,
                                             double eps_merge) {
    std::vector<std::vector<int>> classes;
    if (items.empty()) return classes;
    std::sort(items.begin(), items.end());
    classes.emplace_back();
    classes.back().push_back(items[0].second);
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[i].first - items[i - 1].first < eps_merge) {
            classes.back().push_back(items[i].second);
        } else {
            classes.emplace_back();
            classes.back().push_back(items[i].second);
        }
    }
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    return classes;
}

}  // namespace

ColoredGraphEstimate extract_colored_estimate(const PrecisionParams& params, double eps_zero,
                                              double eps_merge) {
    if (!(eps_zero > 0) || !(eps_merge > 0))
        throw std::invalid_argument("extract_colored_estimate: thresholds must be positive");
    const int p = params.p();
    const int m = pair_count(p);

    Eigen::VectorXd beta = params.beta();
    for (int j = 0; j < m; ++j)
        if (std::abs(beta[j]) < eps_zero) beta[j] = 0.0;

    std::vector<std::pair<double, int>> diag_items;
    for (int j = 0; j < p; ++j) diag_items.emplace_back(params.diag()[j], j);
    const auto vertex_classes = cluster_values(std::move(diag_items), eps_merge);

    std::vector<std::pair<double, int>> beta_items;
    for (int j = 0; j < m; ++j)
        if (beta[j] != 0.0) beta_items.emplace_back(beta[j], j);
    const auto beta_classes = cluster_values(std::move(beta_items), eps_merge);

    Eigen::VectorXd diag = params.diag();
    for (const auto& cls : vertex_classes) {
        double mean = 0.0;
        for (int j : cls) mean += diag[j];
        mean /= cls.size();
        for (int j : cls) diag[j] = mean;
    }
    for (const auto& cls : beta_classes) {
        double mean = 0.0;
        for (int j : cls) mean += beta[j];
        mean /= cls.size();
        for (int j : cls) beta[j] = mean;
    }

    ColoredGraph graph;
    graph.p = p;
    graph.vertex_classes = vertex_classes;
    const auto tab = pair_table(p);
    for (int j = 0; j < m; ++j)
        if (beta[j] != 0.0) graph.edge_set.push_back(tab[j]);
    for (const auto& cls : beta_classes) {
        std::vector<std::pair<int, int>> edges;
        edges.reserve(cls.size());
        for (int j : cls) edges.push_back(tab[j]);
        std::sort(edges.begin(), edges.end());
        graph.edge_classes.push_back(std::move(edges));
    }
    graph.validate();

    ColoredGraphEstimate est{PrecisionParams(std::move(diag), std::move(beta)),
                             std::move(graph), 0,
                             std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::quiet_NaN()};
    est.df = static_cast<int>(est.graph.vertex_classes.size() + est.graph.edge_classes.size());
    return est;
}

double bic_c(const ColoredGraphEstimate& estimate, const GramCache& gram, int n) {
    return -2.0 * composite_loglik(estimate.params, gram, n) + estimate.df * std::log(n);
}

namespace {

struct Candidate {
    double bic;
    int df;
    std::array<double, 4> tuple;
    Hyperparams hyper;
    FitReport fit;
    ColoredGraphEstimate estimate;
};

// Ranking key: BIC, then df, then lexicographic hyperparameter order.
bool better(const Candidate& x, const Candidate& y) {
    if (x.bic != y.bic) return x.bic < y.bic;
    if (x.df != y.df) return x.df < y.df;
    return x.tuple < y.tuple;
}

struct Evaluator {
    const DataMatrix& data;
    const GramCache gram_cache;
    const Hyperparams& base;
    std::vector<TuneRow>& trace;

    Evaluator(const DataMatrix& d, const Hyperparams& b, std::vector<TuneRow>& t)
        : data(d), gram_cache(gram(d)), base(b), trace(t) {}

    std::optional<Candidate> eval(double l1, double l2, double l3, double tau) {
        Hyperparams h = base;
        h.lambda1 = l1;
        h.lambda2 = l2;
        h.lambda3 = l3;
        h.tau = tau;
        TuneRow row{l1, l2, l3, tau};
        try {
            FitReport rep = fit(data, h);
            ColoredGraphEstimate est =
                extract_colored_estimate(rep.params, h.eps_zero, h.eps_merge);
            est.loglik = composite_loglik(est.params, gram_cache, data.n());
            est.bic = -2.0 * est.loglik + est.df * std::log(data.n());
            row.loglik = est.loglik;
            row.df = est.df;
            row.bic = est.bic;
            row.converged = rep.converged;
            trace.push_back(row);
            return Candidate{est.bic, est.df, {l1, l2, l3, tau}, h, std::move(rep),
                             std::move(est)};
        } catch (const std::exception& err) {
            row.failed = true;
            row.error = err.what();
            trace.push_back(row);
            return std::nullopt;
        }
    }
};

TuneResult finish(std::optional<Candidate>&& best, std::vector<TuneRow>&& trace,
                  const char* what) {
    if (!best) throw TuningError(std::string(what) + ": every candidate tuple failed");
    return TuneResult{best->hyper, std::move(best->fit), std::move(best->estimate),
                      std::move(trace)};
}

}  // namespace

TuneResult grid_search(const DataMatrix& data, const TuneGrid& grid, const Hyperparams& base) {
    grid.validate();
    std::vector<TuneRow> trace;
    Evaluator ev(data, base, trace);
    std::optional<Candidate> best;
    for (double l1 : grid.lambda1s)
        for (double l2 : grid.lambda2s)
            for (double l3 : grid.lambda3s)
                for (double tau : grid.taus) {
                    auto cand = ev.eval(l1, l2, l3, tau);
                    if (cand && (!best || better(*cand, *best))) best = std::move(cand);
                }
    return finish(std::move(best), std::move(trace), "grid_search");
}

TuneResult sequential_search(const DataMatrix& data, const TuneGrid& grid,
                             const Hyperparams& base) {
    grid.validate();
    std::vector<TuneRow> trace;
    Evaluator ev(data, base, trace);

    auto anchor = [](const std::vector<double>& v) {
        return *std::min_element(v.begin(), v.end());
    };
    double l1 = anchor(grid.lambda1s);
    double l2 = anchor(grid.lambda2s);
    double l3 = anchor(grid.lambda3s);
    double tau = anchor(grid.taus);

    std::optional<Candidate> best;
    auto line = [&](const std::vector<double>& values, double* slot) {
        std::optional<Candidate> stage_best;
        for (double v : values) {
            *slot = v;
            auto cand = ev.eval(l1, l2, l3, tau);
            if (cand && (!stage_best || better(*cand, *stage_best)))
                stage_best = std::move(cand);
        }
        if (stage_best) {
            *slot = stage_best->tuple[slot == &l1 ? 0 : slot == &l2 ? 1 : slot == &l3 ? 2 : 3];
            best = std::move(stage_best);
        }
    };
    line(grid.lambda1s, &l1);
    line(grid.lambda2s, &l2);
    line(grid.lambda3s, &l3);
    line(grid.taus, &tau);
    return finish(std::move(best), std::move(trace), "sequential_search");
}

TuneResult tune(const DataMatrix& data, const TuneGrid& grid, const Hyperparams& base) {
    return grid.mode == TuneGrid::Mode::FullGrid ? grid_search(data, grid, base)
                                                 : sequential_search(data, grid, base);
}

}  // namespace colglasso
