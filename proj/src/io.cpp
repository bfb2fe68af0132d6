#include "colglasso/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace colglasso {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void commit(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

bool parse_double(const std::string& field, double& value) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && begin != end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

json graph_to_json(const ColoredGraph& g) {
    // 1-based indices on disk, matching the x1..xp column names
    json vc = json::array();
    for (const auto& cls : g.vertex_classes) {
        json c = json::array();
        for (int v : cls) c.push_back(v + 1);
        vc.push_back(c);
    }
    json es = json::array();
    for (auto [u, v] : g.edge_set) es.push_back({u + 1, v + 1});
    json ec = json::array();
    for (const auto& cls : g.edge_classes) {
        json c = json::array();
        for (auto [u, v] : cls) c.push_back({u + 1, v + 1});
        ec.push_back(c);
    }
    return json{{"vertex_classes", vc}, {"edge_set", es}, {"edge_classes", ec}};
}

ColoredGraph graph_from_json(const json& j, int p) {
    ColoredGraph g;
    g.p = p;
    for (const auto& cls : j.at("vertex_classes")) {
        std::vector<int> out;
        for (const auto& v : cls) out.push_back(v.get<int>() - 1);
        g.vertex_classes.push_back(std::move(out));
    }
    for (const auto& e : j.at("edge_set"))
        g.edge_set.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    for (const auto& cls : j.at("edge_classes")) {
        std::vector<std::pair<int, int>> out;
        for (const auto& e : cls)
            out.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
        g.edge_classes.push_back(std::move(out));
    }
    g.validate();
    return g;
}

json matrix_to_json(const Eigen::MatrixXd& mat) {
    json flat = json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
        for (Eigen::Index c = 0; c < mat.cols(); ++c) flat.push_back(mat(r, c));
    return flat;
}

Eigen::MatrixXd matrix_from_json(const json& flat, int p) {
    if (static_cast<int>(flat.size()) != p * p)
        throw InputError("theta array has wrong length");
    Eigen::MatrixXd mat(p, p);
    int i = 0;
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) mat(r, c) = flat.at(i++).get<double>();
    return mat;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr.at(i).get<double>();
    return v;
}

json parse_file(const std::string& path) {
    auto in = open_in(path);
    try {
        return json::parse(in);
    } catch (const json::exception& err) {
        throw InputError(path + ": " + err.what());
    }
}

}  // namespace

DataMatrix read_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (first_content_row) {
            first_content_row = false;
            width = fields.size();
            double probe;
            if (!parse_double(fields[0], probe)) continue;  // header row
        }
        if (fields.size() != width)
            throw InputError(path + ": row " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(width));
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_double(fields[c], row[c]))
                throw InputError(path + ": non-numeric value at row " +
                                 std::to_string(line_no) + ", column " + std::to_string(c + 1));
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw InputError(path + ": need at least 2 data rows");
    if (width < 2) throw InputError(path + ": need at least 2 columns");
    Eigen::MatrixXd X(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c) X(r, c) = rows[r][c];
    return DataMatrix(std::move(X));
}

void write_csv_data(const std::string& path, const DataMatrix& data) {
    auto out = open_out(path);
    const Eigen::MatrixXd& X = data.values();
    for (int c = 0; c < data.p(); ++c) out << (c ? "," : "") << "x" << (c + 1);
    out << "\n";
    for (int r = 0; r < data.n(); ++r) {
        for (int c = 0; c < data.p(); ++c) out << (c ? "," : "") << fmt17(X(r, c));
        out << "\n";
    }
    commit(out, path);
}

void write_truth_json(const std::string& path, const TruthFile& truth) {
    json j = graph_to_json(truth.graph);
    j["schema_version"] = 1;
    j["kind"] = "truth";
    j["family"] = truth.family;
    j["p"] = truth.p;
    j["n"] = truth.n;
    j["seed"] = truth.seed;
    j["theta"] = matrix_to_json(truth.theta);
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    commit(out, path);
}

TruthFile read_truth_json(const std::string& path) {
    const json j = parse_file(path);
    TruthFile t;
    try {
        t.family = j.at("family").get<std::string>();
        t.p = j.at("p").get<int>();
        t.n = j.value("n", 0);
        t.seed = j.value("seed", std::uint64_t{0});
        t.theta = matrix_from_json(j.at("theta"), t.p);
        t.graph = graph_from_json(j, t.p);
    } catch (const json::exception& err) {
        throw InputError(path + ": " + err.what());
    }
    return t;
}

void write_estimate_json(const std::string& path, const EstimateFile& est) {
    json j = graph_to_json(est.estimate.graph);
    j["schema_version"] = 1;
    j["kind"] = "estimate";
    j["p"] = est.p;
    j["n"] = est.n;
    j["diag"] = vector_to_json(est.estimate.params.diag());
    j["beta"] = vector_to_json(est.estimate.params.beta());
    j["theta"] = matrix_to_json(est.estimate.params.to_matrix());
    j["df"] = est.estimate.df;
    j["loglik"] = est.estimate.loglik;
    j["bic"] = est.estimate.bic;
    j["hyperparams"] = {{"lambda1", est.hyper.lambda1}, {"lambda2", est.hyper.lambda2},
                        {"lambda3", est.hyper.lambda3}, {"tau", est.hyper.tau},
                        {"rho", est.hyper.rho},         {"eps_zero", est.hyper.eps_zero},
                        {"eps_merge", est.hyper.eps_merge}};
    j["converged"] = est.converged;
    j["dc_iterations"] = est.dc_iterations;
    j["objective_trace"] = est.objective_trace;
    j["final_alm_residual"] = est.final_alm_residual;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    commit(out, path);
}

EstimateFile read_estimate_json(const std::string& path) {
    const json j = parse_file(path);
    try {
        const int p = j.at("p").get<int>();
        PrecisionParams params(vector_from_json(j.at("diag")), vector_from_json(j.at("beta")));
        ColoredGraph graph = graph_from_json(j, p);
        ColoredGraphEstimate est{std::move(params), std::move(graph), j.at("df").get<int>(),
                                 j.value("loglik", std::numeric_limits<double>::quiet_NaN()),
                                 j.value("bic", std::numeric_limits<double>::quiet_NaN())};
        EstimateFile out{p,
                         j.value("n", 0),
                         std::move(est),
                         Hyperparams{},
                         j.value("converged", false),
                         j.value("dc_iterations", 0),
                         {},
                         j.value("final_alm_residual", 0.0)};
        if (j.contains("hyperparams")) {
            const json& h = j["hyperparams"];
            out.hyper.lambda1 = h.value("lambda1", 0.0);
            out.hyper.lambda2 = h.value("lambda2", 0.0);
            out.hyper.lambda3 = h.value("lambda3", 0.0);
            out.hyper.tau = h.value("tau", 0.5);
            out.hyper.rho = h.value("rho", 2.0);
            out.hyper.eps_zero = h.value("eps_zero", 1e-6);
            out.hyper.eps_merge = h.value("eps_merge", 1e-3);
        }
        if (j.contains("objective_trace"))
            out.objective_trace = j["objective_trace"].get<std::vector<double>>();
        return out;
    } catch (const json::exception& err) {
        throw InputError(path + ": " + err.what());
    }
}

void write_trace_csv(const std::string& path, const std::vector<TuneRow>& rows,
                     const Hyperparams& best) {
    auto out = open_out(path);
    out << "lambda1,lambda2,lambda3,tau,loglik,df,bic,converged,failed,best\n";
    for (const auto& r : rows) {
        const bool is_best = !r.failed && r.lambda1 == best.lambda1 &&
                             r.lambda2 == best.lambda2 && r.lambda3 == best.lambda3 &&
                             r.tau == best.tau;
        out << fmt17(r.lambda1) << "," << fmt17(r.lambda2) << "," << fmt17(r.lambda3) << ","
            << fmt17(r.tau) << ",";
        if (r.failed)
            out << ",,,0,1,0\n";
        else
            out << fmt17(r.loglik) << "," << r.df << "," << fmt17(r.bic) << ","
                << (r.converged ? 1 : 0) << ",0," << (is_best ? 1 : 0) << "\n";
    }
    commit(out, path);
}

void write_metrics_json(const std::string& path, const MetricsReport& rep) {
    json j{{"mse", rep.mse},
           {"tp", rep.f1.tp},
           {"fp", rep.f1.fp},
           {"fn", rep.f1.fn},
           {"f1", rep.f1.f1},
           {"d0", rep.d0},
           {"d_vertex", rep.d_vertex},
           {"d_edge", rep.d_edge},
           {"acc_all", rep.acc_all}};
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    commit(out, path);
}

std::string export_dot(const ColoredGraph& graph) {
    static const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                     "#e6ab02", "#a6761d", "#666666", "#386cb0", "#f0027f"};
    static constexpr const char* kSingleton = "#e49b0f";  // gamboge
    constexpr int kPaletteSize = 10;

    std::ostringstream out;
    out << "graph colglasso {\n";
    out << "  node [style=filled, shape=circle];\n";

    std::vector<std::string> vertex_color(graph.p, kSingleton);
    int next_color = 0;
    for (const auto& cls : graph.vertex_classes) {
        const std::string color =
            cls.size() == 1 ? kSingleton : kPalette[next_color++ % kPaletteSize];
        for (int v : cls) vertex_color[v] = color;
    }
    for (int v = 0; v < graph.p; ++v)
        out << "  x" << (v + 1) << " [fillcolor=\"" << vertex_color[v] << "\"];\n";

    std::vector<std::pair<std::pair<int, int>, std::string>> edges;
    for (const auto& cls : graph.edge_classes) {
        const std::string color =
            cls.size() == 1 ? kSingleton : kPalette[next_color++ % kPaletteSize];
        for (auto e : cls) edges.emplace_back(e, color);
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& [e, color] : edges)
        out << "  x" << (e.first + 1) << " -- x" << (e.second + 1) << " [color=\"" << color
            << "\", penwidth=2];\n";
    out << "}\n";
    return out.str();
}

std::string mean_sd_cell(double mean, double sd) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f(%.4f)", mean, sd);
    return buf;
}

}  // namespace colglasso
