#include "sublab/report.hpp"

#include <json.hpp>
#include <sstream>

namespace sublab {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vector_to_json(const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string report_json(const ClassificationReport& report, const std::string& map_label,
                        const ParamMap& params, const Eigen::MatrixXd& J) {
    ordered_json j;
    j["version"] = kToolVersion;
    j["map"] = map_label;
    ordered_json par = ordered_json::object();
    for (const auto& [k, v] : params) par[k] = v;
    j["params"] = std::move(par);
    j["J"] = matrix_to_json(J);
    j["sampling"] = {
        {"strategy", report.sampling.strategy == Sampler::Strategy::Random ? "random"
                                                                           : "grid"},
        {"n", report.sampling.count},
        {"seed", report.sampling.seed}};
    j["tolerances"] = {{"rank", report.tols.rank},
                       {"cluster", report.tols.cluster},
                       {"angle", report.tols.angle},
                       {"exact", report.tols.exact},
                       {"first_order", report.tols.first_order},
                       {"second_order", report.tols.second_order},
                       {"compat", report.tols.compat}};
    j["verdict"] = verdict_name(report.verdict);
    if (report.theta)
        j["theta"] = *report.theta;
    else
        j["theta"] = nullptr;
    j["dims"] = {{"m", report.m},
                 {"n", report.n},
                 {"vertical", report.dim_vertical},
                 {"D1", report.dim_D1},
                 {"D2", report.dim_D2}};

    ordered_json points = ordered_json::array();
    for (const auto& pa : report.points) {
        ordered_json rec;
        rec["point"] = vector_to_json(pa.point);
        if (pa.theta)
            rec["theta"] = *pa.theta;
        else
            rec["theta"] = nullptr;
        ordered_json sig = ordered_json::array();
        for (int i = 0; i < pa.spectrum.sigma_sq.size(); ++i)
            sig.push_back(pa.spectrum.sigma_sq(i));
        rec["sigma_sq"] = std::move(sig);
        ordered_json res = ordered_json::object();
        for (const auto& [name, value] : pa.residuals) res[name] = value;
        rec["residuals"] = std::move(res);
        points.push_back(std::move(rec));
    }
    j["points"] = std::move(points);

    ordered_json checks = ordered_json::object();
    for (const auto& c : report.checks) {
        checks[c.name] = {{"max_residual", c.max_residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"applicable", c.applicable}};
    }
    j["checks"] = std::move(checks);

    return j.dump(2) + "\n";
}

std::string report_text(const ClassificationReport& report, const std::string& map_label,
                        const ParamMap& params) {
    std::ostringstream out;
    out << "map: " << map_label << "\n";
    if (!params.empty()) {
        out << "params:";
        for (const auto& [k, v] : params) out << " " << k << "=" << v;
        out << "\n";
    }
    out << "dims: m=" << report.m << " n=" << report.n
        << " vertical=" << report.dim_vertical << " D1=" << report.dim_D1
        << " D2=" << report.dim_D2 << "\n";
    out << "verdict: " << verdict_name(report.verdict);
    if (!report.annotation.empty()) out << "  (" << report.annotation << ")";
    out << "\n";
    if (report.theta)
        out << "theta: " << *report.theta << "  (spread " << report.theta_spread << ")\n";
    else
        out << "theta: absent\n";
    if (!report.diagnostic.empty()) out << "diagnostic: " << report.diagnostic << "\n";

    int analyzed = 0;
    for (const auto& pa : report.points)
        if (!pa.rank_deficient && pa.error.empty()) ++analyzed;
    out << "points: " << analyzed << " analyzed of " << report.points.size()
        << " sampled (strategy "
        << (report.sampling.strategy == Sampler::Strategy::Random ? "random" : "grid")
        << ", seed " << report.sampling.seed << ")\n";

    if (!report.checks.empty()) {
        out << "checks:\n";
        for (const auto& c : report.checks) {
            out << "  " << (c.pass ? "[pass]" : "[FAIL]") << " " << c.name;
            if (c.applicable)
                out << "  max residual " << c.max_residual << " (tolerance " << c.tolerance
                    << ")";
            else
                out << "  not applicable";
            if (!c.note.empty()) out << "  -- " << c.note;
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace sublab
