#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "entclt/bernoulli_part.hpp"
#include "entclt/binomial.hpp"
#include "entclt/bound_report.hpp"
#include "entclt/fisher.hpp"
#include "entclt/lattice_pmf.hpp"
#include "entclt/scan.hpp"

namespace entclt {

/// {"offset": a, "span": h, "weights": [...]} -> pmf. This is the ingestion
/// format shared by the command-line driver and the test fixtures.
inline LatticePmf parse_distribution_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("offset") || !j.contains("span") || !j.contains("weights"))
        throw std::invalid_argument(
            "entclt::parse_distribution_json: expected {\"offset\", \"span\", \"weights\"}");
    if (!j["offset"].is_number() || !j["span"].is_number() || !j["weights"].is_array())
        throw std::invalid_argument(
            "entclt::parse_distribution_json: offset/span must be numbers, weights an array");
    std::vector<double> weights;
    weights.reserve(j["weights"].size());
    for (const auto& w : j["weights"]) {
        if (!w.is_number())
            throw std::invalid_argument("entclt::parse_distribution_json: weights must be numbers");
        weights.push_back(w.get<double>());
    }
    return make_pmf(j["offset"].get<double>(), j["span"].get<double>(), std::move(weights));
}

namespace detail {

inline double parse_real(const std::string& text, const char* where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(where) + ": cannot parse number '" + text + "'");
    }
}

inline std::int64_t parse_integer(const std::string& text, const char* where) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(where) + ": cannot parse integer '" + text + "'");
    }
}

}  // namespace detail

/// Built-in named laws, so reproduction recipes need no fixture files:
///   bern:p     -> {0, 1} with P(1) = p, 0 < p < 1
///   uniform:k  -> uniform on {0, ..., k-1}, k >= 2
///   bin:n      -> Bin(n, 1/2) on {0, ..., n}
inline std::optional<LatticePmf> named_law(const std::string& name) {
    const auto colon = name.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const std::string kind = name.substr(0, colon);
    const std::string arg = name.substr(colon + 1);
    if (kind == "bern") {
        const double p = detail::parse_real(arg, "entclt::named_law(bern)");
        if (!(p > 0.0) || !(p < 1.0))
            throw std::invalid_argument("entclt::named_law: bern parameter must lie in (0, 1)");
        return make_pmf(0.0, 1.0, {1.0 - p, p});
    }
    if (kind == "uniform") {
        const std::int64_t k = detail::parse_integer(arg, "entclt::named_law(uniform)");
        if (k < 2)
            throw std::invalid_argument("entclt::named_law: uniform needs at least 2 points");
        return make_pmf(0.0, 1.0, std::vector<double>(static_cast<std::size_t>(k), 1.0));
    }
    if (kind == "bin") {
        const std::int64_t n = detail::parse_integer(arg, "entclt::named_law(bin)");
        if (n < 1) throw std::invalid_argument("entclt::named_law: bin parameter must be >= 1");
        return binomial_pmf(n);
    }
    return std::nullopt;
}

/// Accepts either a built-in law name or a path to a JSON distribution file.
inline LatticePmf load_distribution(const std::string& name_or_path) {
    if (std::optional<LatticePmf> named = named_law(name_or_path)) return *named;
    std::ifstream in(name_or_path);
    if (!in)
        throw std::invalid_argument("entclt::load_distribution: cannot open '" + name_or_path +
                                    "' (not a file, and not a recognised named law)");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("entclt::load_distribution: invalid JSON in '" + name_or_path +
                                    "': " + e.what());
    }
    return parse_distribution_json(j);
}

/// Fixed-width significant-digit rendering used for every CSV float, so
/// output is byte-identical across runs and platforms with IEEE doubles.
inline std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw std::invalid_argument("entclt: output format must be 'csv' or 'json', got '" + text +
                                "'");
}

/// Run-wide settings: the n grid, per-check tolerances, quadrature controls,
/// memory cap, and output routing. Loadable from a JSON config file and
/// overridable flag by flag.
struct RunConfig {
    std::vector<std::int64_t> n_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    ToleranceMap tolerances;
    std::size_t quad_points = kDeBruijnDefaultNodes;
    double spatial_tol = kQuadratureTolerance;
    std::size_t support_cap = kDefaultSupportCap;
    std::int64_t debruijn_n_cap = 64;
    OutputFormat format = OutputFormat::csv;

    void validate() const {
        if (n_grid.empty()) throw std::invalid_argument("entclt::RunConfig: n grid is empty");
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            if (n_grid[i] < 1)
                throw std::invalid_argument("entclt::RunConfig: n grid values must be >= 1");
            if (i > 0 && n_grid[i] <= n_grid[i - 1])
                throw std::invalid_argument("entclt::RunConfig: n grid must be strictly increasing");
        }
        if (quad_points == 0)
            throw std::invalid_argument("entclt::RunConfig: quad_points must be >= 1");
        if (!(spatial_tol > 0.0))
            throw std::invalid_argument("entclt::RunConfig: spatial_tol must be positive");
    }
};

/// Loads a config file; unknown keys are rejected so typos cannot silently
/// fall back to defaults.
inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("entclt::load_run_config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("entclt::load_run_config: invalid JSON in '" + path +
                                    "': " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("entclt::load_run_config: expected an object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "n_grid") {
            cfg.n_grid.clear();
            for (const auto& v : value) cfg.n_grid.push_back(v.get<std::int64_t>());
        } else if (key == "tolerances") {
            for (const auto& [name, tol] : value.items())
                cfg.tolerances.by_name[name] = tol.get<double>();
        } else if (key == "quad_points") {
            cfg.quad_points = value.get<std::size_t>();
        } else if (key == "spatial_tol") {
            cfg.spatial_tol = value.get<double>();
        } else if (key == "cap") {
            cfg.support_cap = value.get<std::size_t>();
        } else if (key == "debruijn_n_cap") {
            cfg.debruijn_n_cap = value.get<std::int64_t>();
        } else if (key == "format") {
            cfg.format = parse_output_format(value.get<std::string>());
        } else {
            throw std::invalid_argument("entclt::load_run_config: unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline nlohmann::json to_json(const BoundReport& r) {
    return nlohmann::json{
        {"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"pass", r.pass}};
}

inline nlohmann::json to_json(const ScanRow& row) {
    return nlohmann::json{{"n", row.n},
                          {"entropy_gap", row.entropy_gap},
                          {"relative_entropy", row.relative_entropy},
                          {"smoothed_relative_entropy", row.smoothed_relative_entropy},
                          {"solidarity_slack", row.solidarity_slack},
                          {"tv_to_gaussian", row.tv_to_gaussian}};
}

inline std::string scan_table_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream out;
    out << "n,entropy_gap,relative_entropy,smoothed_relative_entropy,solidarity_slack,"
           "tv_to_gaussian\n";
    for (const ScanRow& r : rows) {
        out << r.n << ',' << format_real(r.entropy_gap) << ',' << format_real(r.relative_entropy)
            << ',' << format_real(r.smoothed_relative_entropy) << ','
            << format_real(r.solidarity_slack) << ',' << format_real(r.tv_to_gaussian) << '\n';
    }
    return out.str();
}

inline nlohmann::json scan_table_json(const std::vector<ScanRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ScanRow& r : rows) arr.push_back(to_json(r));
    return nlohmann::json{{"rows", arr}};
}

inline std::string report_row_csv(std::int64_t n, const BoundReport& r) {
    std::ostringstream out;
    out << n << ',' << r.name << ',' << format_real(r.lhs) << ',' << format_real(r.rhs) << ','
        << format_real(r.slack) << ',' << (r.pass ? "true" : "false") << '\n';
    return out.str();
}

inline std::string verify_table_csv(const VerifyOutcome& outcome) {
    std::ostringstream out;
    out << "n,name,lhs,rhs,slack,pass\n";
    for (std::size_t i = 0; i < outcome.reports.size(); ++i)
        out << report_row_csv(outcome.row_n[i], outcome.reports[i]);
    return out.str();
}

inline nlohmann::json verify_table_json(const VerifyOutcome& outcome) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < outcome.reports.size(); ++i) {
        nlohmann::json row = to_json(outcome.reports[i]);
        row["n"] = outcome.row_n[i];
        arr.push_back(row);
    }
    return nlohmann::json{
        {"reports", arr}, {"skipped", outcome.skipped}, {"all_pass", outcome.all_pass}};
}

/// Decomposition as {q, lattice, joint rows, round-trip residual}; each
/// joint row is [lattice index k, w, probability].
inline nlohmann::json decomposition_to_json(const BernoulliPartDecomposition& d) {
    nlohmann::json joint = nlohmann::json::array();
    for (std::size_t j = 0; j < d.joint_w1.size(); ++j) {
        const std::int64_t k = d.source.first_index() + static_cast<std::int64_t>(j);
        if (d.joint_w0[j] > 0.0) joint.push_back({k, 0, d.joint_w0[j]});
        if (d.joint_w1[j] > 0.0) joint.push_back({k, 1, d.joint_w1[j]});
    }
    const double residual = total_variation(d.source, reconstruct(d));
    return nlohmann::json{
        {"q", d.q},
        {"lattice", {{"offset", d.source.offset()}, {"span", d.source.span()}}},
        {"joint", joint},
        {"reconstruction_residual", residual}};
}

inline nlohmann::json to_json(const DeBruijnResult& r) {
    return nlohmann::json{{"discrete_side", r.discrete_side},
                          {"smooth_side", r.smooth_side},
                          {"endpoint_term", r.endpoint_term},
                          {"integral_term", r.integral_term},
                          {"report", to_json(r.report)}};
}

inline std::string debruijn_table_csv(const std::vector<std::int64_t>& n_values,
                                      const std::vector<DeBruijnResult>& results) {
    std::ostringstream out;
    out << "n,discrete_side,smooth_side,endpoint_term,integral_term,residual,pass\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const DeBruijnResult& r = results[i];
        out << n_values[i] << ',' << format_real(r.discrete_side) << ','
            << format_real(r.smooth_side) << ',' << format_real(r.endpoint_term) << ','
            << format_real(r.integral_term) << ',' << format_real(r.report.lhs) << ','
            << (r.report.pass ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace entclt
