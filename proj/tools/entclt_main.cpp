// entclt: exact lattice-distribution entropy toolkit.
//
// Subcommands:
//   scan       tabulate Gaussian-approach quantities over an n grid
//   verify     run every applicable bound check over an n grid
//   decompose  print the Bernoulli part decomposition of a law
//   debruijn   check the integral identity for relative entropy
//
// Exit codes: 0 success / all bounds pass, 1 bound violation or numerical
// failure, 2 input or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entclt/entclt.hpp"
#include "entclt/json_io.hpp"

namespace {

struct Flags {
    std::string dist;
    std::optional<std::string> n_grid_text;
    std::optional<std::string> format_text;
    std::optional<std::string> out_path;
    std::vector<std::string> tol_entries;
    std::optional<std::size_t> quad_points;
    std::optional<std::size_t> cap;
};

void add_common_flags(CLI::App& cmd, Flags& flags) {
    cmd.add_option("--dist", flags.dist,
                   "Distribution: JSON file path or named law (bern:p, uniform:k, bin:n)")
        ->required();
    cmd.add_option("--n-grid", flags.n_grid_text,
                   "Comma-separated strictly increasing n values (e.g. 1,2,4,8)");
    cmd.add_option("--format", flags.format_text, "Output format: csv or json");
    cmd.add_option("--out", flags.out_path, "Write output to this file instead of stdout");
    cmd.add_option("--tol", flags.tol_entries,
                   "Per-check pass tolerance override, name=value; repeatable")
        ->take_all();
    cmd.add_option("--quad-points", flags.quad_points,
                   "Quadrature nodes for the integral identity (default 64)");
    cmd.add_option("--cap", flags.cap, "Support-size memory cap in cells (default 2000000)");
}

std::vector<std::int64_t> parse_n_grid(const std::string& text) {
    std::vector<std::int64_t> grid;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        grid.push_back(entclt::detail::parse_integer(text.substr(pos, comma - pos),
                                                     "entclt: --n-grid"));
        pos = comma + 1;
    }
    return grid;
}

entclt::RunConfig build_config(const Flags& flags) {
    entclt::RunConfig cfg;
    if (const char* env = std::getenv("ENTCLT_CONFIG")) cfg = entclt::load_run_config(env);
    if (flags.n_grid_text) cfg.n_grid = parse_n_grid(*flags.n_grid_text);
    if (flags.format_text) cfg.format = entclt::parse_output_format(*flags.format_text);
    if (flags.quad_points) cfg.quad_points = *flags.quad_points;
    if (flags.cap) cfg.support_cap = *flags.cap;
    for (const std::string& entry : flags.tol_entries) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("entclt: --tol expects name=value, got '" + entry + "'");
        cfg.tolerances.by_name[entry.substr(0, eq)] =
            entclt::detail::parse_real(entry.substr(eq + 1), "entclt: --tol");
    }
    cfg.validate();
    return cfg;
}

void emit(const Flags& flags, const std::string& text) {
    if (flags.out_path) {
        std::ofstream out(*flags.out_path, std::ios::binary);
        if (!out)
            throw std::invalid_argument("entclt: cannot open output file '" + *flags.out_path +
                                        "'");
        out << text;
    } else {
        std::cout << text;
    }
}

int run_scan_cmd(const Flags& flags, const entclt::RunConfig& cfg) {
    const entclt::LatticePmf base = entclt::load_distribution(flags.dist);
    const std::vector<entclt::ScanRow> rows =
        entclt::run_scan(base, cfg.n_grid, cfg.support_cap);
    if (cfg.format == entclt::OutputFormat::csv)
        emit(flags, entclt::scan_table_csv(rows));
    else
        emit(flags, entclt::scan_table_json(rows).dump(2) + "\n");
    return 0;
}

int run_verify_cmd(const Flags& flags, const entclt::RunConfig& cfg) {
    const entclt::LatticePmf base = entclt::load_distribution(flags.dist);
    const entclt::VerifyOutcome outcome =
        entclt::run_verify(base, cfg.n_grid, cfg.tolerances, cfg.support_cap);
    if (cfg.format == entclt::OutputFormat::csv) {
        emit(flags, entclt::verify_table_csv(outcome));
        for (const std::string& name : outcome.skipped)
            std::cerr << "skipped: " << name << " (binomial-specific; base is not bern:0.5)\n";
    } else {
        emit(flags, entclt::verify_table_json(outcome).dump(2) + "\n");
    }
    return outcome.all_pass ? 0 : 1;
}

int run_decompose_cmd(const Flags& flags, const entclt::RunConfig&) {
    const entclt::LatticePmf base = entclt::load_distribution(flags.dist);
    const entclt::BernoulliPartDecomposition d = entclt::decompose(base);
    emit(flags, entclt::decomposition_to_json(d).dump(2) + "\n");
    return 0;
}

int run_debruijn_cmd(const Flags& flags, const entclt::RunConfig& cfg) {
    const entclt::LatticePmf base_in = entclt::load_distribution(flags.dist);
    const entclt::LatticePmf base =
        entclt::detail::reduce_or_throw(base_in, "entclt: debruijn");
    const entclt::Moments m = entclt::moments(base);
    if (!(m.variance > 0.0)) throw std::invalid_argument("entclt: degenerate base law");
    // The default grid targets scans; the identity check defaults to one
    // moderate n instead.
    const std::vector<std::int64_t> grid =
        flags.n_grid_text ? cfg.n_grid : std::vector<std::int64_t>{4};
    std::vector<entclt::DeBruijnResult> results;
    for (std::int64_t n : grid) {
        if (n > cfg.debruijn_n_cap)
            throw std::invalid_argument(
                "entclt: debruijn n=" + std::to_string(n) + " exceeds the cap " +
                std::to_string(cfg.debruijn_n_cap) +
                " (support grows with n; raise debruijn_n_cap in the config file to override)");
        const entclt::LatticePmf p_sn = entclt::self_convolve(base, n, cfg.support_cap);
        results.push_back(entclt::de_bruijn_check(
            p_sn, n, base.span(), m.variance, cfg.quad_points,
            cfg.tolerances.get("de_bruijn", entclt::kDeBruijnTolerance), cfg.spatial_tol));
    }
    bool all_pass = true;
    for (const entclt::DeBruijnResult& r : results) all_pass = all_pass && r.report.pass;
    if (cfg.format == entclt::OutputFormat::csv) {
        emit(flags, entclt::debruijn_table_csv(grid, results));
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            nlohmann::json row = entclt::to_json(results[i]);
            row["n"] = grid[i];
            arr.push_back(row);
        }
        emit(flags, nlohmann::json{{"results", arr}, {"all_pass", all_pass}}.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entclt: exact entropy computations for lattice distributions"};
    app.require_subcommand(1);

    Flags scan_flags, verify_flags, decompose_flags, debruijn_flags;
    CLI::App* scan = app.add_subcommand("scan", "Tabulate convergence quantities over an n grid");
    add_common_flags(*scan, scan_flags);
    CLI::App* verify = app.add_subcommand("verify", "Run every applicable bound check");
    add_common_flags(*verify, verify_flags);
    CLI::App* decompose =
        app.add_subcommand("decompose", "Print the Bernoulli part decomposition");
    add_common_flags(*decompose, decompose_flags);
    CLI::App* debruijn =
        app.add_subcommand("debruijn", "Check the integral identity for relative entropy");
    add_common_flags(*debruijn, debruijn_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (scan->parsed()) return run_scan_cmd(scan_flags, build_config(scan_flags));
        if (verify->parsed()) return run_verify_cmd(verify_flags, build_config(verify_flags));
        if (decompose->parsed())
            return run_decompose_cmd(decompose_flags, build_config(decompose_flags));
        if (debruijn->parsed())
            return run_debruijn_cmd(debruijn_flags, build_config(debruijn_flags));
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const entclt::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
