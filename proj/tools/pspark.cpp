// pspark: trials, sweeps, and coloring verification for palette-sparsified
// list coloring. Exit codes: 0 clean run, 1 invalid coloring (verify), 2
// configuration error.

#include "pspark/harness.hpp"
#include "pspark/kernels.hpp"
#include "pspark/oracle.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_c_range(const std::string& text) {
    // "lo:hi:step" inclusive, or a single value.
    std::vector<double> out;
    double lo = 0, hi = 0, step = 0;
    const int got = std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step);
    if (got == 1) {
        out.push_back(lo);
        return out;
    }
    if (got != 3 || step <= 0 || hi < lo) {
        throw pspark::ConfigError("bad --c-range, expected lo:hi:step");
    }
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
    return out;
}

std::vector<pspark::Color> read_coloring_file(const std::string& path, pspark::Vertex n) {
    std::ifstream in(path);
    if (!in) throw pspark::ConfigError("cannot open coloring file " + path);
    std::vector<pspark::Color> sigma(static_cast<std::size_t>(n), -1);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        std::istringstream ls(line);
        long long v, c;
        if (!(ls >> v >> c)) throw pspark::ConfigError("bad coloring line: " + line);
        if (v < 0 || v >= n) throw pspark::ConfigError("coloring vertex out of range");
        sigma[static_cast<std::size_t>(v)] = static_cast<pspark::Color>(c);
    }
    return sigma;
}

void write_coloring_file(const std::string& path, const std::vector<pspark::Color>& sigma) {
    std::ofstream out(path);
    out << "# vertex color\n";
    for (std::size_t v = 0; v < sigma.size(); ++v) out << v << ' ' << sigma[v] << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    using namespace pspark;

    CLI::App app{"palette-sparsified list coloring harness"};
    app.require_subcommand(1);

    std::string graph_spec;
    long long degree_bound = -1;
    double c = 1.5;
    double eps = 0.05;
    std::uint64_t seed = 42;
    bool paper_faithful = true;
    bool adaptive = false;
    bool skip_reg = false;
    bool full_report = false;
    int retries = 20;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--graph", graph_spec, "kind:params (e.g. complete:n=256) or file:PATH")
            ->required();
        cmd->add_option("--D", degree_bound, "degree bound (default: max degree)");
        cmd->add_option("--eps", eps, "decomposition epsilon");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_flag("--paper-faithful,!--no-paper-faithful", paper_faithful,
                      "bad-vertex handling + color-degree pruning (default on)");
        cmd->add_flag("--adaptive-process", adaptive,
                      "stop the pairing process once it has eta*D pairs");
        cmd->add_flag("--skip-regularize", skip_reg, "color the graph as-is");
        cmd->add_flag("--full-report", full_report,
                      "always evaluate the sparse side of the decomposition report");
        cmd->add_option("--retries", retries, "greedy ordering retries");
    };

    auto* trial = app.add_subcommand("trial", "run one trial");
    std::string json_path, coloring_out;
    bool quiet = false;
    add_common(trial);
    trial->add_option("--c", c, "list-size constant: ell = ceil(c ln n)");
    trial->add_option("--json", json_path, "write trial diagnostics JSON");
    trial->add_option("--coloring-out", coloring_out, "write the coloring (vertex color lines)");
    trial->add_flag("--quiet", quiet, "suppress the summary line");

    auto* sweep = app.add_subcommand("sweep", "success-rate sweep over c");
    std::string c_range = "0.5:2.0:0.1";
    long long trials = 100;
    std::string out_path;
    int parallel = 1;
    add_common(sweep);
    sweep->add_option("--c-range", c_range, "lo:hi:step (inclusive)");
    sweep->add_option("--trials", trials, "trials per cell")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "CSV output path")->required();
    sweep->add_option("--parallel", parallel, "worker threads");

    auto* verify_cmd = app.add_subcommand("verify", "check a coloring file");
    std::string coloring_path;
    bool with_lists = false;
    add_common(verify_cmd);
    verify_cmd->add_option("--c", c, "list-size constant (needed for list checking)");
    verify_cmd->add_option("--coloring", coloring_path, "coloring file (vertex color lines)")
        ->required();
    verify_cmd->add_flag("--lists", with_lists,
                         "also check list membership by replaying --seed/--c/--D");

    auto* kernels_cmd = app.add_subcommand("kernels", "print the active kernel backend");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (kernels_cmd->parsed()) {
            std::cout << "kernels: " << kernels::active().name
                      << (kernels::avx2_available() ? " (avx2 available)" : " (avx2 unavailable)")
                      << '\n';
            return 0;
        }

        TrialConfig cfg;
        cfg.graph = GeneratorSpec::parse(graph_spec);
        if (degree_bound >= 0) cfg.degree_bound = static_cast<Vertex>(degree_bound);
        cfg.c = c;
        cfg.eps = eps;
        cfg.seed = seed;
        cfg.paper_faithful = paper_faithful;
        cfg.adaptive_process = adaptive;
        cfg.skip_regularize = skip_reg;
        cfg.full_decomposition_report = full_report;
        cfg.greedy_retries = retries;

        if (trial->parsed()) {
            TrialResult r = run_trial(cfg);
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << trial_to_json(cfg, r) << '\n';
            }
            if (!coloring_out.empty() && r.coloring) {
                write_coloring_file(coloring_out, *r.coloring);
            }
            if (!quiet) {
                if (r.success) {
                    std::printf("trial: SUCCESS  n=%d D=%d ell=%d c=%.3f clusters=%d  %.2f ms\n",
                                r.n_colored, r.degree_bound, r.ell, r.realized_c, r.cluster_count,
                                r.wall_ms);
                } else {
                    std::printf("trial: FAIL (%s)  n=%d D=%d ell=%d c=%.3f  %.2f ms\n",
                                phase_name(r.failure_phase), r.n_colored, r.degree_bound, r.ell,
                                r.realized_c, r.wall_ms);
                }
            }
            return 0;
        }

        if (sweep->parsed()) {
            const std::vector<double> cs = parse_c_range(c_range);
            ExperimentSummary s = run_experiment(cfg, cs, trials, parallel);
            std::ofstream out(out_path);
            if (!out) throw ConfigError("cannot open " + out_path);
            write_csv(s, out);
            for (const auto& cell : s.cells) {
                std::printf("c=%-5g success %5ld/%ld  (cov %ld, sparse %ld, process %ld, "
                            "matching %ld)  %.2f ms/trial\n",
                            cell.c, cell.successes, cell.trials, cell.fail_coverage,
                            cell.fail_sparse, cell.fail_process, cell.fail_matching, cell.mean_ms);
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            Graph g = generate(cfg.graph);
            const std::vector<Color> sigma = read_coloring_file(coloring_path, g.vertex_count());
            for (Vertex v = 0; v < g.vertex_count(); ++v) {
                if (sigma[static_cast<std::size_t>(v)] < 0) {
                    std::printf("verify: vertex %d uncolored\n", v);
                    return 1;
                }
            }
            bool proper = true;
            for (Vertex v = 0; v < g.vertex_count() && proper; ++v) {
                for (Vertex w : g.neighbors(v)) {
                    if (sigma[static_cast<std::size_t>(v)] == sigma[static_cast<std::size_t>(w)]) {
                        std::printf("verify: edge %d-%d monochromatic (%d)\n", v, w,
                                    sigma[static_cast<std::size_t>(v)]);
                        proper = false;
                        break;
                    }
                }
            }
            if (!proper) return 1;
            if (with_lists) {
                const Vertex D = cfg.degree_bound.value_or(g.max_degree());
                const int ell = g.vertex_count() >= 2
                                    ? list_size(g.vertex_count(), cfg.c - 1.0, D + 1)
                                    : 1;
                ListAssignment lists =
                    sample_lists(g.vertex_count(), D + 1, ell, RngStream(cfg.seed, 0));
                if (!verify_coloring(g, lists, sigma)) {
                    std::printf("verify: proper but not list-respecting for seed %llu\n",
                                static_cast<unsigned long long>(cfg.seed));
                    return 1;
                }
            }
            std::printf("verify: OK (%d vertices)\n", g.vertex_count());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fatal: %s\n", e.what());
        return 1;
    }
    return 0;
}
