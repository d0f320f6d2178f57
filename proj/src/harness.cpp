#include "pspark/harness.hpp"

#include "pspark/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

namespace pspark {

void TrialConfig::validate() const {
    if (!(c > 0.0)) throw ConfigError("config: c must be positive");
    if (!(eps > 0.0) || eps >= 0.125) {
        throw ConfigError("config: eps outside (0, 1/8)");
    }
    if (degree_bound && *degree_bound < 0) throw ConfigError("config: negative degree bound");
    if (greedy_retries < 0 || tentative_restarts < 0) {
        throw ConfigError("config: negative retry count");
    }
}

const char* phase_name(FailurePhase p) {
    switch (p) {
        case FailurePhase::none: return "none";
        case FailurePhase::coverage: return "coverage";
        case FailurePhase::sparse: return "sparse";
        case FailurePhase::dense_process: return "dense-process";
        case FailurePhase::dense_matching: return "dense-matching";
    }
    return "?";
}

bool verify_coloring(const Graph& g, const ListAssignment& lists, std::span<const Color> sigma) {
    if (sigma.size() != static_cast<std::size_t>(g.vertex_count())) return false;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const Color c = sigma[static_cast<std::size_t>(v)];
        if (c < 0 || c >= lists.gamma_size) return false;
        if (!lists.contains(v, c)) return false;
        for (Vertex w : g.neighbors(v)) {
            if (w > v && sigma[static_cast<std::size_t>(w)] == c) return false;
        }
    }
    return true;
}

std::uint64_t trial_seed(std::uint64_t master, long trial_index) {
    return mix64(master ^ mix64(0x9d2c5680ULL + static_cast<std::uint64_t>(trial_index)));
}

namespace {

// Everything about a trial that does not depend on the seed: the embedded
// graph and its (dissolved) decomposition. Sweeps prepare this once.
struct PreparedInstance {
    Graph embedded;         // used only when regularization ran
    const Graph* g = nullptr;
    Vertex n_input = 0;
    Vertex degree_bound = 0;
    Decomposition decomp;
    bool report_sparse_side = false;
    std::size_t clause_a_violations = 0;
    std::size_t nonedge_violations = 0;
    int dissolved = 0;
};

PreparedInstance prepare_instance(const Graph& input, const TrialConfig& cfg) {
    PreparedInstance pi;
    pi.n_input = input.vertex_count();
    const Vertex D = cfg.degree_bound.value_or(input.max_degree());
    if (input.max_degree() > D) throw ConfigError("config: graph max degree exceeds --D");
    pi.degree_bound = D;
    if (!cfg.skip_regularize && input.vertex_count() > 0 && input.max_degree() < D) {
        pi.embedded = regularize(input, D);
        pi.g = &pi.embedded;
    } else {
        pi.g = &input;
    }
    const Vertex n = pi.g->vertex_count();
    if (n == 0) return pi;

    pi.decomp = decompose(*pi.g, D, cfg.eps);
    pi.report_sparse_side = cfg.full_decomposition_report ||
                            static_cast<long double>(n) * D * D <= 3e8L;
    DecompositionReport report = verify(*pi.g, pi.decomp, D, cfg.eps, pi.report_sparse_side);
    pi.clause_a_violations = report.clause_a_violators.size();
    pi.nonedge_violations = report.nonedge_bound_violators.size();
    pi.dissolved = dissolve_violating_clusters(pi.decomp, report);
    return pi;
}

TrialResult run_prepared(const PreparedInstance& pi, const TrialConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    TrialResult result;
    result.seed = cfg.seed;
    result.n_input = pi.n_input;
    result.eps = cfg.eps;
    result.degree_bound = pi.degree_bound;

    const Graph* g = pi.g;
    const Vertex n = g->vertex_count();
    const Vertex D = pi.degree_bound;
    result.n_colored = n;

    if (n == 0) {
        result.success = true;
        result.coloring = std::vector<Color>{};
        result.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        return result;
    }

    const Color gamma_size = D + 1;
    const int ell =
        n >= 2 ? list_size(n, cfg.c - 1.0, gamma_size) : std::min<Color>(1, gamma_size);
    result.ell = std::max(ell, 1);
    result.realized_c = n >= 2 ? static_cast<double>(result.ell) / std::log(static_cast<double>(n))
                               : static_cast<double>(result.ell);

    ListAssignment lists = sample_lists(n, gamma_size, result.ell, RngStream(cfg.seed, 0));

    const Decomposition& decomp = pi.decomp;
    result.report_sparse_side = pi.report_sparse_side;
    result.clause_a_violations = pi.clause_a_violations;
    result.nonedge_violations = pi.nonedge_violations;
    result.dissolved_clusters = pi.dissolved;
    result.sparse_size = decomp.sparse.size();
    result.cluster_count = static_cast<int>(decomp.clusters.size());

    SparseOptions sopts;
    sopts.paper_faithful = cfg.paper_faithful;
    sopts.ordering_retries = cfg.greedy_retries;
    sopts.tentative_restarts = cfg.tentative_restarts;
    SparseResult sres = color_sparse(*g, decomp, lists, RngStream(cfg.seed, 1), sopts);
    result.sparse_diag = std::move(sres.diag);
    if (!sres.success) {
        result.failure_phase = FailurePhase::sparse;
        result.sparse_failure = sres.failure;
        result.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        return result;
    }

    PartialColoring sigma = std::move(sres.coloring);
    for (const auto& cluster : decomp.clusters) {
        ClusterResult cres = color_cluster(*g, cluster, D, cfg.eps, lists, sigma,
                                           cfg.c - 1.0, cfg.adaptive_process);
        ClusterSummary cs;
        cs.size = static_cast<int>(cluster.size());
        cs.params = cres.params;
        cs.process_ran = cres.process_ran;
        cs.m = cres.process.m;
        cs.pairs = static_cast<int>(cres.process.pairs.size());
        cs.singles = static_cast<int>(cres.process.singles.size());
        cs.s1 = cres.process.s1;
        cs.s2 = cres.process.s2;
        cs.s3 = cres.process.s3;
        cs.success = cres.success;
        cs.deficiency = cres.deficiency;
        cs.isolated_colors = cres.isolated_colors;
        result.cluster_summaries.push_back(cs);
        if (!cres.success) {
            const bool process_failed = cres.process_ran && (!cres.process.s2 || !cres.process.s3);
            if (cres.coverage_certified) {
                result.failure_phase = FailurePhase::coverage;
            } else if (process_failed) {
                result.failure_phase = FailurePhase::dense_process;
            } else {
                result.failure_phase = FailurePhase::dense_matching;
            }
            result.wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
            return result;
        }
    }

    if (!verify_coloring(*g, lists, sigma.color)) {
        throw std::logic_error("run_trial: produced coloring failed re-verification");
    }
    result.success = true;
    result.coloring = std::move(sigma.color);
    result.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace

TrialResult run_trial(const Graph& input, const TrialConfig& cfg) {
    cfg.validate();
    const PreparedInstance pi = prepare_instance(input, cfg);
    return run_prepared(pi, cfg);
}

TrialResult run_trial(const TrialConfig& cfg) {
    Graph g = generate(cfg.graph);
    return run_trial(g, cfg);
}

std::string trial_to_json(const TrialConfig& cfg, const TrialResult& r) {
    nlohmann::json j;
    j["config"] = {{"graph", cfg.graph.describe()},
                   {"c", cfg.c},
                   {"eps", cfg.eps},
                   {"seed", cfg.seed},
                   {"paper_faithful", cfg.paper_faithful},
                   {"adaptive_process", cfg.adaptive_process},
                   {"skip_regularize", cfg.skip_regularize}};
    j["success"] = r.success;
    j["failure_phase"] = phase_name(r.failure_phase);
    j["n_input"] = r.n_input;
    j["n_colored"] = r.n_colored;
    j["D"] = r.degree_bound;
    j["ell"] = r.ell;
    j["realized_c"] = r.realized_c;
    j["wall_ms"] = r.wall_ms;
    j["decomposition"] = {{"sparse_size", r.sparse_size},
                          {"clusters", r.cluster_count},
                          {"dissolved_clusters", r.dissolved_clusters},
                          {"sparse_side_evaluated", r.report_sparse_side},
                          {"clause_a_violations", r.clause_a_violations},
                          {"nonedge_bound_violations", r.nonedge_violations}};
    j["sparse"] = {{"bad_count", r.sparse_diag.bad.size()},
                   {"min_residual_list", r.sparse_diag.min_residual_list},
                   {"pruned_colors_total", r.sparse_diag.pruned_colors_total},
                   {"max_pruned_per_vertex", r.sparse_diag.max_pruned_per_vertex},
                   {"tentative_rounds", r.sparse_diag.tentative_rounds},
                   {"ordering_retries", r.sparse_diag.ordering_retries}};
    if (r.sparse_failure) {
        j["sparse"]["failure"] = {
            {"vertex", r.sparse_failure->vertex},
            {"reason", r.sparse_failure->reason == PhaseFailure::Reason::empty_residual_list
                           ? "empty-residual-list"
                           : "greedy-stuck-after-retries"}};
    }
    auto clusters = nlohmann::json::array();
    for (const auto& c : r.cluster_summaries) {
        clusters.push_back({{"size", c.size},
                            {"zeta", c.params.zeta},
                            {"zeta0", c.params.zeta0},
                            {"small", c.params.small_zeta},
                            {"eta", c.params.eta},
                            {"q", c.params.q},
                            {"K", c.params.K},
                            {"m", c.m},
                            {"clamped", c.params.clamped},
                            {"process_ran", c.process_ran},
                            {"pairs", c.pairs},
                            {"singles", c.singles},
                            {"s1", c.s1},
                            {"s2", c.s2},
                            {"s3", c.s3},
                            {"success", c.success},
                            {"deficiency", c.deficiency},
                            {"isolated_colors", c.isolated_colors}});
    }
    j["clusters"] = std::move(clusters);
    return j.dump(2);
}

ExperimentSummary run_experiment(const TrialConfig& base, std::span<const double> c_values,
                                 long trials_per_cell, int parallelism) {
    if (trials_per_cell < 1) throw ConfigError("experiment: trials_per_cell < 1");
    if (c_values.empty()) throw ConfigError("experiment: empty c grid");
    base.validate();

    const Graph g = generate(base.graph);
    const PreparedInstance pi = prepare_instance(g, base);

    struct Slot {
        std::uint8_t success = 0;
        std::uint8_t phase = 0;
        float ms = 0.0f;
        Vertex n = 0;
        Vertex d = 0;
        int ell = 0;
    };
    const std::size_t cells = c_values.size();
    std::vector<Slot> slots(cells * static_cast<std::size_t>(trials_per_cell));

    std::atomic<long> next{0};
    const long total = static_cast<long>(cells) * trials_per_cell;
    auto worker = [&]() {
        for (;;) {
            const long task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t cell = static_cast<std::size_t>(task) / trials_per_cell;
            const long trial = task % trials_per_cell;
            TrialConfig cfg = base;
            cfg.c = c_values[cell];
            cfg.seed = trial_seed(base.seed, trial);
            TrialResult r = run_prepared(pi, cfg);
            Slot& s = slots[cell * static_cast<std::size_t>(trials_per_cell) +
                            static_cast<std::size_t>(trial)];
            s.success = r.success ? 1 : 0;
            s.phase = static_cast<std::uint8_t>(r.failure_phase);
            s.ms = static_cast<float>(r.wall_ms);
            s.n = r.n_colored;
            s.d = r.degree_bound;
            s.ell = r.ell;
        }
    };

    const int threads = std::max(1, parallelism);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ExperimentSummary summary;
    summary.trials_per_cell = trials_per_cell;
    summary.outcomes.resize(slots.size());
    for (std::size_t cell = 0; cell < cells; ++cell) {
        SweepCell sc;
        sc.c = c_values[cell];
        sc.eps = base.eps;
        sc.trials = trials_per_cell;
        double ms_sum = 0.0;
        for (long t = 0; t < trials_per_cell; ++t) {
            const Slot& s =
                slots[cell * static_cast<std::size_t>(trials_per_cell) + static_cast<std::size_t>(t)];
            summary.outcomes[cell * static_cast<std::size_t>(trials_per_cell) +
                             static_cast<std::size_t>(t)] = s.success;
            sc.n = s.n;
            sc.degree_bound = s.d;
            sc.ell = s.ell;
            ms_sum += s.ms;
            if (s.success != 0) {
                sc.successes++;
            } else {
                switch (static_cast<FailurePhase>(s.phase)) {
                    case FailurePhase::coverage: sc.fail_coverage++; break;
                    case FailurePhase::sparse: sc.fail_sparse++; break;
                    case FailurePhase::dense_process: sc.fail_process++; break;
                    case FailurePhase::dense_matching: sc.fail_matching++; break;
                    case FailurePhase::none: break;
                }
            }
        }
        sc.mean_ms = ms_sum / static_cast<double>(trials_per_cell);
        summary.cells.push_back(sc);
    }
    return summary;
}

void write_csv(const ExperimentSummary& s, std::ostream& out) {
    out << "n,D,c,ell,eps,trials,successes,fail_coverage,fail_sparse,fail_process,"
           "fail_matching,mean_ms\n";
    char buf[64];
    for (const auto& c : s.cells) {
        out << c.n << ',' << c.degree_bound << ',';
        std::snprintf(buf, sizeof(buf), "%g", c.c);
        out << buf << ',' << c.ell << ',';
        std::snprintf(buf, sizeof(buf), "%g", c.eps);
        out << buf << ',' << c.trials << ',' << c.successes << ',' << c.fail_coverage << ','
            << c.fail_sparse << ',' << c.fail_process << ',' << c.fail_matching << ',';
        std::snprintf(buf, sizeof(buf), "%.3f", c.mean_ms);
        out << buf << '\n';
    }
}

}  // namespace pspark
