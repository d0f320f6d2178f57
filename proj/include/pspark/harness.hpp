#pragma once

#include "pspark/decomposition.hpp"
#include "pspark/dense_phase.hpp"
#include "pspark/generators.hpp"
#include "pspark/graph.hpp"
#include "pspark/palette.hpp"
#include "pspark/sparse_phase.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pspark {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TrialConfig {
    GeneratorSpec graph;
    std::optional<Vertex> degree_bound;  // default: max degree of the input graph
    double c = 1.5;                      // list size ceil(c * ln n); delta = c - 1
    double eps = 0.05;
    std::uint64_t seed = 0;
    bool paper_faithful = true;
    bool adaptive_process = false;
    bool skip_regularize = false;
    // Exact sparse-side decomposition report: on by default for small inputs,
    // forced by the flag (it rescans every sparse neighborhood).
    bool full_decomposition_report = false;
    int greedy_retries = 20;
    int tentative_restarts = 3;

    void validate() const;  // throws ConfigError
};

enum class FailurePhase { none, coverage, sparse, dense_process, dense_matching };
const char* phase_name(FailurePhase p);

struct ClusterSummary {
    int size = 0;
    ClusterParams params;
    bool process_ran = false;
    int m = 0;
    int pairs = 0;
    int singles = 0;
    bool s1 = true, s2 = true, s3 = true;
    bool success = false;
    int deficiency = 0;
    int isolated_colors = 0;
};

struct TrialResult {
    bool success = false;
    FailurePhase failure_phase = FailurePhase::none;

    Vertex n_input = 0;
    Vertex n_colored = 0;  // after regularization
    Vertex degree_bound = 0;
    int ell = 0;
    double realized_c = 0.0;
    double eps = 0.0;
    std::uint64_t seed = 0;

    // decomposition
    std::size_t sparse_size = 0;
    int cluster_count = 0;
    int dissolved_clusters = 0;
    bool report_sparse_side = false;
    std::size_t clause_a_violations = 0;
    std::size_t nonedge_violations = 0;

    SparseDiagnostics sparse_diag;
    std::optional<PhaseFailure> sparse_failure;
    std::vector<ClusterSummary> cluster_summaries;

    std::optional<std::vector<Color>> coloring;
    double wall_ms = 0.0;
};

// True iff sigma is a proper coloring of g and sigma_v is in L_v for all v.
bool verify_coloring(const Graph& g, const ListAssignment& lists, std::span<const Color> sigma);

// End-to-end trial on a pre-built graph (regularization still applies).
TrialResult run_trial(const Graph& g, const TrialConfig& cfg);
// Convenience: generates cfg.graph first.
TrialResult run_trial(const TrialConfig& cfg);

std::string trial_to_json(const TrialConfig& cfg, const TrialResult& r);

struct SweepCell {
    double c = 0.0;
    Vertex n = 0;
    Vertex degree_bound = 0;
    int ell = 0;
    double eps = 0.0;
    long trials = 0;
    long successes = 0;
    long fail_coverage = 0;
    long fail_sparse = 0;
    long fail_process = 0;
    long fail_matching = 0;
    double mean_ms = 0.0;
};

struct ExperimentSummary {
    std::vector<SweepCell> cells;
    // success flag per (cell, trial): cells.size() * trials entries,
    // trial-major inside each cell. Used for per-seed monotonicity checks.
    std::vector<std::uint8_t> outcomes;
    long trials_per_cell = 0;
};

// Same master seed => identical summary, independent of parallelism. The
// trial at index t uses the same derived seed in every cell, so list nesting
// couples the cells of a c-sweep seed by seed.
ExperimentSummary run_experiment(const TrialConfig& base, std::span<const double> c_values,
                                 long trials_per_cell, int parallelism);

// Columns: n,D,c,ell,eps,trials,successes,fail_coverage,fail_sparse,
// fail_process,fail_matching,mean_ms
void write_csv(const ExperimentSummary& s, std::ostream& out);

std::uint64_t trial_seed(std::uint64_t master, long trial_index);

}  // namespace pspark
