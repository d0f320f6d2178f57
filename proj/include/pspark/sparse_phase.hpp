#pragma once

#include "pspark/decomposition.hpp"
#include "pspark/graph.hpp"
#include "pspark/palette.hpp"
#include "pspark/rng.hpp"

#include <optional>
#include <vector>

namespace pspark {

// Vertex -> color map with -1 as "uncolored".
struct PartialColoring {
    std::vector<Color> color;

    PartialColoring() = default;
    explicit PartialColoring(Vertex n) : color(static_cast<std::size_t>(n), -1) {}

    bool has(Vertex v) const { return color[static_cast<std::size_t>(v)] >= 0; }
    Color at(Vertex v) const { return color[static_cast<std::size_t>(v)]; }
    void set(Vertex v, Color c) { color[static_cast<std::size_t>(v)] = c; }

    // True iff no neighbor of v currently holds c.
    bool allowed(const Graph& g, Vertex v, Color c) const;
};

// Tentative colors on all of V, the conflict-free set T, and tau restricted
// to T. Cluster vertices participate with dummy colors that the dense phase
// later discards.
struct TentativeOutcome {
    std::vector<Color> tau;
    std::vector<std::uint8_t> retained;
    PartialColoring sigma;
};

struct SparseDiagnostics {
    std::vector<Vertex> retained_neighbors;   // |T ∩ N_v| per vertex
    std::vector<Vertex> duplication_surplus;  // |T∩N_v| − |σ(T∩N_v)| per vertex
    std::vector<Vertex> bad;                  // B, from the last tentative round
    std::size_t pruned_colors_total = 0;
    int max_pruned_per_vertex = 0;
    int min_residual_list = -1;  // over uncolored sparse vertices, before pruning
    int tentative_rounds = 1;
    long ordering_retries = 0;
};

struct PhaseFailure {
    enum class Reason { empty_residual_list, greedy_stuck };
    Reason reason = Reason::greedy_stuck;
    Vertex vertex = -1;
};

struct SparseResult {
    bool success = false;
    PartialColoring coloring;  // colors on the sparse part only
    std::optional<PhaseFailure> failure;
    SparseDiagnostics diag;
};

struct SparseOptions {
    bool paper_faithful = true;  // bad-vertex handling + color-degree pruning
    int ordering_retries = 20;   // extra random orders per tentative round
    int tentative_restarts = 3;  // extra tentative rounds
};

// tau from the sampling order's first choice.
TentativeOutcome tentative_color(const Graph& g, const ListAssignment& lists);
// tau redrawn uniformly from each list (used on tentative restarts; the
// conditional law given the sampled lists is the same).
TentativeOutcome tentative_color(const Graph& g, const ListAssignment& lists, RngStream& rng);

// (L_v \ {tau_v}) \ sigma(T ∩ N_v) for each uncolored sparse vertex; other
// rows come back empty.
std::vector<std::vector<Color>> residual_lists(const Graph& g, const TentativeOutcome& outcome,
                                               const ListAssignment& lists,
                                               std::span<const Vertex> sparse_vertices);

// B = uncolored sparse v with |(L_v \ {tau_v}) ∩ sigma(T∩N_v)| > (1/e − θ' + θ'/3)·t.
std::vector<Vertex> compute_bad_vertices(const Graph& g, const TentativeOutcome& outcome,
                                         const ListAssignment& lists,
                                         std::span<const Vertex> sparse_vertices, int t,
                                         double theta_prime);

// Removes from each candidate row every color whose color degree
// d_c(v) = |{w in N_v \ (T ∪ B) : c in L_w \ {tau_w}}| exceeds (1 − 1/e + ς)t.
// Rows are indexed by vertex; only rows listed in `targets` are touched.
void prune_color_degrees(const Graph& g, const TentativeOutcome& outcome,
                         const ListAssignment& lists, std::span<const Vertex> bad,
                         std::span<const Vertex> targets, int t, double varsigma,
                         PaletteBitrows& rows, SparseDiagnostics* diag);

SparseResult color_sparse(const Graph& g, const Decomposition& decomp,
                          const ListAssignment& lists, RngStream rng,
                          const SparseOptions& opts = {});

}  // namespace pspark
