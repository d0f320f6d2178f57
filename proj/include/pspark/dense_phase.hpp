#pragma once

#include "pspark/graph.hpp"
#include "pspark/matching.hpp"
#include "pspark/palette.hpp"
#include "pspark/sparse_phase.hpp"

#include <span>
#include <utility>
#include <vector>

namespace pspark {

// Parameter schedule for one cluster. The spacing constraints pin each value
// only up to constants; geometric-mean placement with explicit clamps makes
// the schedule concrete, and `clamped` records whenever a fence had to bind.
struct ClusterParams {
    double zeta = 0.0;   // non-edges / D^2
    double zeta0 = 0.0;  // sqrt(eps)/D
    double eta = 0.0;
    double q = 0.0;
    double K = 0.0;
    int m = 0;
    int b = 7;
    bool small_zeta = true;
    bool clamped = false;
};

ClusterParams cluster_params(double zeta, double eps, Vertex degree_bound, int ell);

// Working state for one cluster: member list plus the non-edge graph H over
// cluster-local indices, stored as bit rows.
struct ClusterState {
    std::vector<Vertex> members;           // ascending
    std::size_t words = 0;                 // per-row words of the local bitsets
    std::vector<std::uint64_t> h_rows;     // non-edge rows (local index space)
    std::vector<int> d_h;                  // static non-edge degrees
    std::uint64_t nonedges = 0;
    ClusterParams params;

    int size() const { return static_cast<int>(members.size()); }
    const std::uint64_t* h_row(int i) const {
        return h_rows.data() + static_cast<std::size_t>(i) * words;
    }
};

ClusterState build_cluster_state(const Graph& g, std::span<const Vertex> cluster,
                                 Vertex degree_bound, double eps, int ell);

// Palette order: colors sorted by f(c) = sum over cluster vertices adjacent
// to a c-colored vertex of (zeta*D + d_H(v)); ties by color id.
std::vector<Color> order_colors(const ClusterState& state, const Graph& g,
                                const PartialColoring& sigma, Color gamma_size,
                                Vertex degree_bound);

struct ProcessOutcome {
    std::vector<std::pair<Vertex, Vertex>> pairs;    // M
    std::vector<Vertex> singles;                     // z_i
    std::vector<std::pair<Vertex, Color>> assigned;  // all assignments, in order
    int m = 0;                                       // colors consumed, |Γ| − |Γ'|
    bool s1 = true;  // list overlap with the first m−1 process colors stays small
    bool s2 = true;  // no step saw an empty candidate set
    bool s3 = true;  // at least eta*D pairs
    std::vector<Vertex> residual_members;  // C'
    std::vector<Color> residual_colors;    // Γ'
};

// Steps: pick a non-edge of H inside the candidate set (lexicographically
// smallest), else a candidate of minimum d_H (smallest id), else record the
// empty step. Mutates sigma with the assigned colors. If adaptive, stops as
// soon as |M| >= eta*D, within the same D/10 color budget.
ProcessOutcome run_pairing_process(const ClusterState& state, const Graph& g,
                                   PartialColoring& sigma, const ListAssignment& lists,
                                   std::span<const Color> ordered, Vertex degree_bound,
                                   double delta, bool adaptive);

struct AllowedBigraph {
    Bigraph k_prime;                  // rows = C' order, cols = Γ' order
    std::vector<Vertex> row_vertex;   // C'
    std::vector<Color> col_color;     // Γ'
    std::vector<int> allowed_complement_degree;  // per row, in the pre-list bigraph
    std::vector<int> external_degree;            // |∇_G(v, V \ C)| per row
    int isolated_columns = 0;
};

AllowedBigraph build_allowed_bigraph(std::span<const Vertex> c_prime,
                                     std::span<const Color> gamma_prime, const Graph& g,
                                     const PartialColoring& sigma, const ListAssignment& lists,
                                     std::span<const Vertex> full_cluster);

struct ClusterResult {
    bool success = false;
    ClusterParams params;
    bool process_ran = false;
    ProcessOutcome process;
    // matching failure details
    int deficiency = 0;
    std::vector<Vertex> witness;
    int isolated_colors = 0;
    bool coverage_certified = false;  // the isolated-column count alone forbids saturation
};

// Colors one cluster on top of sigma (already covering the sparse part and
// earlier clusters); mutates sigma only on success or by process assignments.
ClusterResult color_cluster(const Graph& g, std::span<const Vertex> cluster, Vertex degree_bound,
                            double eps, const ListAssignment& lists, PartialColoring& sigma,
                            double delta, bool adaptive_process);

}  // namespace pspark
