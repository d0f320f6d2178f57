#pragma once

#include "pspark/graph.hpp"

#include <cstdint>
#include <vector>

namespace pspark {

// Partition of V into a sparse part and disjoint dense clusters.
// Deterministic for equal inputs; clusters are ordered by smallest member
// and sorted ascending internally.
struct Decomposition {
    std::vector<Vertex> sparse;
    std::vector<std::vector<Vertex>> clusters;
    double epsilon = 0.0;

    bool is_partition(const Graph& g) const;
};

struct ClusterCheck {
    std::size_t size = 0;
    Vertex max_external_degree = 0;
    Vertex max_internal_nondegree = 0;
    bool size_ok = true;                     // size in [(1-eps)D, (1+6eps)D]
    std::vector<Vertex> external_violators;  // external degree >= 7*eps*D
    std::vector<Vertex> internal_violators;  // internal non-degree >= 6*eps*D
    bool ok() const {
        return size_ok && external_violators.empty() && internal_violators.empty();
    }
};

struct DecompositionReport {
    // Sparse side, aligned with Decomposition::sparse. Exact counts; skipped
    // (arrays empty, flag false) when the caller asks for cluster checks only.
    bool sparse_side_evaluated = false;
    std::vector<Vertex> low_codegree_counts;        // neighbors with codegree < (1-eps)D
    std::vector<std::uint64_t> sparse_nonedges;     // non-edges inside N_v
    std::vector<Vertex> clause_a_violators;         // low-codegree count <= eps*D
    std::vector<Vertex> nonedge_bound_violators;    // non-edges <= (eps^2/2) D^2

    std::vector<ClusterCheck> clusters;

    bool clusters_ok() const;
    bool all_ok() const;  // clusters + (sparse side, when evaluated)
};

// Construction: u,v are friends if adjacent with codegree >= (1-eps)D; a
// vertex is dense if it has >= (1-eps)D friends; clusters are the connected
// components of the friend graph on dense vertices, dropped if smaller than
// (1-eps)D, then augmented by vertices adjacent to >= (1-3eps)D of a cluster.
Decomposition decompose(const Graph& g, Vertex degree_bound, double eps);

DecompositionReport verify(const Graph& g, const Decomposition& d, Vertex degree_bound,
                           double eps, bool sparse_side = true);

// Moves every cluster failing its ClusterCheck into the sparse part.
// Returns the number of clusters dissolved.
int dissolve_violating_clusters(Decomposition& d, const DecompositionReport& report);

}  // namespace pspark
