#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pspark {

using Vertex = std::int32_t;

// Simple undirected graph in CSR form. Immutable after construction and safe
// to share read-only across threads. Neighbor lists are sorted ascending.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list: symmetrizes, deduplicates, sorts.
    // Throws std::invalid_argument on out-of-range endpoints or loop edges.
    static Graph from_edges(Vertex n, std::span<const std::pair<Vertex, Vertex>> edges);

    Vertex vertex_count() const { return n_; }
    std::size_t edge_count() const { return adj_.size() / 2; }
    Vertex max_degree() const { return max_degree_; }

    Vertex degree(Vertex v) const {
        return static_cast<Vertex>(off_[static_cast<std::size_t>(v) + 1] -
                                   off_[static_cast<std::size_t>(v)]);
    }

    std::span<const Vertex> neighbors(Vertex v) const {
        const std::size_t b = off_[static_cast<std::size_t>(v)];
        return {adj_.data() + b, off_[static_cast<std::size_t>(v) + 1] - b};
    }

    bool adjacent(Vertex u, Vertex v) const;

    std::vector<std::pair<Vertex, Vertex>> edges() const;  // u < v

    const std::vector<Vertex>& adjacency_flat() const { return adj_; }
    const std::vector<std::size_t>& offsets() const { return off_; }

private:
    Vertex n_ = 0;
    Vertex max_degree_ = 0;
    std::vector<std::size_t> off_{0};
    std::vector<Vertex> adj_;
};

// Edge-list text format: first line "n m", then m lines "u v" (0-based,
// whitespace-separated). Lines starting with '#' are comments.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace pspark
