#include "pspark/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pspark {

Graph Graph::from_edges(Vertex n, std::span<const std::pair<Vertex, Vertex>> edges) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    std::vector<std::uint64_t> keys;
    keys.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) {
            throw std::invalid_argument("graph: edge endpoint out of range");
        }
        if (u == v) throw std::invalid_argument("graph: loop edge");
        keys.push_back((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v));
        keys.push_back((static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint32_t>(u));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    Graph g;
    g.n_ = n;
    g.off_.assign(static_cast<std::size_t>(n) + 1, 0);
    g.adj_.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        g.off_[(keys[i] >> 32) + 1]++;
        g.adj_[i] = static_cast<Vertex>(keys[i] & 0xffffffffULL);
    }
    for (std::size_t v = 0; v < static_cast<std::size_t>(n); ++v) g.off_[v + 1] += g.off_[v];
    Vertex dmax = 0;
    for (Vertex v = 0; v < n; ++v) dmax = std::max(dmax, g.degree(v));
    g.max_degree_ = dmax;
    return g;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < n_; ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

namespace {

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        return true;
    }
    return false;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
    std::string line;
    if (!next_data_line(in, line)) throw std::invalid_argument("edge list: missing header");
    std::istringstream hdr(line);
    long long n = -1, m = -1;
    if (!(hdr >> n >> m) || n < 0 || m < 0) {
        throw std::invalid_argument("edge list: bad header, expected \"n m\"");
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_data_line(in, line)) throw std::invalid_argument("edge list: fewer edges than header");
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v)) throw std::invalid_argument("edge list: bad edge line");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return Graph::from_edges(static_cast<Vertex>(n), edges);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("edge list: cannot open " + path);
    return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        for (Vertex v : g.neighbors(u)) {
            if (u < v) out << u << ' ' << v << '\n';
        }
    }
}

}  // namespace pspark
