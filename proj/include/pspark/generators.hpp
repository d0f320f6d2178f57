#pragma once

#include "pspark/graph.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace pspark {

enum class GraphKind {
    complete,
    disjoint_cliques,
    random_regular,
    erdos_renyi,
    star_union,
    matching_plus_clique,
    file,
};

const char* kind_name(GraphKind k);

// Kind-specific parameters, validated inside generate(). Generation is a pure
// function of the spec: equal specs produce identical edge sets.
struct GeneratorSpec {
    GraphKind kind = GraphKind::complete;
    std::map<std::string, double> params;
    std::string path;  // kind == file
    std::uint64_t seed = 0;

    // "kind:key=val,key=val,..." or "file:PATH". Throws std::invalid_argument.
    static GeneratorSpec parse(const std::string& text);
    std::string describe() const;
};

Graph generate(const GeneratorSpec& spec);

// Embeds g into an exactly target_degree-regular simple graph on at most
// n + target_degree + 2 vertices, keeping g's edges and vertex ids. Returns g
// unchanged when it is already regular of that degree.
// Throws std::invalid_argument if max_degree(g) > target_degree.
Graph regularize(const Graph& g, Vertex target_degree);

}  // namespace pspark
