#pragma once

#include "pspark/graph.hpp"
#include "pspark/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pspark {

using Color = std::int32_t;

// Per-vertex random color lists over the palette [0, gamma_size).
// Each list is a uniform ell-subset, stored sorted; first_choice keeps the
// first element of the per-vertex sampling order, which is uniform on the
// palette and serves as the tentative color of the sparse phase.
//
// Sampling uses one derived substream per vertex, so a list of size ell is a
// prefix of the list the same (seed, vertex) would get at any larger ell.
// That nesting is what makes success monotone per seed across a c-sweep.
struct ListAssignment {
    Color gamma_size = 0;
    int ell = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::vector<Color> lists;         // n rows of ell colors, each row sorted
    std::vector<Color> first_choice;  // per vertex

    Vertex n() const { return static_cast<Vertex>(first_choice.size()); }

    std::span<const Color> list(Vertex v) const {
        return {lists.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(ell),
                static_cast<std::size_t>(ell)};
    }

    bool contains(Vertex v, Color c) const;
};

// min(ceil((1+delta) * ln n), gamma_size); n >= 2.
int list_size(std::int64_t n, double delta, Color gamma_size);

// Independent uniform ell-subsets; throws std::invalid_argument if ell > gamma_size.
ListAssignment sample_lists(Vertex n, Color gamma_size, int ell, RngStream rng);

// One bitset row of ceil(gamma_size/64) words per vertex.
struct PaletteBitrows {
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;

    PaletteBitrows() = default;
    PaletteBitrows(Vertex n, Color gamma_size);
    explicit PaletteBitrows(const ListAssignment& lists);

    std::uint64_t* row(Vertex v) { return bits.data() + static_cast<std::size_t>(v) * words; }
    const std::uint64_t* row(Vertex v) const {
        return bits.data() + static_cast<std::size_t>(v) * words;
    }
    static void set(std::uint64_t* row, Color c) { row[c >> 6] |= 1ULL << (c & 63); }
    static void clear(std::uint64_t* row, Color c) { row[c >> 6] &= ~(1ULL << (c & 63)); }
    static bool test(const std::uint64_t* row, Color c) {
        return ((row[c >> 6] >> (c & 63)) & 1ULL) != 0;
    }
};

}  // namespace pspark
