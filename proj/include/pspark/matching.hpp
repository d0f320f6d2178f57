#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pspark {

// Bipartite graph on X ∪ Y, adjacency stored per X vertex (sorted, dedup).
struct Bigraph {
    int x_size = 0;
    int y_size = 0;
    std::vector<std::vector<int>> adj;

    static Bigraph create(int x_size, int y_size);
    void add_edge(int x, int y);
    void finish();  // sort + dedup rows
    bool has_edge(int x, int y) const;
    std::size_t edge_count() const;
};

struct MatchingResult {
    std::vector<int> pair_of_x;  // -1 if unmatched
    std::vector<int> pair_of_y;
    int size = 0;
    bool saturates_x = false;
    int deficiency = 0;  // x_size - size
};

// Maximum-cardinality matching. Hopcroft-Karp phases on larger inputs, plain
// DFS augmentation on tiny ones. Deterministic for fixed input.
MatchingResult max_matching(const Bigraph& b);

// If the matching does not saturate X, returns S ⊆ X with |N(S)| < |S|
// (alternating reachability from the unmatched X vertices); nullopt otherwise.
std::optional<std::vector<int>> hall_violator(const Bigraph& b, const MatchingResult& m);

// Neighborhood switch on two Y vertices: in the result, N(u) = N(u) ∪ N(v)
// and N(v) = N(u) ∩ N(v); everything else is unchanged. Throws on u == v.
Bigraph neighborhood_switch(const Bigraph& f, int u, int v);

// Left-aligned bigraph: x adjacent to the first degrees[x] vertices of Y.
Bigraph canonical_minimizer(std::span<const int> degrees, int y_size);

// Exact fraction. Within the pm_probability_exact guard (|X|,|Y| <= 7) every
// intermediate value fits in 64 bits: numerators and denominators are at most
// C(7,3)^7 < 2^63, and cross-multiplied comparisons fit in 128 bits.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d);  // reduces, d > 0
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
    }
};

// Probability, over independent uniform s-subsets L_x of Y, that the
// intersection graph {x ~ y : y in L_x and xy in F} has an X-perfect
// matching. Exhaustive and exact. Throws if |X| > 7, |Y| > 7 or s > |Y|.
Rational pm_probability_exact(const Bigraph& f, int s);

}  // namespace pspark
