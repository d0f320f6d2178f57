#pragma once

#include "pspark/graph.hpp"
#include "pspark/palette.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pspark {

struct OracleVerdict {
    bool colorable = false;
    std::optional<std::vector<Color>> witness;
    std::uint64_t nodes_explored = 0;
};

// Exhaustive backtracking with minimum-remaining-values ordering and forward
// checking. The verdict is exact. Guarded: throws std::invalid_argument when
// n > max_n or gamma_size > 64.
OracleVerdict exact_list_colorable(const Graph& g, const ListAssignment& lists, int max_n = 24);

// P(every color of a gamma_size palette appears in some of n independent
// uniform ell-subsets), by inclusion-exclusion in extended precision with
// compensated summation. ell may be fractional; the avoidance factor
// prod_{i<j} (gamma-ell-i)/(gamma-i) extends the integer-ell ratio of
// binomials continuously.
double coverage_probability(std::int64_t n, int gamma_size, double ell);

}  // namespace pspark
