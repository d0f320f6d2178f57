#include "pspark/kernels.hpp"

#include <bit>

namespace pspark::kernels {
namespace {

std::size_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t nw) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < nw; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return c;
}

std::size_t andnot_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t nw) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < nw; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & ~b[i]));
    return c;
}

void or_inplace_scalar(std::uint64_t* acc, const std::uint64_t* b, std::size_t nw) {
    for (std::size_t i = 0; i < nw; ++i) acc[i] |= b[i];
}

void andnot_inplace_scalar(std::uint64_t* acc, const std::uint64_t* b, std::size_t nw) {
    for (std::size_t i = 0; i < nw; ++i) acc[i] &= ~b[i];
}

std::size_t popcount_scalar(const std::uint64_t* a, std::size_t nw) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < nw; ++i) c += static_cast<std::size_t>(std::popcount(a[i]));
    return c;
}

bool any_equal_gather_scalar(const std::int32_t* values, const std::int32_t* idx,
                             std::size_t k, std::int32_t key) {
    for (std::size_t i = 0; i < k; ++i) {
        if (values[idx[i]] == key) return true;
    }
    return false;
}

std::size_t count_bit_rows_scalar(const std::uint64_t* rows, std::size_t row_words,
                                  std::uint32_t bit, const std::int32_t* ids, std::size_t k) {
    const std::size_t word = bit >> 6;
    const unsigned shift = bit & 63u;
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        c += static_cast<std::size_t>(
            (rows[static_cast<std::size_t>(ids[i]) * row_words + word] >> shift) & 1ULL);
    }
    return c;
}

std::size_t count_members_scalar(const std::uint64_t* bitset, const std::int32_t* ids,
                                 std::size_t k) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint32_t id = static_cast<std::uint32_t>(ids[i]);
        c += static_cast<std::size_t>((bitset[id >> 6] >> (id & 63u)) & 1ULL);
    }
    return c;
}

const Table kScalar = {
    "scalar",
    &and_popcount_scalar,
    &andnot_popcount_scalar,
    &or_inplace_scalar,
    &andnot_inplace_scalar,
    &popcount_scalar,
    &any_equal_gather_scalar,
    &count_bit_rows_scalar,
    &count_members_scalar,
};

}  // namespace

const Table& scalar_table() { return kScalar; }

}  // namespace pspark::kernels
