#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the pipeline: bitset algebra over packed
// 64-bit words (color sets, neighborhood masks) and gathered scans over
// int32 id arrays (conflict detection, codegree probes). A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime when
// the CPU supports it. The two are equivalence-tested word for word.

namespace pspark::kernels {

struct Table {
    const char* name;

    // |a & b| over nw words.
    std::size_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t nw);
    // |a & ~b| over nw words.
    std::size_t (*andnot_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t nw);
    // acc |= b
    void (*or_inplace)(std::uint64_t* acc, const std::uint64_t* b, std::size_t nw);
    // acc &= ~b
    void (*andnot_inplace)(std::uint64_t* acc, const std::uint64_t* b, std::size_t nw);
    // population count of nw words.
    std::size_t (*popcount)(const std::uint64_t* a, std::size_t nw);

    // true iff values[idx[i]] == key for some i < k.
    bool (*any_equal_gather)(const std::int32_t* values, const std::int32_t* idx,
                             std::size_t k, std::int32_t key);

    // #i < k with bit `bit` set in the row rows[ids[i]*row_words ...].
    std::size_t (*count_bit_rows)(const std::uint64_t* rows, std::size_t row_words,
                                  std::uint32_t bit, const std::int32_t* ids, std::size_t k);

    // #i < k with bit ids[i] set in the flat bitset.
    std::size_t (*count_members)(const std::uint64_t* bitset, const std::int32_t* ids,
                                 std::size_t k);
};

enum class Backend { scalar, avx2 };

const Table& scalar_table();

#if PSPARK_HAVE_AVX2_TU
const Table& avx2_table();
#endif
bool avx2_available();

// Active table. Chosen once from CPU features; the PSPARK_SIMD environment
// variable ("scalar" or "avx2") overrides the choice.
const Table& active();
void set_backend(Backend b);

}  // namespace pspark::kernels
