// AVX2 variants of the kernel table. Compiled with -mavx2 -mpopcnt; callers
// must check avx2_available() (the dispatcher does) before using this table.

#include "pspark/kernels.hpp"

#include <bit>
#include <immintrin.h>

namespace pspark::kernels {
namespace {

std::size_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t nw) {
    std::size_t c = 0;
    std::size_t i = 0;
    alignas(32) std::uint64_t buf[4];
    for (; i + 4 <= nw; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_store_si256(reinterpret_cast<__m256i*>(buf), _mm256_and_si256(va, vb));
        c += static_cast<std::size_t>(std::popcount(buf[0])) + std::popcount(buf[1]) +
             std::popcount(buf[2]) + std::popcount(buf[3]);
    }
    for (; i < nw; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return c;
}

std::size_t andnot_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t nw) {
    std::size_t c = 0;
    std::size_t i = 0;
    alignas(32) std::uint64_t buf[4];
    for (; i + 4 <= nw; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        // _mm256_andnot_si256(x, y) = ~x & y
        _mm256_store_si256(reinterpret_cast<__m256i*>(buf), _mm256_andnot_si256(vb, va));
        c += static_cast<std::size_t>(std::popcount(buf[0])) + std::popcount(buf[1]) +
             std::popcount(buf[2]) + std::popcount(buf[3]);
    }
    for (; i < nw; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & ~b[i]));
    return c;
}

void or_inplace_avx2(std::uint64_t* acc, const std::uint64_t* b, std::size_t nw) {
    std::size_t i = 0;
    for (; i + 4 <= nw; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), _mm256_or_si256(va, vb));
    }
    for (; i < nw; ++i) acc[i] |= b[i];
}

void andnot_inplace_avx2(std::uint64_t* acc, const std::uint64_t* b, std::size_t nw) {
    std::size_t i = 0;
    for (; i + 4 <= nw; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), _mm256_andnot_si256(vb, va));
    }
    for (; i < nw; ++i) acc[i] &= ~b[i];
}

std::size_t popcount_avx2(const std::uint64_t* a, std::size_t nw) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < nw; ++i) c += static_cast<std::size_t>(std::popcount(a[i]));
    return c;
}

bool any_equal_gather_avx2(const std::int32_t* values, const std::int32_t* idx,
                           std::size_t k, std::int32_t key) {
    const __m256i vkey = _mm256_set1_epi32(key);
    std::size_t i = 0;
    for (; i + 8 <= k; i += 8) {
        __m256i vidx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
        __m256i vals = _mm256_i32gather_epi32(values, vidx, 4);
        __m256i eq = _mm256_cmpeq_epi32(vals, vkey);
        if (_mm256_movemask_epi8(eq) != 0) return true;
    }
    for (; i < k; ++i) {
        if (values[idx[i]] == key) return true;
    }
    return false;
}

std::size_t count_bit_rows_avx2(const std::uint64_t* rows, std::size_t row_words,
                                std::uint32_t bit, const std::int32_t* ids, std::size_t k) {
    const std::int32_t word = static_cast<std::int32_t>(bit >> 6);
    const int shift = static_cast<int>(bit & 63u);
    const __m128i vrw = _mm_set1_epi32(static_cast<std::int32_t>(row_words));
    const __m128i voff = _mm_set1_epi32(word);
    const __m128i vshift = _mm_cvtsi32_si128(shift);
    const __m256i one = _mm256_set1_epi64x(1);
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    const auto* base = reinterpret_cast<const long long*>(rows);
    for (; i + 4 <= k; i += 4) {
        __m128i vid = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ids + i));
        __m128i widx = _mm_add_epi32(_mm_mullo_epi32(vid, vrw), voff);
        __m256i w = _mm256_i32gather_epi64(base, widx, 8);
        acc = _mm256_add_epi64(acc, _mm256_and_si256(_mm256_srl_epi64(w, vshift), one));
    }
    alignas(32) std::uint64_t buf[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(buf), acc);
    std::size_t c = buf[0] + buf[1] + buf[2] + buf[3];
    for (; i < k; ++i) {
        c += static_cast<std::size_t>(
            (rows[static_cast<std::size_t>(ids[i]) * row_words + static_cast<std::size_t>(word)] >>
             shift) &
            1ULL);
    }
    return c;
}

std::size_t count_members_avx2(const std::uint64_t* bitset, const std::int32_t* ids,
                               std::size_t k) {
    const __m256i one = _mm256_set1_epi64x(1);
    const __m128i low6 = _mm_set1_epi32(63);
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    const auto* base = reinterpret_cast<const long long*>(bitset);
    for (; i + 4 <= k; i += 4) {
        __m128i vid = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ids + i));
        __m128i widx = _mm_srli_epi32(vid, 6);
        __m256i shifts = _mm256_cvtepi32_epi64(_mm_and_si128(vid, low6));
        __m256i w = _mm256_i32gather_epi64(base, widx, 8);
        acc = _mm256_add_epi64(acc, _mm256_and_si256(_mm256_srlv_epi64(w, shifts), one));
    }
    alignas(32) std::uint64_t buf[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(buf), acc);
    std::size_t c = buf[0] + buf[1] + buf[2] + buf[3];
    for (; i < k; ++i) {
        const std::uint32_t id = static_cast<std::uint32_t>(ids[i]);
        c += static_cast<std::size_t>((bitset[id >> 6] >> (id & 63u)) & 1ULL);
    }
    return c;
}

const Table kAvx2 = {
    "avx2",
    &and_popcount_avx2,
    &andnot_popcount_avx2,
    &or_inplace_avx2,
    &andnot_inplace_avx2,
    &popcount_avx2,
    &any_equal_gather_avx2,
    &count_bit_rows_avx2,
    &count_members_avx2,
};

}  // namespace

const Table& avx2_table() { return kAvx2; }

}  // namespace pspark::kernels
