#include "pspark/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace pspark::kernels {
namespace {

std::atomic<const Table*> g_active{nullptr};

const Table* choose() {
    const char* env = std::getenv("PSPARK_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_table();
#if PSPARK_HAVE_AVX2_TU
    if (env != nullptr && std::strcmp(env, "avx2") == 0 && avx2_available()) return &avx2_table();
    if (env == nullptr && avx2_available()) return &avx2_table();
#endif
    return &scalar_table();
}

}  // namespace

bool avx2_available() {
#if PSPARK_HAVE_AVX2_TU
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const Table& active() {
    const Table* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = choose();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void set_backend(Backend b) {
#if PSPARK_HAVE_AVX2_TU
    if (b == Backend::avx2 && avx2_available()) {
        g_active.store(&avx2_table(), std::memory_order_release);
        return;
    }
#endif
    (void)b;
    g_active.store(&scalar_table(), std::memory_order_release);
}

}  // namespace pspark::kernels
