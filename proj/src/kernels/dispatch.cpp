#include <cstdlib>
#include <string>

#include "percolab/rng.hpp"

namespace percolab::rng {

namespace {

std::string g_kernel_name = "scalar";

bool avx2_available() {
#if defined(PERCOLAB_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

HashBatchFn pick_kernel() {
    const char* want = std::getenv("PERCOLAB_KERNEL");
    if (want && std::string(want) == "scalar") return hash_batch_scalar;
#ifdef PERCOLAB_HAVE_AVX2
    if (avx2_available() && (!want || std::string(want) == "avx2")) {
        g_kernel_name = "avx2";
        return hash_batch_avx2;
    }
#endif
    g_kernel_name = "scalar";
    return hash_batch_scalar;
}

}  // namespace

HashBatchFn hash_batch = pick_kernel();

const std::string& active_kernel_name() { return g_kernel_name; }

bool set_kernel(const std::string& name) {
    if (name == "scalar") {
        hash_batch = hash_batch_scalar;
        g_kernel_name = "scalar";
        return true;
    }
#ifdef PERCOLAB_HAVE_AVX2
    if (name == "avx2" && avx2_available()) {
        hash_batch = hash_batch_avx2;
        g_kernel_name = "avx2";
        return true;
    }
#endif
    return false;
}

}  // namespace percolab::rng
