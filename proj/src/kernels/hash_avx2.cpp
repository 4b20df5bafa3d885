#include <immintrin.h>

#include "percolab/rng.hpp"

namespace percolab::rng {

namespace {

// 64-bit lane-wise multiply out of 32-bit products (no AVX-512 mullo_epi64).
inline __m256i mul64(__m256i a, __m256i b) {
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i cross1 = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
    const __m256i cross2 = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
    const __m256i hi = _mm256_slli_epi64(_mm256_add_epi64(cross1, cross2), 32);
    return _mm256_add_epi64(lo, hi);
}

inline __m256i fmix64x4(__m256i h) {
    h = _mm256_xor_si256(h, _mm256_srli_epi64(h, 33));
    h = mul64(h, _mm256_set1_epi64x(static_cast<long long>(kMul1)));
    h = _mm256_xor_si256(h, _mm256_srli_epi64(h, 33));
    h = mul64(h, _mm256_set1_epi64x(static_cast<long long>(kMul2)));
    h = _mm256_xor_si256(h, _mm256_srli_epi64(h, 33));
    return h;
}

}  // namespace

void hash_batch_avx2(std::uint64_t key, const std::uint64_t* ids, std::size_t count,
                     std::uint64_t* out) {
    const __m256i vkey = _mm256_set1_epi64x(static_cast<long long>(key));
    const __m256i vone = _mm256_set1_epi64x(1);
    const __m256i vmul = _mm256_set1_epi64x(static_cast<long long>(kBondMul));
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ids + i));
        v = mul64(vmul, _mm256_add_epi64(v, vone));
        v = fmix64x4(_mm256_xor_si256(vkey, v));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), v);
    }
    for (; i < count; ++i) out[i] = bond_uniform(key, ids[i]);
}

}  // namespace percolab::rng
