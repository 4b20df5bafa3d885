#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace percolab::rng {

// Counter-based hashing: every per-bond uniform is a pure function of
// (seed, sample index, level, bond id), so results do not depend on worker
// scheduling and increasing p never flips an occupied bond to vacant.

constexpr std::uint64_t kMul1 = 0xff51afd7ed558ccdULL;
constexpr std::uint64_t kMul2 = 0xc4ceb9fe1a85ec53ULL;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kLevelMul = 0xbf58476d1ce4e5b9ULL;
constexpr std::uint64_t kBondMul = 0x94d049bb133111ebULL;

inline std::uint64_t fmix64(std::uint64_t h) {
    h ^= h >> 33;
    h *= kMul1;
    h ^= h >> 33;
    h *= kMul2;
    h ^= h >> 33;
    return h;
}

// Key for one (seed, sample) pair; fold in the level for nested estimators.
inline std::uint64_t sample_key(std::uint64_t seed, std::uint64_t sample) {
    return fmix64(seed + kGolden * (sample + 1));
}
inline std::uint64_t level_key(std::uint64_t key, std::uint64_t level) {
    return fmix64(key + kLevelMul * (level + 1));
}

inline std::uint64_t bond_uniform(std::uint64_t key, std::uint64_t bond) {
    return fmix64(key ^ (kBondMul * (bond + 1)));
}

// Occupation threshold: a bond with uniform u is occupied iff u < threshold
// (with p >= 1 always occupied). Monotone in p.
struct PThreshold {
    std::uint64_t thr = 0;
    bool all = false;
    explicit PThreshold(double p) {
        if (p >= 1.0) {
            all = true;
            thr = ~std::uint64_t(0);
        } else if (p > 0.0) {
            thr = static_cast<std::uint64_t>(static_cast<long double>(p) * 18446744073709551616.0L);
        }
    }
    bool occupied(std::uint64_t u) const { return all || u < thr; }
};

// Batch kernel: out[i] = bond_uniform(key, ids[i]). The scalar reference and
// the AVX2 variant are bit-identical; dispatch happens once at startup and
// honors the PERCOLAB_KERNEL environment variable (scalar | avx2).
using HashBatchFn = void (*)(std::uint64_t key, const std::uint64_t* ids, std::size_t count,
                             std::uint64_t* out);

void hash_batch_scalar(std::uint64_t key, const std::uint64_t* ids, std::size_t count,
                       std::uint64_t* out);
#ifdef PERCOLAB_HAVE_AVX2
void hash_batch_avx2(std::uint64_t key, const std::uint64_t* ids, std::size_t count,
                     std::uint64_t* out);
#endif

extern HashBatchFn hash_batch;
const std::string& active_kernel_name();
// Force a kernel by name; returns false if unavailable on this machine.
bool set_kernel(const std::string& name);

}  // namespace percolab::rng
