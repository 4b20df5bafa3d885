#include "percolab/rng.hpp"

namespace percolab::rng {

void hash_batch_scalar(std::uint64_t key, const std::uint64_t* ids, std::size_t count,
                       std::uint64_t* out) {
    for (std::size_t i = 0; i < count; ++i) out[i] = bond_uniform(key, ids[i]);
}

}  // namespace percolab::rng
