#pragma once

#include <cstdint>

namespace dsthin {

// Worker-count control for the OpenMP kernels. Results are identical for any
// worker count; this only affects wall time. Priority: set_workers() call,
// then DSTHIN_WORKERS env var, then the OpenMP default.
void set_workers(int n);
int workers();

// splitmix64, used to derive independent per-trial RNG streams from a seed.
std::uint64_t mix64(std::uint64_t x);

// Deterministic uniform integer in [0, n), unbiased via rejection.
template <class Rng>
std::uint64_t bounded_uint(Rng& rng, std::uint64_t n)
{
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold)
            return r % n;
    }
}

} // namespace dsthin
