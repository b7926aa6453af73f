#include "dsthin/parallel.hpp"

#include <cstdlib>
#include <omp.h>

namespace dsthin {

namespace {
int resolve_env_workers()
{
    const char* env = std::getenv("DSTHIN_WORKERS");
    if (!env)
        return 0;
    int n = std::atoi(env);
    return n > 0 ? n : 0;
}
} // namespace

void set_workers(int n)
{
    if (n > 0)
        omp_set_num_threads(n);
}

int workers()
{
    static int envWorkers = resolve_env_workers();
    if (envWorkers > 0) {
        omp_set_num_threads(envWorkers);
        return envWorkers;
    }
    return omp_get_max_threads();
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace dsthin
