#include "hmdchan/parallel.hpp"

#include <cstdlib>
#include <omp.h>

namespace hmdchan
{

int worker_threads()
{
    if (const char *env = std::getenv(thread_env_var))
    {
        char *end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0 && n < 4096)
            return static_cast<int>(n);
    }
    return omp_get_max_threads();
}

} // namespace hmdchan
