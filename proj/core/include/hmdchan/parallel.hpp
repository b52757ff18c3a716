#pragma once

namespace hmdchan
{

// Name of the environment variable that overrides the worker thread count.
inline constexpr const char *thread_env_var = "HMDCHAN_THREADS";

// Worker threads used by the parallel loops: HMDCHAN_THREADS when set to a
// positive integer, otherwise the OpenMP default.
int worker_threads();

} // namespace hmdchan
