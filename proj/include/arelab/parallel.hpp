#pragma once

namespace arelab {

/// Worker thread count for parallel kernels: the value of MC_ARELAB_THREADS when
/// it is a positive integer, otherwise the OpenMP default.
int worker_threads();

} // namespace arelab
