#include "arelab/parallel.hpp"

#include <cstdlib>
#include <omp.h>
#include <string>

namespace arelab {

int worker_threads() {
    if (const char* env = std::getenv("MC_ARELAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

} // namespace arelab
