#include "qdd/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace qdd {

int worker_count() {
  if (const char* env = std::getenv("QDD_NUM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // fall through to the OpenMP default
    }
  }
  return omp_get_max_threads();
}

}  // namespace qdd
