#include "hamrep/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hamrep {

int worker_count() {
  if (const char* env = std::getenv("HAMREP_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace hamrep
