#include "rlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace rlab {

namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("RLAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<int>& configured() {
  static std::atomic<int> n{initial_thread_count()};
  return n;
}

} // namespace

int thread_count() { return configured().load(); }

void set_thread_count(int n) { configured().store(n > 0 ? n : 1); }

} // namespace rlab
