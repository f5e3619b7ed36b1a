#include "weylzeta/parallel.hpp"

namespace weylzeta {

int& thread_count() {
  static int n = 0;  // 0 = hardware_concurrency
  return n;
}

}  // namespace weylzeta
