#include "uvstab/execution.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace uvstab {

int scan_threads() {
  if (const char* env = std::getenv("UVSTAB_THREADS")) {
    int n = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), n);
    if (ec == std::errc() && *ptr == '\0' && n > 0) return n;
  }
  return omp_get_max_threads();
}

}  // namespace uvstab
