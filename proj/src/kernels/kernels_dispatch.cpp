#include <cstdlib>
#include <cstring>

#include "mvmilp/kernels.hpp"

namespace mvmilp::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Dispatch& avx2_table();
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
const Dispatch& neon_table();
#endif

namespace {

const Dispatch& pick() {
  const char* force = std::getenv("MVMILP_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(force, "avx2") == 0) return avx2_table();
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    if (std::strcmp(force, "neon") == 0) return neon_table();
#endif
    return scalar_table();  // unknown name: safe default
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return avx2_table();
  }
#elif defined(__aarch64__) || defined(__ARM_NEON)
  return neon_table();
#endif
  return scalar_table();
}

}  // namespace

const Dispatch& active() {
  static const Dispatch& table = pick();
  return table;
}

}  // namespace mvmilp::kernels
