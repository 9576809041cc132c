#include <cstdlib>
#include <cstring>
#include <vector>

#include "foliate/errors.hpp"
#include "foliate/simd/kernels.hpp"

namespace foliate::simd {

namespace {

using BlockDot = double (*)(const double*, const double*, std::size_t);
using MaxAbs = double (*)(const double*, std::size_t);

BlockDot block_dot_for(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::Avx2: return &avx2::block_dot;
#endif
#if defined(__ARM_NEON)
    case Isa::Neon: return &neon::block_dot;
#endif
    default: return &scalar::block_dot;
  }
}

MaxAbs max_abs_for(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::Avx2: return &avx2::max_abs;
#endif
#if defined(__ARM_NEON)
    case Isa::Neon: return &neon::max_abs;
#endif
    default: return &scalar::max_abs;
  }
}

Isa detect() {
  const char* env = std::getenv("FOLIATE_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  if (isa_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__ARM_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

double weighted_sum(Isa isa, const double* v, const double* w, std::size_t n) {
  if (!isa_supported(isa)) throw Error("instruction set " + isa_name(isa) + " not available");
  const BlockDot dot = block_dot_for(isa);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  if (blocks == 0) return 0.0;
  std::vector<double> partial(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * kBlock;
    const std::size_t len = n - begin < kBlock ? n - begin : kBlock;
    partial[b] = dot(v + begin, w + begin, len);
  }
  // Pairwise tree with a fixed shape for a given block count.
  for (std::size_t width = blocks; width > 1;) {
    const std::size_t half = (width + 1) / 2;
    for (std::size_t i = 0; i + half < width; ++i) partial[i] = partial[i] + partial[i + half];
    width = half;
  }
  return partial[0];
}

double weighted_sum(const double* v, const double* w, std::size_t n) {
  return weighted_sum(active_isa(), v, w, n);
}

double max_abs(Isa isa, const double* v, std::size_t n) {
  if (!isa_supported(isa)) throw Error("instruction set " + isa_name(isa) + " not available");
  return max_abs_for(isa)(v, n);
}

double max_abs(const double* v, std::size_t n) { return max_abs(active_isa(), v, n); }

}  // namespace foliate::simd
