#pragma once

// Reduction kernels for quadrature: a scalar reference and SIMD variants
// picked at runtime. All variants follow the same summation order (4 lanes
// inside blocks of 64 samples, blocks combined by a fixed pairwise tree), so
// they agree bit for bit. Requires -ffp-contract=off.

#include <cstddef>
#include <string>

namespace foliate::simd {

enum class Isa { Scalar, Avx2, Neon };

inline constexpr std::size_t kLanes = 4;
inline constexpr std::size_t kBlock = 64;

/// Best variant supported by this CPU, unless FOLIATE_ISA=scalar is set.
Isa active_isa();
bool isa_supported(Isa isa);
std::string isa_name(Isa isa);

/// sum_i v[i] * w[i]
double weighted_sum(const double* v, const double* w, std::size_t n);
double weighted_sum(Isa isa, const double* v, const double* w, std::size_t n);

/// max_i |v[i]| (0 for n = 0; NaN propagates)
double max_abs(const double* v, std::size_t n);
double max_abs(Isa isa, const double* v, std::size_t n);

namespace scalar {
double block_dot(const double* v, const double* w, std::size_t n);
double max_abs(const double* v, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
namespace avx2 {
double block_dot(const double* v, const double* w, std::size_t n);
double max_abs(const double* v, std::size_t n);
}  // namespace avx2
#endif

#if defined(__ARM_NEON)
namespace neon {
double block_dot(const double* v, const double* w, std::size_t n);
double max_abs(const double* v, std::size_t n);
}  // namespace neon
#endif

}  // namespace foliate::simd
