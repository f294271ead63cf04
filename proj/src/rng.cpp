#include "ra/rng.hpp"

namespace ra {
namespace {

// FNV-1a 64-bit, enough to decorrelate stream names.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Rng Rng::stream(std::uint64_t master_seed, std::string_view name) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(fnv1a(name)),
                    static_cast<std::uint32_t>(fnv1a(name) >> 32)};
  Rng r;
  r.engine_.seed(seq);
  return r;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling over the smallest covering power-of-two range:
  // unbiased and identical on every platform.
  if (n == 0) return 0;
  const std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n | 1);
  std::uint64_t x;
  do {
    x = engine_() & mask;
  } while (x >= n);
  return x;
}

}  // namespace ra
