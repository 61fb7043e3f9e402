#include "psp/rng.hpp"

namespace psp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t part : parts) {
    h = splitmix64(h ^ splitmix64(part));
  }
  return h;
}

}  // namespace psp
