#include "momentplan/cli/seeding.hpp"

namespace momentplan {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index) {
  // Key = (root, stream), counter = index; each stage re-mixes so nearby
  // roots or indices give unrelated outputs.
  const std::uint64_t key = splitmix64(root ^ splitmix64(fnv1a(stream)));
  return splitmix64(key + splitmix64(index));
}

}  // namespace momentplan
