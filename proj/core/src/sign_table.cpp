#include <cmath>

#include "typeb/errors.hpp"
#include "typeb/spins.hpp"

namespace typeb {

namespace {
constexpr std::uint64_t kTagS = 0x73;
constexpr std::uint64_t kTagR = 0x72;
}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SignTable::SignTable(std::uint64_t seed, double q, RConvention convention)
    : seed_(seed), q_(q), threshold_((1.0 + q) / 2.0), convention_(convention) {
  if (!(std::abs(q) < 1.0)) throw InputError("sign mean q must lie in (-1, 1)");
}

int SignTable::draw(std::uint64_t tag, int i, int j) const {
  const std::uint64_t packed =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
      static_cast<std::uint32_t>(j);
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed_) ^ tag) ^ packed);
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < threshold_ ? 1 : -1;
}

std::uint64_t SignTable::pinned_key(std::uint64_t tag, int i, int j) const {
  return (tag << 56) | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 28) |
         static_cast<std::uint32_t>(j);
}

int SignTable::s(int i, int j) const {
  if (i == j) throw InputError("s(i, j) needs distinct sites");
  if (i > j) std::swap(i, j);
  if (!pinned_.empty()) {
    if (auto it = pinned_.find(pinned_key(kTagS, i, j)); it != pinned_.end()) return it->second;
  }
  return draw(kTagS, i, j);
}

int SignTable::r(int i, int j) const {
  if (i == j) throw InputError("r(i, j) needs distinct sites");
  if (convention_ == RConvention::symmetric && i > j) std::swap(i, j);
  if (!pinned_.empty()) {
    if (auto it = pinned_.find(pinned_key(kTagR, i, j)); it != pinned_.end()) return it->second;
  }
  return draw(kTagR, i, j);
}

void SignTable::set_s(int i, int j, int value) {
  if (i == j || (value != 1 && value != -1)) throw InputError("bad pinned s value");
  if (i > j) std::swap(i, j);
  pinned_[pinned_key(kTagS, i, j)] = value;
}

void SignTable::set_r(int i, int j, int value) {
  if (i == j || (value != 1 && value != -1)) throw InputError("bad pinned r value");
  if (convention_ == RConvention::symmetric && i > j) std::swap(i, j);
  pinned_[pinned_key(kTagR, i, j)] = value;
}

}  // namespace typeb
