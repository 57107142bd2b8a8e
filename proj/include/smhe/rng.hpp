#pragma once

// Deterministic random streams over the SHAKE128 XOF. Every consumer of
// randomness takes an explicit XofRng handle; two handles built from the same
// (seed, domain) pair yield identical streams on every platform. Handles are
// never shared between concurrent contexts.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smhe/keccak.hpp"

namespace smhe {

class XofRng {
 public:
  XofRng(std::span<const std::uint8_t> seed, std::string_view domain) {
    xof_.absorb("SMHE-RNG/");
    xof_.absorb(domain);
    xof_.absorb(std::string_view("\x00", 1));  // unambiguous domain/seed split
    xof_.absorb(seed);
    xof_.finalize();
  }

  XofRng(std::string_view seed, std::string_view domain)
      : XofRng(std::span<const std::uint8_t>(
                   reinterpret_cast<const std::uint8_t*>(seed.data()),
                   seed.size()),
               domain) {}

  std::uint64_t next_u64() {
    std::uint8_t b[8];
    xof_.squeeze(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  // Uniform value in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound) {
    std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    for (;;) {
      std::uint64_t v = next_u64();
      if (v < limit) return v % bound;
    }
  }

  bool next_bit() { return next_u64() & 1; }

  // Uniform double in [0, 1) with 53 bits of precision.
  double unit_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Rounded continuous Gaussian, rejection-resampled until |value| ≤ bound.
  // Deterministic for a fixed stream; not constant-time (documented non-goal).
  std::int64_t gaussian(double sigma, std::int64_t bound) {
    if (sigma <= 0.0) return 0;
    for (;;) {
      if (have_spare_) {
        have_spare_ = false;
        std::int64_t v = std::llround(spare_ * sigma);
        if (v >= -bound && v <= bound) return v;
        continue;
      }
      double u1 = unit_double();
      double u2 = unit_double();
      if (u1 <= 0.0) continue;
      double radius = std::sqrt(-2.0 * std::log(u1));
      double z0 = radius * std::cos(2.0 * std::numbers::pi * u2);
      spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
      have_spare_ = true;
      std::int64_t v = std::llround(z0 * sigma);
      if (v >= -bound && v <= bound) return v;
    }
  }

  // Independent child stream; advances this stream by 32 bytes.
  XofRng fork(std::string_view label) {
    std::uint8_t child_seed[32];
    xof_.squeeze(child_seed, 32);
    return XofRng(std::span<const std::uint8_t>(child_seed, 32), label);
  }

 private:
  Shake128 xof_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Parses an even-length hex string into bytes (CLI --seed plumbing).
inline std::vector<std::uint8_t> parse_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace smhe
