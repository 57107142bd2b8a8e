#pragma once

// SHAKE128 extendable-output function on Keccak-f[1600].
// Used for CRS derivation, parameter digests, and seeding deterministic RNG
// streams; byte-exact across platforms (state is accessed lane-by-lane with
// explicit little-endian byte positions, never through memory aliasing).

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace smhe {

namespace detail {

inline constexpr std::array<std::uint64_t, 24> kKeccakRc = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

inline constexpr std::array<int, 24> kKeccakRotc = {1,  3,  6,  10, 15, 21,
                                                    28, 36, 45, 55, 2,  14,
                                                    27, 41, 56, 8,  25, 43,
                                                    62, 18, 39, 61, 20, 44};

inline constexpr std::array<int, 24> kKeccakPiln = {10, 7,  11, 17, 18, 3,
                                                    5,  16, 8,  21, 24, 4,
                                                    15, 23, 19, 13, 12, 2,
                                                    20, 14, 22, 9,  6,  1};

inline constexpr std::uint64_t rotl64(std::uint64_t x, int s) {
  return (x << s) | (x >> (64 - s));
}

inline void keccak_f1600(std::array<std::uint64_t, 25>& st) {
  for (int round = 0; round < 24; ++round) {
    std::uint64_t bc[5];
    // theta
    for (int i = 0; i < 5; ++i)
      bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
    for (int i = 0; i < 5; ++i) {
      std::uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
      for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
    }
    // rho + pi
    std::uint64_t t = st[1];
    for (int i = 0; i < 24; ++i) {
      int j = kKeccakPiln[i];
      std::uint64_t tmp = st[j];
      st[j] = rotl64(t, kKeccakRotc[i]);
      t = tmp;
    }
    // chi
    for (int j = 0; j < 25; j += 5) {
      for (int i = 0; i < 5; ++i) bc[i] = st[j + i];
      for (int i = 0; i < 5; ++i)
        st[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
    }
    // iota
    st[0] ^= kKeccakRc[round];
  }
}

}  // namespace detail

// Incremental SHAKE128 sponge: absorb any number of times, finalize once,
// then squeeze any number of bytes; squeezing in chunks matches one-shot.
class Shake128 {
 public:
  static constexpr std::size_t kRate = 168;  // bytes per block at 128-bit strength

  void absorb(std::span<const std::uint8_t> data) {
    if (finalized_) throw std::logic_error("Shake128: absorb after finalize");
    for (std::uint8_t byte : data) {
      xor_byte(pos_, byte);
      if (++pos_ == kRate) {
        detail::keccak_f1600(state_);
        pos_ = 0;
      }
    }
  }

  void absorb(std::string_view text) {
    absorb(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }

  void finalize() {
    if (finalized_) return;
    xor_byte(pos_, 0x1f);  // SHAKE domain separation + pad10*1 start
    xor_byte(kRate - 1, 0x80);
    detail::keccak_f1600(state_);
    pos_ = 0;
    finalized_ = true;
  }

  void squeeze(std::uint8_t* out, std::size_t len) {
    if (!finalized_) finalize();
    for (std::size_t i = 0; i < len; ++i) {
      if (pos_ == kRate) {
        detail::keccak_f1600(state_);
        pos_ = 0;
      }
      out[i] = get_byte(pos_++);
    }
  }

  std::vector<std::uint8_t> squeeze(std::size_t len) {
    std::vector<std::uint8_t> out(len);
    squeeze(out.data(), len);
    return out;
  }

  // One-shot helper: 32-byte digest of a byte string.
  static std::array<std::uint8_t, 32> digest32(
      std::span<const std::uint8_t> data) {
    Shake128 x;
    x.absorb(data);
    x.finalize();
    std::array<std::uint8_t, 32> out{};
    x.squeeze(out.data(), out.size());
    return out;
  }

 private:
  void xor_byte(std::size_t i, std::uint8_t b) {
    state_[i >> 3] ^= static_cast<std::uint64_t>(b) << (8 * (i & 7));
  }
  std::uint8_t get_byte(std::size_t i) const {
    return static_cast<std::uint8_t>(state_[i >> 3] >> (8 * (i & 7)));
  }

  std::array<std::uint64_t, 25> state_{};
  std::size_t pos_ = 0;
  bool finalized_ = false;
};

}  // namespace smhe
