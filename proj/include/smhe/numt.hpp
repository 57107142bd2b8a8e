#pragma once

// Word-sized modular arithmetic and prime search for NTT-friendly moduli.
// All moduli here are < 2^62 so sums of two residues never overflow u64.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace smhe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline u64 add_mod(u64 a, u64 b, u64 q) {
  u64 s = a + b;
  return s >= q ? s - q : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }

inline u64 neg_mod(u64 a, u64 q) { return a == 0 ? 0 : q - a; }

inline u64 mul_mod(u64 a, u64 b, u64 q) {
  return static_cast<u64>((static_cast<u128>(a) * b) % q);
}

// Shoup multiplication by a precomputed constant w: needs w_shoup = ⌊w·2^64/q⌋.
inline u64 shoup_precompute(u64 w, u64 q) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / q);
}

inline u64 mul_mod_shoup(u64 a, u64 w, u64 w_shoup, u64 q) {
  u64 hi = static_cast<u64>((static_cast<u128>(a) * w_shoup) >> 64);
  u64 r = a * w - hi * q;
  return r >= q ? r - q : r;
}

inline u64 pow_mod(u64 base, u64 exp, u64 q) {
  u64 acc = 1 % q;
  base %= q;
  while (exp) {
    if (exp & 1) acc = mul_mod(acc, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return acc;
}

// Inverse modulo a prime q (Fermat).
inline u64 inv_mod(u64 a, u64 q) {
  if (a % q == 0) throw std::invalid_argument("inv_mod: zero has no inverse");
  return pow_mod(a, q - 2, q);
}

// Deterministic Miller-Rabin, valid for all n < 3.3·10^24 with these bases.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Largest `count` primes below 2^bits with q ≡ 1 (mod two_n), skipping any in
// `avoid`. Deterministic for fixed arguments.
inline std::vector<u64> find_ntt_primes(int bits, int count, u64 two_n,
                                        const std::vector<u64>& avoid = {}) {
  if (bits < 10 || bits > 62) throw std::invalid_argument("prime size out of range");
  std::vector<u64> out;
  u64 top = (1ULL << bits) - 1;
  u64 q = top - ((top - 1) % two_n);  // largest value ≡ 1 mod two_n, ≤ top
  for (; q > two_n && static_cast<int>(out.size()) < count; q -= two_n) {
    if (!is_prime(q)) continue;
    bool skip = false;
    for (u64 a : avoid) skip |= (a == q);
    if (!skip) out.push_back(q);
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("prime generation failure: exhausted candidates");
  return out;
}

// Primitive 2N-th root of unity mod q (N a power of two, q ≡ 1 mod 2N):
// psi = x^((q-1)/2N) has order dividing 2N; it is primitive iff psi^N = -1.
inline u64 find_primitive_root_2n(u64 q, u64 two_n) {
  if ((q - 1) % two_n != 0)
    throw std::invalid_argument("modulus does not support this transform size");
  u64 n = two_n / 2;
  for (u64 x = 2; x < q; ++x) {
    u64 psi = pow_mod(x, (q - 1) / two_n, q);
    if (psi != 0 && pow_mod(psi, n, q) == q - 1) return psi;
  }
  throw std::runtime_error("no primitive root found");
}

}  // namespace smhe
