#pragma once

// CRT reconstruction over a prime basis. The product modulus Q only ever
// materializes here and in test oracles; hot-path arithmetic stays in RNS.

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <vector>

#include "smhe/numt.hpp"

namespace smhe {

using bigint = boost::multiprecision::cpp_int;

struct CrtBasis {
  std::vector<u64> primes;
  bigint Q;                    // product of primes
  std::vector<bigint> Qi;      // Q / q_i
  std::vector<u64> Qi_inv;     // (Q/q_i)^{-1} mod q_i
  bigint half;                 // Q >> 1, centering threshold

  static CrtBasis make(std::span<const u64> primes) {
    CrtBasis b;
    b.primes.assign(primes.begin(), primes.end());
    b.Q = 1;
    for (u64 q : primes) b.Q *= q;
    b.half = b.Q >> 1;
    for (u64 q : primes) {
      bigint qi = b.Q / q;
      u64 qi_mod = static_cast<u64>(qi % q);
      b.Qi.push_back(qi);
      b.Qi_inv.push_back(inv_mod(qi_mod, q));
    }
    return b;
  }

  // Value in [0, Q) agreeing with residue r_i modulo q_i.
  bigint lift(std::span<const u64> residues) const {
    bigint acc = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      u64 c = mul_mod(residues[i] % primes[i], Qi_inv[i], primes[i]);
      acc += Qi[i] * c;
    }
    return acc % Q;
  }

  // Centered representative in (-Q/2, Q/2].
  bigint lift_centered(std::span<const u64> residues) const {
    bigint x = lift(residues);
    if (x > half) x -= Q;
    return x;
  }

  int bits() const { return static_cast<int>(boost::multiprecision::msb(Q)) + 1; }
};

// Residue of a signed big integer modulo q.
inline u64 reduce_signed(const bigint& x, u64 q) {
  bigint r = x % q;
  if (r < 0) r += q;
  return static_cast<u64>(r);
}

}  // namespace smhe
