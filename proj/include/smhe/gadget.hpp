#pragma once

// Gadget module: balanced base-B digit decomposition H, the gadget vector
// g = (B^0, ..., B^(tau-1)), gadget encryption, and the external product ⊡.
// Contracts:
//   ⟨H(b), g⟩ ≡ b (mod Q) with every digit's centered norm ≤ B_H,
//   ⟨sk, Γ⟩ = r·g + e entrywise,
//   ⟨sk, b ⊡ Γ⟩ = b·r + ⟨H(b), e⟩ with ∥⟨H(b), e⟩∥∞ ≤ tau·N·B_H·∥e∥∞.

#include <vector>

#include "smhe/ring.hpp"

namespace smhe {

// Residues of g_j = B^j, one per main prime.
inline std::vector<u64> gadget_power(const Params& p, std::size_t j) {
  std::vector<u64> out(p.primes.size());
  for (std::size_t i = 0; i < p.primes.size(); ++i)
    out[i] = pow_mod(p.gadget_base % p.primes[i], j, p.primes[i]);
  return out;
}

// H(b): tau digit polynomials with balanced digits in (-B/2, B/2], computed on
// the CRT-lifted centered coefficient. Exact: recompose(decompose(b)) = b.
inline PolyVec decompose(const Poly& b, const Params& p) {
  if (b.form != Form::Coeff)
    throw std::invalid_argument("decompose: expected Coeff form");
  const std::size_t n = b.n();
  const i64 base = static_cast<i64>(p.gadget_base);
  const i64 half = base / 2;

  std::vector<bigint> x = lift_centered(b, p.basis);
  PolyVec digits;
  for (std::size_t j = 0; j < p.tau; ++j)
    digits.entries.push_back(Poly::zero(p.primes, n));

  for (std::size_t k = 0; k < n; ++k) {
    bigint v = x[k];
    for (std::size_t j = 0; j < p.tau; ++j) {
      i64 r = static_cast<i64>(((v % base) + base) % base);
      if (r > half) r -= base;
      v = (v - r) / base;
      for (std::size_t i = 0; i < p.primes.size(); ++i)
        digits.entries[j].residues[i][k] =
            r >= 0 ? static_cast<u64>(r) : p.primes[i] - static_cast<u64>(-r);
    }
    if (v != 0)
      throw std::logic_error("decompose: residue after tau digits (B^tau < Q?)");
  }
  return digits;
}

// ⟨digits, g⟩ mod Q; inverse of decompose.
inline Poly recompose(const PolyVec& digits, const Params& p) {
  if (digits.size() != p.tau)
    throw std::invalid_argument("recompose: digit count != tau");
  Poly acc = Poly::zero(p.primes, digits[0].n());
  for (std::size_t j = 0; j < p.tau; ++j)
    acc = add(acc, scalar_mul(digits[j], gadget_power(p, j)));
  return acc;
}

// Γ = (ς0, ς1): gadget encryption of mu under sk = (1, s).
// ς1 uniform, ς0 = -s·ς1 + mu·g + e. The noise vector is sampled from χ so
// that ∥e∥∞ ≤ B_chi, which keeps the masking-scheme and aggregation noise
// bounds priced in B_chi units; this is tighter than the Gaussian bound the
// GadgetCiphertext invariant requires.
struct GadgetCiphertext {
  PolyVec varsigma0;
  PolyVec varsigma1;
};

inline GadgetCiphertext ggt_enc(const Poly& s, const Poly& mu, const Params& p,
                                XofRng& rng) {
  GadgetCiphertext out;
  for (std::size_t j = 0; j < p.tau; ++j) {
    Poly c1 = sample_uniform(rng, p);
    Poly e = sample_chi(rng, p);
    Poly c0 = add(sub(e, mul(s, c1, p.tables)), scalar_mul(mu, gadget_power(p, j)));
    out.varsigma0.entries.push_back(std::move(c0));
    out.varsigma1.entries.push_back(std::move(c1));
  }
  return out;
}

// ⟨H(b), vec⟩ for precomputed digits.
inline Poly inner_product(const PolyVec& digits, const PolyVec& vec,
                          const Params& p) {
  if (digits.size() != vec.size())
    throw std::invalid_argument("inner_product: length mismatch");
  Poly acc = Poly::zero(p.primes, digits[0].n());
  for (std::size_t j = 0; j < digits.size(); ++j)
    acc = add(acc, mul(digits[j], vec[j], p.tables));
  return acc;
}

// b ⊡ vec = ⟨H(b), vec⟩ against a single key vector (relinearization usage).
inline Poly external_product(const Poly& b, const PolyVec& vec, const Params& p) {
  return inner_product(decompose(b, p), vec, p);
}

// b ⊡ Γ = (⟨H(b), ς0⟩, ⟨H(b), ς1⟩); one decomposition feeds both halves.
inline std::pair<Poly, Poly> external_product(const Poly& b,
                                              const GadgetCiphertext& gamma,
                                              const Params& p) {
  PolyVec digits = decompose(b, p);
  return {inner_product(digits, gamma.varsigma0, p),
          inner_product(digits, gamma.varsigma1, p)};
}

}  // namespace smhe
