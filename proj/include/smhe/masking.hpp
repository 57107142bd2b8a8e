#pragma once

// Masking module: UniEnc, MaskEnc, Extend, Extend*. MaskEnc emits an
// encryption of zero under randomness r together with a gadget encryption of
// r; Extend turns the gadget part into the correction cx = (b' - b) ⊡ Γ. The
// scheme's heart is the joint cancellation
//   ⟨sk, cx⟩ + ⟨sk', cz⟩ ≈ 0,
// bounded by (2N² + 4N)·B_chi-scale + tau·N·B_chi·B_H.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "smhe/gadget.hpp"
#include "smhe/keys.hpp"
#include "smhe/ring.hpp"

namespace smhe {

// -------------------------------------------------------------------------
// Plaintext encoding

// BFV: μ ∈ R_t lifted to ⌊(Q/t)·μ⌉ mod each prime.
inline Poly bfv_encode(const std::vector<u64>& mu, const Params& p) {
  if (mu.size() > p.N) throw std::invalid_argument("bfv_encode: too many coefficients");
  Poly out = Poly::zero(p.primes, p.N);
  const bigint& Q = p.basis.Q;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k] >= p.t) throw std::invalid_argument("bfv_encode: coefficient >= t");
    bigint scaled = (Q * mu[k] + p.t / 2) / p.t;  // ⌊(Q/t)·μ⌉
    for (std::size_t i = 0; i < p.primes.size(); ++i)
      out.residues[i][k] = static_cast<u64>(scaled % p.primes[i]);
  }
  return out;
}

// ⌊(t/Q)·m⌉ mod t on the centered lift of a raw decryption.
inline std::vector<u64> bfv_decode(const Poly& m, const Params& p) {
  std::vector<u64> out(m.n());
  const bigint& Q = p.basis.Q;
  std::vector<bigint> lifted = lift_centered(m, p.basis);
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    bigint num = lifted[k] * p.t;
    bigint rounded;
    if (num >= 0) {
      rounded = (2 * num + Q) / (2 * Q);
    } else {
      rounded = (2 * -num + Q) / (2 * Q);
      rounded = -rounded;
    }
    bigint r = rounded % p.t;
    if (r < 0) r += p.t;
    out[k] = static_cast<u64>(r);
  }
  return out;
}

// CKKS: coefficient-wise fixed point at scale Δ (slot packing is a non-goal).
inline Poly ckks_encode(const std::vector<double>& v, double scale, const Params& p) {
  if (v.size() > p.N) throw std::invalid_argument("ckks_encode: too many values");
  Poly out = Poly::zero(p.primes, p.N);
  for (std::size_t k = 0; k < v.size(); ++k) {
    i64 c = std::llround(v[k] * scale);
    for (std::size_t i = 0; i < p.primes.size(); ++i)
      out.residues[i][k] = c >= 0 ? static_cast<u64>(c) % p.primes[i]
                                  : p.primes[i] - static_cast<u64>(-c) % p.primes[i];
  }
  return out;
}

inline std::vector<double> ckks_decode(const Poly& m, double scale, const Params& p) {
  std::vector<double> out(m.n());
  std::vector<bigint> lifted = lift_centered(m, p.basis);
  for (std::size_t k = 0; k < lifted.size(); ++k)
    out[k] = static_cast<double>(lifted[k]) / scale;
  return out;
}

// -------------------------------------------------------------------------
// Types

struct FreshCiphertext {
  int owner = 0;
  Scheme scheme = Scheme::BFV;
  Poly c0, c1;
  double scale = 1.0;            // CKKS tracked scale
  long double noise_bound = 0;   // conservative ∥e∥∞ estimate
};

struct MaskMaterial {
  int owner = 0;
  Poly z0, z1;             // cz: encryption of 0 under the owner's pk
  GadgetCiphertext gamma;  // gadget encryption of the mask randomness r
};

struct MaskCorrection {
  Poly x0, x1;  // cx = (b' - b) ⊡ Γ
};

// Fresh single-key encryption noise: w·e_pk + e0 + s·e1 plus BFV encoding
// rounding, with ∥w∥∞, ∥s∥∞ ≤ B_chi.
inline long double fresh_noise_bound(const Params& p) {
  return 2.0L * p.N * p.B_chi * p.gauss_bound + p.gauss_bound + 1;
}

// ⟨H(·), e⟩ with gadget noise drawn from χ.
inline long double extend_noise_bound(const Params& p) {
  return static_cast<long double>(p.tau) * p.N * p.B_H * p.B_chi;
}

// -------------------------------------------------------------------------
// Operations

// UniEnc / FHE.Enc: ct = w·pk + (μ̃ + e0, e1), w ← χ. `mu_tilde` is already
// encoded (BFV: ⌊(Q/t)μ⌉; CKKS: ⌊vΔ⌉).
inline FreshCiphertext uni_enc(const Poly& mu_tilde, const PublicKey& pk,
                               const Params& p, XofRng& rng) {
  Poly w = sample_chi(rng, p);
  Poly e0 = sample_gauss(rng, p);
  Poly e1 = sample_gauss(rng, p);
  FreshCiphertext ct;
  ct.owner = pk.party;
  ct.scheme = p.scheme;
  ct.scale = p.scheme == Scheme::CKKS ? p.ckks_scale : 1.0;
  ct.c0 = add(add(mul(w, pk.b, p.tables), mu_tilde), e0);
  ct.c1 = add(mul(w, pk.a, p.tables), e1);
  ct.noise_bound = fresh_noise_bound(p);
  return ct;
}

// MaskEnc: cz = r·pk + (e_r0, e_r1) with r ← χ sampled (and wiped) in here;
// Γ = GgtEnc(sk, r).
inline MaskMaterial mask_enc(const PublicKey& pk, const SecretKey& sk,
                             const Params& p, XofRng& rng) {
  if (pk.party != sk.party)
    throw std::invalid_argument("mask_enc: pk/sk owner mismatch");
  Poly r = sample_chi(rng, p);
  Poly e0 = sample_gauss(rng, p);
  Poly e1 = sample_gauss(rng, p);
  MaskMaterial m;
  m.owner = pk.party;
  m.z0 = add(mul(r, pk.b, p.tables), e0);
  m.z1 = add(mul(r, pk.a, p.tables), e1);
  m.gamma = ggt_enc(sk.s, r, p, rng);
  for (auto& row : r.residues) std::fill(row.begin(), row.end(), 0);
  return m;
}

// Extend: cx = (b' - b) ⊡ Γ, so ⟨sk, cx⟩ ≈ r·(b' - b).
inline MaskCorrection extend(const GadgetCiphertext& gamma, const PublicKey& pk,
                             const PublicKey& pk_prime, const Params& p) {
  if (!(pk.a == pk_prime.a))
    throw std::invalid_argument("extend: public keys share no CRS");
  auto [x0, x1] = external_product(sub(pk_prime.b, pk.b), gamma, p);
  return MaskCorrection{std::move(x0), std::move(x1)};
}

// Extend*: one decomposition against Σ_j (b_j - b) replaces |others| pairwise
// extensions.
inline MaskCorrection extend_star(const GadgetCiphertext& gamma,
                                  const PublicKey& pk,
                                  const std::vector<PublicKey>& others,
                                  const Params& p) {
  if (others.empty())
    throw std::invalid_argument("extend_star: needs at least one other key");
  Poly diff = Poly::zero(pk.b.primes, pk.b.n());
  for (const PublicKey& other : others) {
    if (!(pk.a == other.a))
      throw std::invalid_argument("extend_star: public keys share no CRS");
    diff = add(diff, sub(other.b, pk.b));
  }
  auto [x0, x1] = external_product(diff, gamma, p);
  return MaskCorrection{std::move(x0), std::move(x1)};
}

}  // namespace smhe
