#pragma once

// Evaluator module: the multi-key ciphertext lifecycle. Expanded ciphertexts
// are immutable (n+1)-component values; every operation returns a new one and
// updates a conservative noise estimate, throwing once the estimate reaches
// decryption capacity. The CDKS baseline shares the pipeline minus masking.

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "smhe/masking.hpp"

namespace smhe {

struct Plaintext {
  Scheme scheme = Scheme::BFV;
  std::vector<u64> ints;      // BFV payload, values in [0, t)
  std::vector<double> reals;  // CKKS payload
};

struct ExpandedCiphertext {
  Scheme scheme = Scheme::BFV;
  int n = 0;                      // deployment size
  std::vector<Poly> comps;        // c̄_0 .. c̄_n
  std::vector<int> ref_set;       // ascending party indices the ct references
  bool masked = false;
  double scale = 1.0;             // CKKS tracked scale
  long double noise_bound = 0;
};

struct PartialDecryption {
  int party = 0;
  Poly nu;
};

struct CiphertextBundle {
  FreshCiphertext ct;
  MaskMaterial mask;
};

namespace detail {

inline void audit_noise(const ExpandedCiphertext& e, const Params& p) {
  if (e.noise_bound >= p.noise_capacity())
    throw std::runtime_error(
        "noise budget exceeded: ciphertext is no longer decryptable");
}

inline std::vector<int> sorted_union(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  std::set<int> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

// Mask-cancellation residue per applied (i, j) pair: the gadget term
// ⟨H(Σ b_j - b), e_Γ⟩ plus the r·e_pk convolutions that survive cancellation.
inline long double pair_mask_noise(const Params& p) {
  return extend_noise_bound(p) +
         4.0L * p.N * p.B_chi * p.gauss_bound + 2.0L * p.gauss_bound;
}

}  // namespace detail

// -------------------------------------------------------------------------
// Encoding / Encryption

inline Poly encode(const Plaintext& pt, const Params& p) {
  if (pt.scheme != p.scheme)
    throw std::invalid_argument("encode: plaintext scheme does not match params");
  return p.scheme == Scheme::BFV ? bfv_encode(pt.ints, p)
                                 : ckks_encode(pt.reals, p.ckks_scale, p);
}

// SMHE.Encrypt: fresh ciphertext plus masking material bound to it.
inline CiphertextBundle encrypt(const Poly& mu_tilde, const SecretKey& sk,
                                const PublicKey& pk, const Params& p,
                                XofRng& rng) {
  CiphertextBundle b{uni_enc(mu_tilde, pk, p, rng), mask_enc(pk, sk, p, rng)};
  return b;
}

inline CiphertextBundle encrypt(const Plaintext& pt, const KeyTriple& kt,
                                const Params& p, XofRng& rng) {
  return encrypt(encode(pt, p), kt.sk, kt.pk, p, rng);
}

// CDKS.Encrypt: the baseline has no masking material.
inline FreshCiphertext cdks_encrypt(const Poly& mu_tilde, const PublicKey& pk,
                                    const Params& p, XofRng& rng) {
  return uni_enc(mu_tilde, pk, p, rng);
}

inline FreshCiphertext cdks_encrypt(const Plaintext& pt, const PublicKey& pk,
                                    const Params& p, XofRng& rng) {
  return cdks_encrypt(encode(pt, p), pk, p, rng);
}

// -------------------------------------------------------------------------
// Expansion:  (c0, c1) -> (c0, 0, .., c1 at slot i, .., 0)

inline ExpandedCiphertext expand(const FreshCiphertext& ct, int party, int n) {
  if (party < 1 || party > n)
    throw std::invalid_argument("expand: party index out of range");
  ExpandedCiphertext e;
  e.scheme = ct.scheme;
  e.n = n;
  e.scale = ct.scale;
  e.noise_bound = ct.noise_bound;
  e.comps.assign(n + 1, Poly::zero(ct.c0.primes, ct.c0.n()));
  e.comps[0] = ct.c0;
  e.comps[party] = ct.c1;
  e.ref_set = {party};
  return e;
}

inline ExpandedCiphertext expand(const CiphertextBundle& b, int n) {
  return expand(b.ct, b.ct.owner, n);
}

inline ExpandedCiphertext cdks_expand(const FreshCiphertext& ct, int party, int n) {
  return expand(ct, party, n);
}

// All-zero ciphertext with an empty reference set (aggregation seed value).
inline ExpandedCiphertext zero_ciphertext(const Params& p, int n) {
  ExpandedCiphertext e;
  e.scheme = p.scheme;
  e.n = n;
  e.scale = p.scheme == Scheme::CKKS ? p.ckks_scale : 1.0;
  e.comps.assign(n + 1, Poly::zero(p.primes, p.N));
  return e;
}

// -------------------------------------------------------------------------
// Masked addition

namespace detail {

inline void check_addable(const ExpandedCiphertext& a,
                          const ExpandedCiphertext& b) {
  if (a.n != b.n) throw std::invalid_argument("add: deployment size mismatch");
  if (a.scheme != b.scheme) throw std::invalid_argument("add: scheme mismatch");
  if (a.scheme == Scheme::CKKS && a.scale != b.scale)
    throw std::invalid_argument("add: CKKS scale mismatch");
}

}  // namespace detail

// SMHE.Add_2, the two-party special case written out by the construction:
//   (c0^1+c0^2+x0^1+x0^2+z0^1+z0^2,  c1^1+x1^1+z1^2,  c1^2+x1^2+z1^1).
inline ExpandedCiphertext add_two(const ExpandedCiphertext& e1,
                                  const ExpandedCiphertext& e2,
                                  const PublicKey& pk1, const PublicKey& pk2,
                                  const MaskMaterial& m1, const MaskMaterial& m2,
                                  const Params& p) {
  detail::check_addable(e1, e2);
  if (e1.n != 2 || e1.ref_set != std::vector<int>{1} ||
      e2.ref_set != std::vector<int>{2})
    throw std::invalid_argument("add_two: expects fresh expansions at n=2");
  if (m1.owner != pk1.party || m2.owner != pk2.party || pk1.party != 1 ||
      pk2.party != 2)
    throw std::invalid_argument("add_two: mask/key owner mismatch");

  MaskCorrection cx1 = extend(m1.gamma, pk1, pk2, p);
  MaskCorrection cx2 = extend(m2.gamma, pk2, pk1, p);

  ExpandedCiphertext out = e1;
  out.comps[0] = add(add(e1.comps[0], e2.comps[0]),
                     add(add(cx1.x0, cx2.x0), add(m1.z0, m2.z0)));
  out.comps[1] = add(e1.comps[1], add(cx1.x1, m2.z1));
  out.comps[2] = add(e2.comps[2], add(cx2.x1, m1.z1));
  out.ref_set = {1, 2};
  out.masked = true;
  out.noise_bound = e1.noise_bound + e2.noise_bound + 2 * detail::pair_mask_noise(p);
  detail::audit_noise(out, p);
  return out;
}

// General n-party masked addition. T and T_prime default to the operand reference
// sets; the PPFL ring chaining passes them explicitly. For every i in T with
// nonempty counterpart set T'∖{i}, slot i receives
//   cx_i = Extend*(Γ_i, pk_i, {pk_j}) and cz_i' = Σ_j cz_j,
// and symmetrically for T'. Empty counterpart sets apply no masking.
inline ExpandedCiphertext add(
    const ExpandedCiphertext& e1, const ExpandedCiphertext& e2,
    const std::map<int, PublicKey>& pks,
    const std::map<int, MaskMaterial>& masks, const Params& p,
    std::optional<std::vector<int>> T = std::nullopt,
    std::optional<std::vector<int>> T_prime = std::nullopt) {
  detail::check_addable(e1, e2);
  std::vector<int> t = T.value_or(e1.ref_set);
  std::vector<int> tp = T_prime.value_or(e2.ref_set);

  ExpandedCiphertext out = e1;
  for (int i = 0; i <= e1.n; ++i) out.comps[i] = add(e1.comps[i], e2.comps[i]);
  out.ref_set = detail::sorted_union(e1.ref_set, e2.ref_set);
  out.masked = e1.masked || e2.masked;
  out.noise_bound = e1.noise_bound + e2.noise_bound;

  auto apply_side = [&](const std::vector<int>& side, const std::vector<int>& other) {
    for (int i : side) {
      std::vector<PublicKey> counterpart;
      std::vector<const MaskMaterial*> czs;
      for (int j : other) {
        if (j == i) continue;
        auto pk_it = pks.find(j);
        auto mk_it = masks.find(j);
        if (pk_it == pks.end())
          throw std::invalid_argument("add: missing public key for party " +
                                      std::to_string(j));
        if (mk_it == masks.end())
          throw std::invalid_argument("add: missing mask material for party " +
                                      std::to_string(j));
        counterpart.push_back(pk_it->second);
        czs.push_back(&mk_it->second);
      }
      if (counterpart.empty()) continue;  // no counterpart: nothing to mask against

      auto pk_it = pks.find(i);
      auto mk_it = masks.find(i);
      if (pk_it == pks.end())
        throw std::invalid_argument("add: missing public key for party " +
                                    std::to_string(i));
      if (mk_it == masks.end())
        throw std::invalid_argument("add: missing mask material for party " +
                                    std::to_string(i));
      if (i < 1 || i > e1.n)
        throw std::invalid_argument("add: mask target outside deployment");

      MaskCorrection cx =
          extend_star(mk_it->second.gamma, pk_it->second, counterpart, p);
      out.comps[0] = add(out.comps[0], cx.x0);
      out.comps[i] = add(out.comps[i], cx.x1);
      for (const MaskMaterial* cz : czs) {
        out.comps[0] = add(out.comps[0], cz->z0);
        out.comps[i] = add(out.comps[i], cz->z1);
      }
      out.masked = true;
      out.ref_set = detail::sorted_union(out.ref_set, {i});
      out.noise_bound += detail::pair_mask_noise(p) +
                         (czs.size() - 1) * detail::pair_mask_noise(p) / 2;
    }
  };
  apply_side(t, tp);
  apply_side(tp, t);

  detail::audit_noise(out, p);
  return out;
}

// CDKS.Add: plain component-wise addition, no masking. The aggregate keeps
// the attack precondition c̄_i = c_1^i.
inline ExpandedCiphertext cdks_add(const ExpandedCiphertext& e1,
                                   const ExpandedCiphertext& e2,
                                   const Params& p) {
  detail::check_addable(e1, e2);
  ExpandedCiphertext out = e1;
  for (int i = 0; i <= e1.n; ++i) out.comps[i] = add(e1.comps[i], e2.comps[i]);
  out.ref_set = detail::sorted_union(e1.ref_set, e2.ref_set);
  out.noise_bound = e1.noise_bound + e2.noise_bound;
  detail::audit_noise(out, p);
  return out;
}

// -------------------------------------------------------------------------
// Multiplication (tensor + relinearization)

namespace detail {

// Main-basis Coeff poly -> widened basis, preserving the centered value.
inline Poly lift_to_ext(const Poly& a, const Params& p) {
  std::vector<bigint> c = lift_centered(a, p.basis);
  return poly_from_centered(c, p.ext_primes);
}

// ⌊(t/Q)·x⌉ on the exact integer tensor coefficient, back to the main basis.
inline Poly rescale_tensor(const Poly& wide, const Params& p) {
  std::vector<bigint> x = lift_centered(wide, p.ext_basis);
  const bigint& Q = p.basis.Q;
  for (bigint& v : x) {
    bigint num = v * p.t;
    bigint rounded;
    if (num >= 0) {
      rounded = (2 * num + Q) / (2 * Q);
    } else {
      rounded = (2 * -num + Q) / (2 * Q);
      rounded = -rounded;
    }
    v = rounded;
  }
  return poly_from_centered(x, p.primes);
}

}  // namespace detail

// SMHE.Mult: pairwise tensor with BFV ⌊(t/Q)·⌉ rescaling (computed exactly
// over the widened prime basis), then the relinearization step uses:
//   c̄_0 = c_00;  c̄_i += c_0i + c_i0;
//   per (i,j): c̄_j += c_ij ⊡ d_i;  k = c_ij ⊡ b_j;  (c̄_0, c̄_i) += k ⊡ (v_i, u_i).
// Works on fresh-expanded, masked, and mixed operands.
inline ExpandedCiphertext mult(const ExpandedCiphertext& e1,
                               const ExpandedCiphertext& e2,
                               const std::map<int, EvalKey>& evks,
                               const Params& p) {
  detail::check_addable(e1, e2);
  const int n = e1.n;
  const bool bfv = p.scheme == Scheme::BFV;

  // Tensor factors: BFV lifts into the widened basis and keeps NTT form for
  // the pairwise products; CKKS multiplies in the main basis directly.
  std::span<const NttTables> tabs = bfv ? std::span<const NttTables>(p.ext_tables)
                                        : std::span<const NttTables>(p.tables);
  std::vector<Poly> f1(n + 1), f2(n + 1);
  std::vector<bool> z1(n + 1), z2(n + 1);
  for (int i = 0; i <= n; ++i) {
    z1[i] = e1.comps[i].is_zero();
    z2[i] = e2.comps[i].is_zero();
    if (!z1[i]) f1[i] = ntt(bfv ? detail::lift_to_ext(e1.comps[i], p) : e1.comps[i], tabs);
    if (!z2[i]) f2[i] = ntt(bfv ? detail::lift_to_ext(e2.comps[i], p) : e2.comps[i], tabs);
  }

  auto tensor = [&](int i, int j) -> Poly {
    if (z1[i] || z2[j]) return Poly::zero(p.primes, p.N);
    Poly prod = intt(mul(f1[i], f2[j], tabs), tabs);
    return bfv ? detail::rescale_tensor(prod, p) : std::move(prod);
  };

  ExpandedCiphertext out;
  out.scheme = e1.scheme;
  out.n = n;
  out.scale = e1.scale * e2.scale;  // depth-1 CKKS: no rescaling, scale Δ²
  out.comps.assign(n + 1, Poly::zero(p.primes, p.N));
  out.ref_set = detail::sorted_union(e1.ref_set, e2.ref_set);
  out.masked = e1.masked || e2.masked;

  out.comps[0] = tensor(0, 0);
  for (int i = 1; i <= n; ++i)
    out.comps[i] = add(tensor(0, i), tensor(i, 0));

  int pairs = 0;
  for (int i = 1; i <= n; ++i) {
    if (z1[i]) continue;
    auto evk_i = evks.find(i);
    if (evk_i == evks.end())
      throw std::invalid_argument("mult: missing evaluation key for party " +
                                  std::to_string(i));
    for (int j = 1; j <= n; ++j) {
      if (z2[j]) continue;
      auto evk_j = evks.find(j);
      if (evk_j == evks.end())
        throw std::invalid_argument("mult: missing evaluation key for party " +
                                    std::to_string(j));
      Poly c = tensor(i, j);
      PolyVec digits = decompose(c, p);
      out.comps[j] = add(out.comps[j], inner_product(digits, evk_i->second.d, p));
      Poly k = inner_product(digits, evk_j->second.b, p);
      PolyVec kdigits = decompose(k, p);
      out.comps[0] = add(out.comps[0], inner_product(kdigits, evk_i->second.v, p));
      out.comps[i] = add(out.comps[i], inner_product(kdigits, evk_i->second.u, p));
      ++pairs;
    }
  }

  // Conservative growth estimate: scaled tensor noise plus two gadget hops
  // (noise e_Γ here is Gaussian) per relinearized pair.
  long double relin = 3.0L * p.tau * p.N * p.B_H * p.gauss_bound;
  if (bfv) {
    out.noise_bound = static_cast<long double>(p.t) * p.N * (n + 1) *
                          (e1.noise_bound + e2.noise_bound + 1) +
                      pairs * relin;
  } else {
    constexpr long double kMsgEnvelope = 64.0L;  // |plaintext| ≤ 64 assumed
    out.noise_bound = p.N * (e1.noise_bound * e2.scale * kMsgEnvelope +
                             e2.noise_bound * e1.scale * kMsgEnvelope) +
                      pairs * relin;
  }
  detail::audit_noise(out, p);
  return out;
}

// -------------------------------------------------------------------------
// Decryption paths

namespace detail {

inline Plaintext decode(const Poly& m, Scheme scheme, double scale,
                        const Params& p) {
  Plaintext out;
  out.scheme = scheme;
  if (scheme == Scheme::BFV)
    out.ints = bfv_decode(m, p);
  else
    out.reals = ckks_decode(m, scale, p);
  return out;
}

}  // namespace detail

// ⟨(1, s_1..s_n), c̄⟩ then scheme decode.
inline Plaintext decrypt(const ExpandedCiphertext& e,
                         const std::map<int, SecretKey>& sks, const Params& p) {
  Poly m = e.comps[0];
  for (int i : e.ref_set) {
    auto it = sks.find(i);
    if (it == sks.end())
      throw std::invalid_argument("decrypt: missing secret key for party " +
                                  std::to_string(i));
    m = add(m, mul(e.comps[i], it->second.s, p.tables));
  }
  return detail::decode(m, e.scheme, e.scale, p);
}

// ν_i = c̄_i·s_i + e_i with smudging noise e_i ← D_{smudging_sigma}.
inline PartialDecryption part_dec(const ExpandedCiphertext& e, int party,
                                  const SecretKey& sk, const Params& p,
                                  XofRng& rng) {
  if (sk.party != party)
    throw std::invalid_argument("part_dec: key does not belong to party");
  bool referenced = false;
  for (int i : e.ref_set) referenced |= (i == party);
  if (!referenced)
    throw std::invalid_argument("part_dec: party not in the reference set");

  Poly nu = mul(e.comps[party], sk.s, p.tables);
  Poly smudge = Poly::zero(p.primes, p.N);
  i64 bound = static_cast<i64>(std::ceil(6.0 * p.smudging_sigma));
  for (std::size_t k = 0; k < p.N; ++k) {
    i64 v = rng.gaussian(p.smudging_sigma, bound);
    for (std::size_t i = 0; i < p.primes.size(); ++i)
      smudge.residues[i][k] = v >= 0 ? static_cast<u64>(v)
                                     : p.primes[i] - static_cast<u64>(-v);
  }
  return PartialDecryption{party, add(nu, smudge)};
}

// μ = c̄_0 + Σ ν_i, then scheme decode. Parts must cover the reference set
// exactly once.
inline Plaintext merge(const ExpandedCiphertext& e,
                       const std::vector<PartialDecryption>& parts,
                       const Params& p) {
  std::vector<int> seen;
  for (const auto& pd : parts) seen.push_back(pd.party);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw std::invalid_argument("merge: duplicate partial decryption");
  if (seen != e.ref_set)
    throw std::invalid_argument("merge: partial decryptions do not cover the reference set");

  Poly m = e.comps[0];
  for (const auto& pd : parts) m = add(m, pd.nu);
  return detail::decode(m, e.scheme, e.scale, p);
}

inline PartialDecryption cdks_part_dec(const ExpandedCiphertext& e, int party,
                                       const SecretKey& sk, const Params& p,
                                       XofRng& rng) {
  return part_dec(e, party, sk, p, rng);
}

inline Plaintext cdks_merge(const ExpandedCiphertext& e,
                            const std::vector<PartialDecryption>& parts,
                            const Params& p) {
  return merge(e, parts, p);
}

// -------------------------------------------------------------------------
// The observer's computation: decode(c_0^i + ν_i). Against the
// unmasked baseline this recovers party i's plaintext exactly (BFV); against
// the masked scheme it yields noise.
inline Plaintext attack_recover(const Poly& c0_i, const PartialDecryption& nu_i,
                                const Params& p, double scale = 1.0) {
  Poly m = add(c0_i, nu_i.nu);
  return detail::decode(m, p.scheme, p.scheme == Scheme::CKKS ? scale : 1.0, p);
}

}  // namespace smhe
