#pragma once

// Ring module: arithmetic over R_Q = Z_Q[x]/(x^N + 1) in RNS residue form,
// negacyclic NTT multiplication, parameter profiles, and the sampling
// distributions. All types are immutable values after construction; every
// operation is a pure function of (inputs, explicit RNG handle).

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smhe/crt.hpp"
#include "smhe/keccak.hpp"
#include "smhe/numt.hpp"
#include "smhe/rng.hpp"

namespace smhe {

enum class Form : std::uint8_t { Coeff = 0, Ntt = 1 };
enum class Scheme : std::uint8_t { BFV = 0, CKKS = 1 };

// ---------------------------------------------------------------------------
// NTT tables (one set per prime, fixed N)

struct NttTables {
  u64 q = 0;
  std::size_t n = 0;
  // psi powers in bit-reversed index order, for the in-place CT/GS butterflies.
  std::vector<u64> psi, psi_shoup;
  std::vector<u64> psi_inv, psi_inv_shoup;
  u64 n_inv = 0, n_inv_shoup = 0;
};

namespace detail {

inline std::size_t reverse_bits(std::size_t v, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) r |= ((v >> i) & 1) << (bits - 1 - i);
  return r;
}

}  // namespace detail

inline NttTables build_ntt_tables(u64 q, std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("transform size must be a power of two");
  if ((q - 1) % (2 * n) != 0)
    throw std::invalid_argument("prime is not NTT-friendly for this N");
  int log_n = 0;
  while ((std::size_t{1} << log_n) < n) ++log_n;

  NttTables t;
  t.q = q;
  t.n = n;
  u64 psi = find_primitive_root_2n(q, 2 * n);
  u64 psi_inv = inv_mod(psi, q);
  t.psi.resize(n);
  t.psi_inv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = detail::reverse_bits(i, log_n);
    t.psi[i] = pow_mod(psi, r, q);
    t.psi_inv[i] = pow_mod(psi_inv, r, q);
  }
  t.psi_shoup.resize(n);
  t.psi_inv_shoup.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.psi_shoup[i] = shoup_precompute(t.psi[i], q);
    t.psi_inv_shoup[i] = shoup_precompute(t.psi_inv[i], q);
  }
  t.n_inv = inv_mod(static_cast<u64>(n % q), q);
  t.n_inv_shoup = shoup_precompute(t.n_inv, q);
  return t;
}

namespace detail {

// Forward negacyclic NTT, Cooley-Tukey butterflies, natural -> bit-reversed.
inline void ntt_forward(std::vector<u64>& a, const NttTables& tb) {
  const u64 q = tb.q;
  std::size_t t = tb.n;
  for (std::size_t m = 1; m < tb.n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j1 = 2 * i * t;
      u64 s = tb.psi[m + i], ss = tb.psi_shoup[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        u64 u = a[j];
        u64 v = mul_mod_shoup(a[j + t], s, ss, q);
        a[j] = add_mod(u, v, q);
        a[j + t] = sub_mod(u, v, q);
      }
    }
  }
}

// Inverse negacyclic NTT, Gentleman-Sande butterflies, bit-reversed -> natural.
inline void ntt_inverse(std::vector<u64>& a, const NttTables& tb) {
  const u64 q = tb.q;
  std::size_t t = 1;
  for (std::size_t m = tb.n; m > 1; m >>= 1) {
    std::size_t j1 = 0;
    std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      u64 s = tb.psi_inv[h + i], ss = tb.psi_inv_shoup[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        u64 u = a[j], v = a[j + t];
        a[j] = add_mod(u, v, q);
        a[j + t] = mul_mod_shoup(sub_mod(u, v, q), s, ss, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = mul_mod_shoup(x, tb.n_inv, tb.n_inv_shoup, q);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Poly / PolyVec

struct Poly {
  std::vector<u64> primes;                  // prime list this element lives over
  std::vector<std::vector<u64>> residues;   // [prime index][coefficient]
  Form form = Form::Coeff;

  static Poly zero(std::span<const u64> primes, std::size_t n,
                   Form form = Form::Coeff) {
    Poly p;
    p.primes.assign(primes.begin(), primes.end());
    p.residues.assign(primes.size(), std::vector<u64>(n, 0));
    p.form = form;
    return p;
  }

  std::size_t n() const { return residues.empty() ? 0 : residues[0].size(); }

  bool is_zero() const {
    for (const auto& row : residues)
      for (u64 v : row)
        if (v != 0) return false;
    return true;
  }

  bool operator==(const Poly& o) const {
    return primes == o.primes && residues == o.residues && form == o.form;
  }
};

struct PolyVec {
  std::vector<Poly> entries;

  std::size_t size() const { return entries.size(); }
  Poly& operator[](std::size_t i) { return entries[i]; }
  const Poly& operator[](std::size_t i) const { return entries[i]; }
};

inline void require_compatible(const Poly& a, const Poly& b) {
  if (a.primes != b.primes)
    throw std::invalid_argument("poly arithmetic: prime list mismatch");
  if (a.form != b.form)
    throw std::invalid_argument("poly arithmetic: form mismatch");
  if (a.n() != b.n())
    throw std::invalid_argument("poly arithmetic: length mismatch");
}

inline Poly add(const Poly& a, const Poly& b) {
  require_compatible(a, b);
  Poly out = a;
  for (std::size_t i = 0; i < a.primes.size(); ++i) {
    const u64 q = a.primes[i];
    for (std::size_t k = 0; k < a.n(); ++k)
      out.residues[i][k] = add_mod(a.residues[i][k], b.residues[i][k], q);
  }
  return out;
}

inline Poly sub(const Poly& a, const Poly& b) {
  require_compatible(a, b);
  Poly out = a;
  for (std::size_t i = 0; i < a.primes.size(); ++i) {
    const u64 q = a.primes[i];
    for (std::size_t k = 0; k < a.n(); ++k)
      out.residues[i][k] = sub_mod(a.residues[i][k], b.residues[i][k], q);
  }
  return out;
}

inline Poly negate(const Poly& a) {
  Poly out = a;
  for (std::size_t i = 0; i < a.primes.size(); ++i)
    for (std::size_t k = 0; k < a.n(); ++k)
      out.residues[i][k] = neg_mod(a.residues[i][k], a.primes[i]);
  return out;
}

// Multiply by a constant given as one residue per prime. A constant is fixed
// by the transform, so this is form-agnostic.
inline Poly scalar_mul(const Poly& a, std::span<const u64> c) {
  if (c.size() != a.primes.size())
    throw std::invalid_argument("scalar_mul: residue count mismatch");
  Poly out = a;
  for (std::size_t i = 0; i < a.primes.size(); ++i) {
    const u64 q = a.primes[i];
    const u64 ci = c[i] % q;
    const u64 cs = shoup_precompute(ci, q);
    for (std::size_t k = 0; k < a.n(); ++k)
      out.residues[i][k] = mul_mod_shoup(a.residues[i][k], ci, cs, q);
  }
  return out;
}

inline void check_tables(const Poly& a, std::span<const NttTables> tabs) {
  if (tabs.size() != a.primes.size())
    throw std::invalid_argument("ntt: table count mismatch");
  for (std::size_t i = 0; i < tabs.size(); ++i)
    if (tabs[i].q != a.primes[i] || tabs[i].n != a.n())
      throw std::invalid_argument("ntt: tables built for different parameters");
}

inline Poly ntt(Poly a, std::span<const NttTables> tabs) {
  if (a.form != Form::Coeff) throw std::invalid_argument("ntt: expected Coeff form");
  check_tables(a, tabs);
  for (std::size_t i = 0; i < a.primes.size(); ++i)
    detail::ntt_forward(a.residues[i], tabs[i]);
  a.form = Form::Ntt;
  return a;
}

inline Poly intt(Poly a, std::span<const NttTables> tabs) {
  if (a.form != Form::Ntt) throw std::invalid_argument("intt: expected Ntt form");
  check_tables(a, tabs);
  for (std::size_t i = 0; i < a.primes.size(); ++i)
    detail::ntt_inverse(a.residues[i], tabs[i]);
  a.form = Form::Coeff;
  return a;
}

// Product in R_Q. Coeff inputs give a Coeff result; Ntt inputs stay pointwise
// in the transform domain.
inline Poly mul(const Poly& a, const Poly& b, std::span<const NttTables> tabs) {
  require_compatible(a, b);
  if (a.form == Form::Ntt) {
    Poly out = a;
    for (std::size_t i = 0; i < a.primes.size(); ++i) {
      const u64 q = a.primes[i];
      for (std::size_t k = 0; k < a.n(); ++k)
        out.residues[i][k] = mul_mod(a.residues[i][k], b.residues[i][k], q);
    }
    return out;
  }
  Poly fa = ntt(a, tabs);
  Poly fb = ntt(b, tabs);
  for (std::size_t i = 0; i < fa.primes.size(); ++i) {
    const u64 q = fa.primes[i];
    for (std::size_t k = 0; k < fa.n(); ++k)
      fa.residues[i][k] = mul_mod(fa.residues[i][k], fb.residues[i][k], q);
  }
  return intt(std::move(fa), tabs);
}

// ---------------------------------------------------------------------------
// Params and profiles

struct ParamsOverrides {
  std::optional<u64> t;
  std::optional<Scheme> scheme;
  std::optional<double> sigma;
  std::optional<double> smudging_sigma;
  std::optional<bool> chi_ternary;
  std::optional<double> ckks_scale;
};

struct Params {
  std::string profile;
  std::vector<std::uint8_t> seed;

  std::size_t N = 0;
  std::vector<u64> primes;       // main modulus chain, each ≡ 1 mod 2N
  std::vector<u64> aux_primes;   // widening basis for the exact BFV tensor
  u64 t = 0;                     // plaintext modulus (BFV)
  double sigma = 0.0;
  i64 gauss_bound = 0;           // ⌈6σ⌉ rejection bound
  std::size_t tau = 0;           // gadget dimension
  u64 gadget_base = 0;           // digit base B (power of two)
  u64 B_chi = 1;
  u64 B_H = 0;                   // ⌈B/2⌉ for balanced digits
  Scheme scheme = Scheme::BFV;
  double ckks_scale = 0.0;
  bool chi_ternary = false;
  double smudging_sigma = 0.0;   // partial-decryption noise width

  PolyVec crs;                   // a ∈ R_Q^tau, shared by all parties

  std::vector<NttTables> tables;      // main primes
  std::vector<NttTables> ext_tables;  // main ++ aux primes
  std::vector<u64> ext_primes;
  CrtBasis basis;      // main primes
  CrtBasis ext_basis;  // main ++ aux primes
  std::array<std::uint8_t, 32> digest{};

  int modulus_bits() const { return basis.bits(); }

  // Upper bound on decryptable noise: Q/(2t) for BFV, Q/4 for CKKS.
  long double noise_capacity() const {
    long double q = static_cast<long double>(basis.Q);
    return scheme == Scheme::BFV ? q / (2.0L * static_cast<long double>(t))
                                 : q / 4.0L;
  }

  std::span<const NttTables> main_tables() const { return tables; }

  std::span<const NttTables> tables_for(const Poly& p) const {
    if (p.primes == primes) return tables;
    if (p.primes == ext_primes) return ext_tables;
    throw std::invalid_argument("poly does not belong to this parameter set");
  }
};

inline const std::vector<std::string>& known_profiles() {
  static const std::vector<std::string> names = {"desk", "paper", "ppfl",
                                                 "test1024", "tiny"};
  return names;
}

namespace detail {

struct ProfileShape {
  std::size_t n;
  int prime_bits;
  int prime_count;
  u64 t;
  std::size_t tau;
  double sigma;
};

inline ProfileShape profile_shape(std::string_view profile) {
  if (profile == "desk") return {1u << 12, 50, 3, 65537, 8, 3.2};
  if (profile == "paper") return {1u << 14, 50, 3, 65537, 8, 3.2};
  if (profile == "ppfl") return {1u << 12, 50, 3, u64{1} << 40, 8, 3.2};
  if (profile == "test1024") return {1u << 10, 50, 3, 65537, 8, 3.2};
  if (profile == "tiny") return {1u << 8, 50, 1, u64{1} << 16, 4, 3.2};
  throw std::invalid_argument("unknown profile: " + std::string(profile));
}

inline void append_u64(std::vector<std::uint8_t>& buf, u64 v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline u64 double_bits(double d) {
  u64 v;
  static_assert(sizeof(v) == sizeof(d));
  __builtin_memcpy(&v, &d, sizeof(v));
  return v;
}

}  // namespace detail

// Deterministic CRS: tau uniform elements of R_Q squeezed from an XOF keyed by
// the deployment seed. Integer-only path, so the result is bitwise stable
// across platforms.
inline PolyVec derive_crs(std::span<const std::uint8_t> seed,
                          std::span<const u64> primes, std::size_t n,
                          std::size_t tau) {
  XofRng rng(seed, "crs");
  PolyVec v;
  for (std::size_t j = 0; j < tau; ++j) {
    Poly p = Poly::zero(primes, n);
    for (std::size_t i = 0; i < primes.size(); ++i)
      for (std::size_t k = 0; k < n; ++k)
        p.residues[i][k] = rng.uniform_below(primes[i]);
    v.entries.push_back(std::move(p));
  }
  return v;
}

inline std::array<std::uint8_t, 32> compute_params_digest(const Params& p) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), {'S', 'M', 'H', 'E', 'P', 'R', 'M'});
  detail::append_u64(buf, p.N);
  detail::append_u64(buf, p.primes.size());
  for (u64 q : p.primes) detail::append_u64(buf, q);
  detail::append_u64(buf, p.aux_primes.size());
  for (u64 q : p.aux_primes) detail::append_u64(buf, q);
  detail::append_u64(buf, p.t);
  detail::append_u64(buf, detail::double_bits(p.sigma));
  detail::append_u64(buf, static_cast<u64>(p.gauss_bound));
  detail::append_u64(buf, p.tau);
  detail::append_u64(buf, p.gadget_base);
  detail::append_u64(buf, p.B_chi);
  detail::append_u64(buf, p.B_H);
  buf.push_back(static_cast<std::uint8_t>(p.scheme));
  detail::append_u64(buf, detail::double_bits(p.ckks_scale));
  buf.push_back(p.chi_ternary ? 1 : 0);
  detail::append_u64(buf, detail::double_bits(p.smudging_sigma));
  detail::append_u64(buf, p.seed.size());
  buf.insert(buf.end(), p.seed.begin(), p.seed.end());
  return Shake128::digest32(buf);
}

// SMHE.Setup: derives the full parameter set, prime chains, NTT tables, CRT
// bases, and the CRS for a deployment from (seed, profile).
inline Params setup(std::span<const std::uint8_t> seed, std::string_view profile,
                    const ParamsOverrides& ov = {}) {
  if (seed.empty()) throw std::invalid_argument("setup: seed must be nonempty");
  detail::ProfileShape shape = detail::profile_shape(profile);

  Params p;
  p.profile = profile;
  p.seed.assign(seed.begin(), seed.end());
  p.N = shape.n;
  p.t = ov.t.value_or(shape.t);
  p.tau = shape.tau;
  p.sigma = ov.sigma.value_or(shape.sigma);
  p.gauss_bound = static_cast<i64>(std::ceil(6.0 * p.sigma));
  p.scheme = ov.scheme.value_or(Scheme::BFV);
  p.ckks_scale = ov.ckks_scale.value_or(0x1.0p40);
  p.chi_ternary = ov.chi_ternary.value_or(false);
  p.smudging_sigma = ov.smudging_sigma.value_or(p.sigma);
  p.B_chi = 1;

  const u64 two_n = 2 * static_cast<u64>(p.N);
  p.primes = find_ntt_primes(shape.prime_bits, shape.prime_count, two_n);
  p.basis = CrtBasis::make(p.primes);

  // Gadget base: B = 2^⌈bits(Q)/tau⌉, balanced digits bounded by B/2.
  int qbits = p.basis.bits();
  int log_b = (qbits + static_cast<int>(p.tau) - 1) / static_cast<int>(p.tau);
  p.gadget_base = u64{1} << log_b;
  p.B_H = p.gadget_base / 2;

  // Digit range audit: tau balanced digits must cover (-Q/2, Q/2].
  bigint cover = boost::multiprecision::pow(bigint(p.gadget_base), static_cast<unsigned>(p.tau));
  if (cover < p.basis.Q)
    throw std::runtime_error("setup: gadget base/tau cannot represent Q");

  // Budget audit: the modulus must clear the worst-case depth-1 noise for the
  // configured plaintext space (coarse but loud).
  if (p.scheme == Scheme::BFV && p.noise_capacity() < 4.0L * p.N * p.gauss_bound)
    throw std::runtime_error("setup: modulus too small for fresh noise at this t");

  // Widening basis: primes covering N·(Q/2)^2 so the BFV tensor is exact.
  int need_bits = qbits + static_cast<int>(std::bit_width(p.N)) + 2;
  int aux_count = (need_bits + shape.prime_bits - 2) / (shape.prime_bits - 1);
  p.aux_primes = find_ntt_primes(shape.prime_bits, aux_count, two_n, p.primes);

  p.ext_primes = p.primes;
  p.ext_primes.insert(p.ext_primes.end(), p.aux_primes.begin(), p.aux_primes.end());
  p.ext_basis = CrtBasis::make(p.ext_primes);

  for (u64 q : p.primes) p.tables.push_back(build_ntt_tables(q, p.N));
  for (u64 q : p.ext_primes) p.ext_tables.push_back(build_ntt_tables(q, p.N));

  p.crs = derive_crs(p.seed, p.primes, p.N, p.tau);
  p.digest = compute_params_digest(p);
  return p;
}

// ---------------------------------------------------------------------------
// Samplers (Coeff form, main prime basis)

inline Poly sample_uniform(XofRng& rng, const Params& p) {
  Poly out = Poly::zero(p.primes, p.N);
  for (std::size_t i = 0; i < p.primes.size(); ++i)
    for (std::size_t k = 0; k < p.N; ++k)
      out.residues[i][k] = rng.uniform_below(p.primes[i]);
  return out;
}

// Key/randomness distribution χ: binary {0,1} by default, ternary {-1,0,1}
// behind the config flag.
inline Poly sample_chi(XofRng& rng, const Params& p) {
  Poly out = Poly::zero(p.primes, p.N);
  for (std::size_t k = 0; k < p.N; ++k) {
    i64 v;
    if (p.chi_ternary) {
      u64 r = rng.next_u64() & 3;
      v = (r == 0) ? -1 : (r == 1) ? 1 : 0;
    } else {
      v = static_cast<i64>(rng.next_u64() & 1);
    }
    for (std::size_t i = 0; i < p.primes.size(); ++i)
      out.residues[i][k] = v >= 0 ? static_cast<u64>(v)
                                  : p.primes[i] - static_cast<u64>(-v);
  }
  return out;
}

inline Poly sample_gauss(XofRng& rng, const Params& p) {
  Poly out = Poly::zero(p.primes, p.N);
  for (std::size_t k = 0; k < p.N; ++k) {
    i64 v = rng.gaussian(p.sigma, p.gauss_bound);
    for (std::size_t i = 0; i < p.primes.size(); ++i)
      out.residues[i][k] = v >= 0 ? static_cast<u64>(v)
                                  : p.primes[i] - static_cast<u64>(-v);
  }
  return out;
}

inline PolyVec sample_uniform_vec(XofRng& rng, const Params& p) {
  PolyVec v;
  for (std::size_t j = 0; j < p.tau; ++j) v.entries.push_back(sample_uniform(rng, p));
  return v;
}

inline PolyVec sample_gauss_vec(XofRng& rng, const Params& p) {
  PolyVec v;
  for (std::size_t j = 0; j < p.tau; ++j) v.entries.push_back(sample_gauss(rng, p));
  return v;
}

// ---------------------------------------------------------------------------
// Centered-norm measurement (test/audit path; Z_Q read as (-Q/2, Q/2])

inline std::vector<bigint> lift_centered(const Poly& p, const CrtBasis& basis) {
  if (p.form != Form::Coeff)
    throw std::invalid_argument("lift_centered: expected Coeff form");
  if (p.primes != basis.primes)
    throw std::invalid_argument("lift_centered: poly does not live over this basis");
  std::vector<bigint> out(p.n());
  std::vector<u64> res(p.primes.size());
  for (std::size_t k = 0; k < p.n(); ++k) {
    for (std::size_t i = 0; i < p.primes.size(); ++i) res[i] = p.residues[i][k];
    out[k] = basis.lift_centered(res);
  }
  return out;
}

inline bigint inf_norm(const Poly& p, const CrtBasis& basis) {
  bigint best = 0;
  for (bigint& x : lift_centered(p, basis)) {
    if (x < 0) x = -x;
    if (x > best) best = x;
  }
  return best;
}

inline Poly poly_from_centered(std::span<const bigint> coeffs,
                               std::span<const u64> primes) {
  Poly out = Poly::zero(primes, coeffs.size());
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      out.residues[i][k] = reduce_signed(coeffs[k], primes[i]);
  return out;
}

}  // namespace smhe
