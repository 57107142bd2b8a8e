#pragma once

// Deterministic binary wire format. Every object starts with a fixed header
// (magic "SMH1", version, object kind, 32-byte params digest); the digest
// binds each object to the parameter set it was produced under, so loading
// against different params is a hard error, as are unknown versions, bad
// magic, and truncation. All words are little-endian. Polynomials are encoded
// per prime, coefficients in index order, 8 bytes each (Coeff form only).

#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "smhe/evaluator.hpp"

namespace smhe {

enum class ObjKind : std::uint8_t {
  params = 0,
  sk = 1,
  pk = 2,
  evk = 3,
  fresh_ct = 4,
  mask = 5,
  expanded_ct = 6,
  partdec = 7,
};

inline constexpr std::uint16_t kWireVersion = 1;
inline constexpr char kWireMagic[4] = {'S', 'M', 'H', '1'};
inline constexpr std::size_t kWireHeaderBytes = 4 + 2 + 1 + 32;

class WireError : public std::runtime_error {
 public:
  explicit WireError(const std::string& what) : std::runtime_error(what) {}
};

namespace wire {

struct Writer {
  std::vector<std::uint8_t> buf;

  void u8(std::uint8_t v) { buf.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    u64(v);
  }
  void bytes(const std::uint8_t* p, std::size_t n) { buf.insert(buf.end(), p, p + n); }
};

struct Reader {
  const std::uint8_t* p;
  std::size_t len;
  std::size_t pos = 0;

  explicit Reader(std::span<const std::uint8_t> b) : p(b.data()), len(b.size()) {}

  void need(std::size_t n) const {
    if (pos + n > len) throw WireError("wire: truncated input");
  }
  std::uint8_t u8() {
    need(1);
    return p[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(p[pos++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[pos++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[pos++]) << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  void finish() const {
    if (pos != len) throw WireError("wire: trailing bytes");
  }
};

inline void put_header(Writer& w, ObjKind kind,
                       const std::array<std::uint8_t, 32>& digest) {
  w.bytes(reinterpret_cast<const std::uint8_t*>(kWireMagic), 4);
  w.u16(kWireVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.bytes(digest.data(), digest.size());
}

inline void take_header(Reader& r, ObjKind kind,
                        const std::array<std::uint8_t, 32>& digest) {
  r.need(kWireHeaderBytes);
  if (std::memcmp(r.p + r.pos, kWireMagic, 4) != 0)
    throw WireError("wire: bad magic");
  r.pos += 4;
  std::uint16_t version = r.u16();
  if (version != kWireVersion)
    throw WireError("wire: unsupported version " + std::to_string(version));
  std::uint8_t k = r.u8();
  if (k != static_cast<std::uint8_t>(kind))
    throw WireError("wire: object kind mismatch");
  if (std::memcmp(r.p + r.pos, digest.data(), 32) != 0)
    throw WireError("wire: params digest mismatch");
  r.pos += 32;
}

inline void put_poly(Writer& w, const Poly& poly, const Params& p) {
  if (poly.form != Form::Coeff)
    throw WireError("wire: only Coeff-form polynomials serialize");
  if (poly.primes != p.primes || poly.n() != p.N)
    throw WireError("wire: polynomial does not match params");
  for (const auto& row : poly.residues)
    for (u64 v : row) w.u64(v);
}

inline Poly take_poly(Reader& r, const Params& p) {
  Poly out = Poly::zero(p.primes, p.N);
  for (std::size_t i = 0; i < p.primes.size(); ++i)
    for (std::size_t k = 0; k < p.N; ++k) {
      u64 v = r.u64();
      if (v >= p.primes[i]) throw WireError("wire: residue out of range");
      out.residues[i][k] = v;
    }
  return out;
}

}  // namespace wire

inline std::size_t poly_wire_bytes(const Params& p) {
  return p.primes.size() * p.N * 8;
}

// -------------------------------------------------------------------------
// Params

inline std::vector<std::uint8_t> serialize(const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::params, p.digest);
  w.u64(p.N);
  w.u32(static_cast<std::uint32_t>(p.primes.size()));
  for (u64 q : p.primes) w.u64(q);
  w.u32(static_cast<std::uint32_t>(p.aux_primes.size()));
  for (u64 q : p.aux_primes) w.u64(q);
  w.u64(p.t);
  w.f64(p.sigma);
  w.u64(static_cast<u64>(p.gauss_bound));
  w.u64(p.tau);
  w.u64(p.gadget_base);
  w.u64(p.B_chi);
  w.u64(p.B_H);
  w.u8(static_cast<std::uint8_t>(p.scheme));
  w.f64(p.ckks_scale);
  w.u8(p.chi_ternary ? 1 : 0);
  w.f64(p.smudging_sigma);
  w.u32(static_cast<std::uint32_t>(p.profile.size()));
  w.bytes(reinterpret_cast<const std::uint8_t*>(p.profile.data()), p.profile.size());
  w.u32(static_cast<std::uint32_t>(p.seed.size()));
  w.bytes(p.seed.data(), p.seed.size());
  return std::move(w.buf);
}

// Re-derives the parameter set from (seed, profile, overrides) and demands
// that every stored field and the header digest agree with the derivation.
inline Params load_params(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  r.need(kWireHeaderBytes);
  if (std::memcmp(r.p, kWireMagic, 4) != 0) throw WireError("wire: bad magic");
  r.pos += 4;
  std::uint16_t version = r.u16();
  if (version != kWireVersion)
    throw WireError("wire: unsupported version " + std::to_string(version));
  if (r.u8() != static_cast<std::uint8_t>(ObjKind::params))
    throw WireError("wire: object kind mismatch");
  std::array<std::uint8_t, 32> digest;
  std::memcpy(digest.data(), r.p + r.pos, 32);
  r.pos += 32;

  u64 n = r.u64();
  std::uint32_t nprimes = r.u32();
  std::vector<u64> primes(nprimes);
  for (auto& q : primes) q = r.u64();
  std::uint32_t naux = r.u32();
  std::vector<u64> aux(naux);
  for (auto& q : aux) q = r.u64();
  u64 t = r.u64();
  double sigma = r.f64();
  u64 gauss_bound = r.u64();
  u64 tau = r.u64();
  u64 base = r.u64();
  u64 b_chi = r.u64();
  u64 b_h = r.u64();
  auto scheme = static_cast<Scheme>(r.u8());
  double ckks_scale = r.f64();
  bool chi_ternary = r.u8() != 0;
  double smudging = r.f64();
  std::uint32_t plen = r.u32();
  r.need(plen);
  std::string profile(reinterpret_cast<const char*>(r.p + r.pos), plen);
  r.pos += plen;
  std::uint32_t slen = r.u32();
  r.need(slen);
  std::vector<std::uint8_t> seed(r.p + r.pos, r.p + r.pos + slen);
  r.pos += slen;
  r.finish();

  ParamsOverrides ov;
  ov.t = t;
  ov.scheme = scheme;
  ov.sigma = sigma;
  ov.smudging_sigma = smudging;
  ov.chi_ternary = chi_ternary;
  ov.ckks_scale = ckks_scale;
  Params p = setup(seed, profile, ov);
  if (p.N != n || p.primes != primes || p.aux_primes != aux ||
      p.gauss_bound != static_cast<i64>(gauss_bound) || p.tau != tau ||
      p.gadget_base != base || p.B_chi != b_chi || p.B_H != b_h ||
      p.digest != digest)
    throw WireError("wire: params digest mismatch");
  return p;
}

// -------------------------------------------------------------------------
// Keys

inline std::vector<std::uint8_t> serialize(const SecretKey& sk, const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::sk, p.digest);
  w.u32(static_cast<std::uint32_t>(sk.party));
  wire::put_poly(w, sk.s, p);
  return std::move(w.buf);
}

inline SecretKey load_sk(std::span<const std::uint8_t> bytes, const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::sk, p.digest);
  SecretKey sk;
  sk.party = static_cast<int>(r.u32());
  sk.s = wire::take_poly(r, p);
  r.finish();
  return sk;
}

inline std::vector<std::uint8_t> serialize(const PublicKey& pk, const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::pk, p.digest);
  w.u32(static_cast<std::uint32_t>(pk.party));
  wire::put_poly(w, pk.b, p);
  wire::put_poly(w, pk.a, p);
  return std::move(w.buf);
}

inline PublicKey load_pk(std::span<const std::uint8_t> bytes, const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::pk, p.digest);
  PublicKey pk;
  pk.party = static_cast<int>(r.u32());
  pk.b = wire::take_poly(r, p);
  pk.a = wire::take_poly(r, p);
  r.finish();
  return pk;
}

inline std::vector<std::uint8_t> serialize(const EvalKey& evk, const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::evk, p.digest);
  w.u32(static_cast<std::uint32_t>(evk.party));
  for (const PolyVec* v : {&evk.b, &evk.d, &evk.u, &evk.v}) {
    if (v->size() != p.tau) throw WireError("wire: evk vector length != tau");
    for (const Poly& poly : v->entries) wire::put_poly(w, poly, p);
  }
  return std::move(w.buf);
}

inline EvalKey load_evk(std::span<const std::uint8_t> bytes, const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::evk, p.digest);
  EvalKey evk;
  evk.party = static_cast<int>(r.u32());
  for (PolyVec* v : {&evk.b, &evk.d, &evk.u, &evk.v})
    for (std::size_t j = 0; j < p.tau; ++j)
      v->entries.push_back(wire::take_poly(r, p));
  r.finish();
  return evk;
}

// -------------------------------------------------------------------------
// Ciphertext objects

inline std::vector<std::uint8_t> serialize(const FreshCiphertext& ct,
                                           const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::fresh_ct, p.digest);
  w.u32(static_cast<std::uint32_t>(ct.owner));
  w.u8(static_cast<std::uint8_t>(ct.scheme));
  w.f64(ct.scale);
  w.f64(static_cast<double>(ct.noise_bound));
  wire::put_poly(w, ct.c0, p);
  wire::put_poly(w, ct.c1, p);
  return std::move(w.buf);
}

inline FreshCiphertext load_fresh(std::span<const std::uint8_t> bytes,
                                  const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::fresh_ct, p.digest);
  FreshCiphertext ct;
  ct.owner = static_cast<int>(r.u32());
  ct.scheme = static_cast<Scheme>(r.u8());
  ct.scale = r.f64();
  ct.noise_bound = r.f64();
  ct.c0 = wire::take_poly(r, p);
  ct.c1 = wire::take_poly(r, p);
  r.finish();
  return ct;
}

inline std::vector<std::uint8_t> serialize(const MaskMaterial& m, const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::mask, p.digest);
  w.u32(static_cast<std::uint32_t>(m.owner));
  wire::put_poly(w, m.z0, p);
  wire::put_poly(w, m.z1, p);
  if (m.gamma.varsigma0.size() != p.tau || m.gamma.varsigma1.size() != p.tau)
    throw WireError("wire: gadget ciphertext length != tau");
  for (const Poly& poly : m.gamma.varsigma0.entries) wire::put_poly(w, poly, p);
  for (const Poly& poly : m.gamma.varsigma1.entries) wire::put_poly(w, poly, p);
  return std::move(w.buf);
}

inline MaskMaterial load_mask(std::span<const std::uint8_t> bytes, const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::mask, p.digest);
  MaskMaterial m;
  m.owner = static_cast<int>(r.u32());
  m.z0 = wire::take_poly(r, p);
  m.z1 = wire::take_poly(r, p);
  for (std::size_t j = 0; j < p.tau; ++j)
    m.gamma.varsigma0.entries.push_back(wire::take_poly(r, p));
  for (std::size_t j = 0; j < p.tau; ++j)
    m.gamma.varsigma1.entries.push_back(wire::take_poly(r, p));
  r.finish();
  return m;
}

// Reference sets ride in a fixed-width bitmask so the payload is exactly
// (n+1) polynomial blocks plus a constant metadata block (size-linearity).
inline std::vector<std::uint8_t> serialize(const ExpandedCiphertext& e,
                                           const Params& p) {
  if (e.n > 64) throw WireError("wire: reference bitmask supports n <= 64");
  wire::Writer w;
  wire::put_header(w, ObjKind::expanded_ct, p.digest);
  w.u32(static_cast<std::uint32_t>(e.n));
  std::uint64_t mask = 0;
  for (int i : e.ref_set) mask |= std::uint64_t{1} << (i - 1);
  w.u64(mask);
  w.u8(e.masked ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(e.scheme));
  w.f64(e.scale);
  w.f64(static_cast<double>(e.noise_bound));
  for (const Poly& poly : e.comps) wire::put_poly(w, poly, p);
  return std::move(w.buf);
}

inline ExpandedCiphertext load_expanded(std::span<const std::uint8_t> bytes,
                                        const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::expanded_ct, p.digest);
  ExpandedCiphertext e;
  e.n = static_cast<int>(r.u32());
  std::uint64_t mask = r.u64();
  for (int i = 1; i <= 64; ++i)
    if (mask & (std::uint64_t{1} << (i - 1))) e.ref_set.push_back(i);
  e.masked = r.u8() != 0;
  e.scheme = static_cast<Scheme>(r.u8());
  e.scale = r.f64();
  e.noise_bound = r.f64();
  for (int i = 0; i <= e.n; ++i) e.comps.push_back(wire::take_poly(r, p));
  r.finish();
  for (int i : e.ref_set)
    if (i > e.n) throw WireError("wire: reference set exceeds deployment size");
  return e;
}

inline std::vector<std::uint8_t> serialize(const PartialDecryption& pd,
                                           const Params& p) {
  wire::Writer w;
  wire::put_header(w, ObjKind::partdec, p.digest);
  w.u32(static_cast<std::uint32_t>(pd.party));
  wire::put_poly(w, pd.nu, p);
  return std::move(w.buf);
}

inline PartialDecryption load_partdec(std::span<const std::uint8_t> bytes,
                                      const Params& p) {
  wire::Reader r(bytes);
  wire::take_header(r, ObjKind::partdec, p.digest);
  PartialDecryption pd;
  pd.party = static_cast<int>(r.u32());
  pd.nu = wire::take_poly(r, p);
  r.finish();
  return pd;
}

// Kind sniffing for CLI inputs that accept several object types.
inline ObjKind peek_kind(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) throw WireError("wire: truncated input");
  if (std::memcmp(bytes.data(), kWireMagic, 4) != 0)
    throw WireError("wire: bad magic");
  std::uint8_t k = bytes[6];
  if (k > static_cast<std::uint8_t>(ObjKind::partdec))
    throw WireError("wire: unknown object kind");
  return static_cast<ObjKind>(k);
}

// -------------------------------------------------------------------------
// Files (atomic writes: temp then rename) and flat key=value configs

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_file_atomic(const std::filesystem::path& path,
                              std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& text) {
  write_file_atomic(path,
                    std::span<const std::uint8_t>(
                        reinterpret_cast<const std::uint8_t*>(text.data()),
                        text.size()));
}

// key=value lines; '#' starts a comment; blank lines ignored.
inline std::map<std::string, std::string> parse_kv_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto strip = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value, got '" + line + "'");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config: empty key");
    kv[key] = value;
  }
  return kv;
}

}  // namespace smhe
