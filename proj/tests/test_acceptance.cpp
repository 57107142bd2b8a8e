// Acceptance gate: the ten release criteria, each printing one
//   [ACCEPTANCE] criterion K: PASS/FAIL [elapsed/budget] detail
// line. Every criterion is checked against an oracle that is independent of
// the code path under test (schoolbook products, plaintext sums, analytic
// noise budgets), at the deployment-scale parameter profiles.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "smhe/ppfl.hpp"
#include "smhe/smhe.hpp"

namespace smhe {
namespace {

using u128 = unsigned __int128;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Prints the criterion verdict line and returns the combined pass flag so the
// caller can hand it to gtest. The line is emitted on success and failure
// alike; it is the machine-readable summary of the run.
bool emit(int id, bool ok, double secs, double budget_s,
          const std::string& detail) {
  const bool pass = ok && secs < budget_s;
  std::printf("[ACCEPTANCE] criterion %d: %s [%.1fs/%.0fs] %s\n", id,
              pass ? "PASS" : "FAIL", secs, budget_s, detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared fixtures. The desk deployment (N=4096) is what most criteria run at;
// the N=1024 ring doubles as the arithmetic-oracle playground.

struct Deployment {
  Params p;
  std::map<int, PublicKey> pks;
  std::map<int, SecretKey> sks;
  std::map<int, EvalKey> evks;
  std::vector<KeyTriple> kts;  // parties 1..n at kts[party-1]
};

Deployment make_deployment(const Params& p, int n, std::string_view label) {
  Deployment d;
  d.p = p;
  XofRng rng(p.seed, std::string("acceptance/") + std::string(label));
  for (int i = 1; i <= n; ++i) {
    XofRng kr = rng.fork("party/" + std::to_string(i));
    KeyTriple kt = keygen(d.p, kr, i);
    d.pks.emplace(i, kt.pk);
    d.sks.emplace(i, kt.sk);
    d.evks.emplace(i, kt.evk);
    d.kts.push_back(std::move(kt));
  }
  return d;
}

const Deployment& desk() {
  static const Deployment d = [] {
    Params p = setup(parse_hex("ac5e97a1"), "desk");
    return make_deployment(p, 8, "desk");
  }();
  return d;
}

const Params& ring1024() {
  static const Params p = setup(parse_hex("0ac1e5"), "test1024");
  return p;
}

std::vector<u64> random_rt(XofRng& rng, const Params& p) {
  std::vector<u64> v(p.N);
  for (u64& x : v) x = rng.uniform_below(p.t);
  return v;
}

Plaintext bfv_pt(std::vector<u64> ints) {
  Plaintext pt;
  pt.scheme = Scheme::BFV;
  pt.ints = std::move(ints);
  return pt;
}

std::vector<u64> sum_mod_t(const std::vector<std::vector<u64>>& all, u64 t) {
  std::vector<u64> out(all.at(0).size(), 0);
  for (const auto& v : all)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (out[k] + v[k]) % t;
  return out;
}

// Negacyclic schoolbook in Z_t for expected BFV products. Accumulates the
// positive and the wrapped (negated) halves separately in 128-bit integers;
// with t < 2^17 and N = 4096 the raw sums stay far below 2^128.
std::vector<u64> negacyclic_product_mod_t(const std::vector<u64>& a,
                                          const std::vector<u64>& b, u64 t) {
  const std::size_t n = a.size();
  std::vector<u64> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    u128 pos = 0, neg = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t y = x <= k ? k - x : k + n - x;
      const u128 term = static_cast<u128>(a[x]) * b[y];
      if (x <= k)
        pos += term;
      else
        neg += term;
    }
    const u64 p_mod = static_cast<u64>(pos % t);
    const u64 n_mod = static_cast<u64>(neg % t);
    out[k] = (p_mod + t - n_mod) % t;
  }
  return out;
}

// Builds a masked two-party sum of the given plaintext vectors (parties 1 and
// 2 of the deployment) at layout size n=2.
ExpandedCiphertext masked_pair_sum(const Deployment& d,
                                   const std::vector<u64>& v1,
                                   const std::vector<u64>& v2, XofRng& rng) {
  CiphertextBundle b1 = encrypt(bfv_pt(v1), d.kts[0], d.p, rng);
  CiphertextBundle b2 = encrypt(bfv_pt(v2), d.kts[1], d.p, rng);
  return add_two(expand(b1, 2), expand(b2, 2), d.kts[0].pk, d.kts[1].pk,
                 b1.mask, b2.mask, d.p);
}

// ---------------------------------------------------------------------------
// 1. Ring arithmetic against schoolbook negacyclic oracles. Every product is
// checked per prime with exact 128-bit schoolbook accumulation; a subset is
// additionally checked against a full-modulus arbitrary-precision schoolbook
// after CRT lifting, tying the RNS representation to Z_Q itself.

Poly schoolbook_rns(const Poly& a, const Poly& b, const Params& p) {
  const std::size_t n = a.n();
  Poly out = Poly::zero(p.primes, n);
  for (std::size_t i = 0; i < p.primes.size(); ++i) {
    const u64 q = p.primes[i];
    for (std::size_t k = 0; k < n; ++k) {
      u128 pos = 0, neg = 0;
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t y = x <= k ? k - x : k + n - x;
        const u128 term = static_cast<u128>(a.residues[i][x]) * b.residues[i][y];
        if (x <= k)
          pos += term;
        else
          neg += term;
      }
      out.residues[i][k] =
          (static_cast<u64>(pos % q) + q - static_cast<u64>(neg % q)) % q;
    }
  }
  return out;
}

std::vector<bigint> lift_plain(const Poly& a, const CrtBasis& basis) {
  std::vector<bigint> out(a.n());
  std::vector<u64> res(a.residues.size());
  for (std::size_t k = 0; k < a.n(); ++k) {
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = a.residues[i][k];
    out[k] = basis.lift(res);
  }
  return out;
}

bool matches_bigint_schoolbook(const Poly& a, const Poly& b, const Poly& fast,
                               const Params& p) {
  const std::vector<bigint> A = lift_plain(a, p.basis);
  const std::vector<bigint> B = lift_plain(b, p.basis);
  const std::vector<bigint> F = lift_plain(fast, p.basis);
  const bigint& Q = p.basis.Q;
  const std::size_t n = A.size();
  for (std::size_t k = 0; k < n; ++k) {
    bigint acc = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t y = x <= k ? k - x : k + n - x;
      if (x <= k)
        acc += A[x] * B[y];
      else
        acc -= A[x] * B[y];
    }
    acc %= Q;
    if (acc < 0) acc += Q;
    if (acc != F[k]) return false;
  }
  return true;
}

TEST(Acceptance, C01_RingProductsMatchSchoolbookOracles) {
  const auto t0 = std::chrono::steady_clock::now();
  const Params& p = ring1024();
  XofRng rng(parse_hex("c1a0"), "acceptance/ring-products");

  int rns_ok = 0, bigint_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Poly a = sample_uniform(rng, p);
    Poly b = sample_uniform(rng, p);
    Poly fast = mul(a, b, p.tables);
    if (fast == schoolbook_rns(a, b, p)) ++rns_ok;
    if (matches_bigint_schoolbook(a, b, fast, p)) ++bigint_ok;
  }

  const bool ok = rns_ok == 200 && bigint_ok == 200;
  const std::string detail =
      fmt("N=1024: %d/200 match the per-prime 128-bit schoolbook, %d/200 "
          "match the full-modulus bigint schoolbook",
          rns_ok, bigint_ok);
  EXPECT_TRUE(emit(1, ok, seconds_since(t0), 30.0, detail));
}

// ---------------------------------------------------------------------------
// 2. Gadget decomposition: exact reconstruction and the balanced digit bound.

TEST(Acceptance, C02_GadgetRoundtripAndDigitBounds) {
  const auto t0 = std::chrono::steady_clock::now();
  const Params& p = ring1024();
  XofRng rng(parse_hex("9ad6"), "acceptance/gadget");

  int exact = 0;
  bool digits_ok = true;
  const u64 q0 = p.primes[0];
  for (int trial = 0; trial < 1000; ++trial) {
    Poly x = sample_uniform(rng, p);
    PolyVec digits = decompose(x, p);
    if (recompose(digits, p) == x) ++exact;
    for (std::size_t j = 0; j < digits.size() && digits_ok; ++j) {
      for (std::size_t k = 0; k < p.N && digits_ok; ++k) {
        const u64 v0 = digits[j].residues[0][k];
        const i64 c = v0 > q0 / 2 ? -static_cast<i64>(q0 - v0)
                                  : static_cast<i64>(v0);
        if (c > static_cast<i64>(p.B_H) || c < -static_cast<i64>(p.B_H))
          digits_ok = false;
        for (std::size_t i = 1; i < p.primes.size() && digits_ok; ++i) {
          const u64 expect = c >= 0 ? static_cast<u64>(c)
                                    : p.primes[i] - static_cast<u64>(-c);
          if (digits[j].residues[i][k] != expect) digits_ok = false;
        }
      }
    }
  }

  const bool ok = exact == 1000 && digits_ok;
  const std::string detail =
      fmt("%d/1000 exact recompose(decompose(x)); digits %s bounded by B_H=%llu",
          exact, digits_ok ? "all" : "NOT",
          static_cast<unsigned long long>(p.B_H));
  EXPECT_TRUE(emit(2, ok, seconds_since(t0), 10.0, detail));
}

// ---------------------------------------------------------------------------
// 3. Masking cancellation bound at desk scale: for fresh key pairs the joint
// residue <sk,cx> + <sk',cz> must stay below (2N^2+4N)B_chi + tau*N*B_chi*B_H.

TEST(Acceptance, C03_MaskCancellationWithinAnalyticBound) {
  const auto t0 = std::chrono::steady_clock::now();
  const Params& p = desk().p;
  XofRng rng(parse_hex("3a5cde"), "acceptance/mask-cancel");

  const bigint bound = (bigint(2) * p.N * p.N + bigint(4) * p.N) * p.B_chi +
                       bigint(p.tau) * p.N * p.B_chi * p.B_H;
  int within = 0;
  long double max_ratio = 0.0L;
  for (int trial = 0; trial < 100; ++trial) {
    XofRng tr = rng.fork("trial/" + std::to_string(trial));
    KeyTriple k1 = keygen(p, tr, 1);
    KeyTriple k2 = keygen(p, tr, 2);
    MaskMaterial m1 = mask_enc(k1.pk, k1.sk, p, tr);
    MaskCorrection cx1 = extend(m1.gamma, k1.pk, k2.pk, p);

    // <sk_1, cx_1> ~ r_1*(b_2 - b_1) while <sk_2, cz_1> ~ r_1*(b_1 - b_2):
    // everything but the gadget and encryption noise cancels.
    Poly residue = add(add(cx1.x0, mul(cx1.x1, k1.sk.s, p.tables)),
                       add(m1.z0, mul(m1.z1, k2.sk.s, p.tables)));
    const bigint lhs = inf_norm(residue, p.basis);
    if (lhs <= bound) ++within;
    max_ratio = std::max(max_ratio, lhs.convert_to<long double>() /
                                        bound.convert_to<long double>());
  }

  const bool ok = within == 100;
  const std::string detail =
      fmt("desk N=%zu: %d/100 key-pair residues within bound; max "
          "|residue|/bound = %.5Lf",
          p.N, within, max_ratio);
  EXPECT_TRUE(emit(3, ok, seconds_since(t0), 120.0, detail));
}

// ---------------------------------------------------------------------------
// 4. BFV exactness: encrypt/expand/decrypt roundtrips and two-party masked
// sums must be bit-exact over full-range random plaintexts.

TEST(Acceptance, C04_BfvRoundtripsAndTwoPartySumsExact) {
  const auto t0 = std::chrono::steady_clock::now();
  const Deployment& d = desk();
  XofRng rng(parse_hex("b4"), "acceptance/bfv-exact");

  int roundtrips = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<u64> mu = random_rt(rng, d.p);
    CiphertextBundle b = encrypt(bfv_pt(mu), d.kts[0], d.p, rng);
    Plaintext back = decrypt(expand(b, 2), d.sks, d.p);
    if (back.ints == mu) ++roundtrips;
  }

  int sums = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<u64> mu1 = random_rt(rng, d.p);
    std::vector<u64> mu2 = random_rt(rng, d.p);
    ExpandedCiphertext e = masked_pair_sum(d, mu1, mu2, rng);
    Plaintext back = decrypt(e, d.sks, d.p);
    if (back.ints == sum_mod_t({mu1, mu2}, d.p.t)) ++sums;
  }

  const bool ok = roundtrips == 100 && sums == 100;
  const std::string detail = fmt(
      "desk: %d/100 exact encrypt-expand-decrypt roundtrips; %d/100 exact "
      "two-party masked sums",
      roundtrips, sums);
  EXPECT_TRUE(emit(4, ok, seconds_since(t0), 120.0, detail));
}

// ---------------------------------------------------------------------------
// 5. Chained aggregation: ring-ordered masked additions of m parties decrypt
// exactly and the measured raw noise stays under the cubic analytic budget
//   (3m^3 + 6m^2 + m)*unit + 2*tau*m^2*unit*B_H,
// priced in units of the widest per-sample error (unit = max(B_chi, ceil(6*sigma))).

TEST(Acceptance, C05_ChainedAggregationNoiseWithinBudget) {
  const auto t0 = std::chrono::steady_clock::now();
  const Deployment& d = desk();
  const Params& p = d.p;
  XofRng rng(parse_hex("05"), "acceptance/chained");

  const long double unit =
      std::max<long double>(static_cast<long double>(p.B_chi),
                            static_cast<long double>(p.gauss_bound));
  bool all_exact = true, all_within = true;
  long double worst_ratio = 0.0L;
  std::string per_m;

  for (int m : {2, 4, 8}) {
    std::vector<std::vector<u64>> values;
    std::vector<CiphertextBundle> bundles;
    std::map<int, MaskMaterial> masks;
    for (int i = 1; i <= m; ++i) {
      values.push_back(random_rt(rng, p));
      bundles.push_back(encrypt(bfv_pt(values.back()), d.kts[i - 1], p, rng));
      masks.emplace(i, bundles.back().mask);
    }

    // Ring-ordered chaining: the wrap pair (1, m) first, then each successive
    // party masked against its predecessor.
    ExpandedCiphertext acc =
        add(expand(bundles[0], m), zero_ciphertext(p, m), d.pks, masks, p,
            std::vector<int>{1}, std::vector<int>{m});
    for (int i = 2; i <= m; ++i)
      acc = add(acc, expand(bundles[i - 1], m), d.pks, masks, p,
                std::vector<int>{i - 1}, std::vector<int>{i});

    const std::vector<u64> expected = sum_mod_t(values, p.t);
    if (decrypt(acc, d.sks, p).ints != expected) all_exact = false;

    // Raw decryption noise: <(1, s_1..s_m), c> minus the exact encoding.
    Poly raw = acc.comps[0];
    for (int i : acc.ref_set) raw = add(raw, mul(acc.comps[i], d.sks.at(i).s, p.tables));
    const bigint noise = inf_norm(sub(raw, bfv_encode(expected, p)), p.basis);

    const long double budget =
        (3.0L * m * m * m + 6.0L * m * m + m) * unit +
        2.0L * p.tau * m * m * unit * p.B_H;
    const long double ratio = noise.convert_to<long double>() / budget;
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 1.0L) all_within = false;
    per_m += fmt("%sm=%d ratio %.4Lf", per_m.empty() ? "" : ", ", m, ratio);
  }

  const bool ok = all_exact && all_within;
  const std::string detail =
      fmt("desk: sums exact for m=2,4,8; noise/budget %s (worst %.4Lf)",
          per_m.c_str(), worst_ratio);
  EXPECT_TRUE(emit(5, ok, seconds_since(t0), 300.0, detail));
}

// ---------------------------------------------------------------------------
// 6. Depth-1 multiplication over every operand pairing, against the Z_t
// negacyclic schoolbook product.

TEST(Acceptance, C06_DepthOneProductsExact) {
  const auto t0 = std::chrono::steady_clock::now();
  const Deployment& d = desk();
  const Params& p = d.p;
  XofRng rng(parse_hex("06"), "acceptance/products");

  int fresh_fresh = 0, masked_fresh = 0, masked_masked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // fresh-expanded x fresh-expanded, owners 1 and 2
    {
      std::vector<u64> a = random_rt(rng, p), b = random_rt(rng, p);
      ExpandedCiphertext ea =
          cdks_expand(cdks_encrypt(bfv_pt(a), d.kts[0].pk, p, rng), 1, 2);
      ExpandedCiphertext eb =
          cdks_expand(cdks_encrypt(bfv_pt(b), d.kts[1].pk, p, rng), 2, 2);
      Plaintext got = decrypt(mult(ea, eb, d.evks, p), d.sks, p);
      if (got.ints == negacyclic_product_mod_t(a, b, p.t)) ++fresh_fresh;
    }
    // masked two-party sum x fresh-expanded
    {
      std::vector<u64> a1 = random_rt(rng, p), a2 = random_rt(rng, p);
      std::vector<u64> b = random_rt(rng, p);
      ExpandedCiphertext ea = masked_pair_sum(d, a1, a2, rng);
      ExpandedCiphertext eb =
          cdks_expand(cdks_encrypt(bfv_pt(b), d.kts[0].pk, p, rng), 1, 2);
      Plaintext got = decrypt(mult(ea, eb, d.evks, p), d.sks, p);
      if (got.ints ==
          negacyclic_product_mod_t(sum_mod_t({a1, a2}, p.t), b, p.t))
        ++masked_fresh;
    }
    // masked two-party sum x masked two-party sum
    {
      std::vector<u64> a1 = random_rt(rng, p), a2 = random_rt(rng, p);
      std::vector<u64> b1 = random_rt(rng, p), b2 = random_rt(rng, p);
      ExpandedCiphertext ea = masked_pair_sum(d, a1, a2, rng);
      ExpandedCiphertext eb = masked_pair_sum(d, b1, b2, rng);
      Plaintext got = decrypt(mult(ea, eb, d.evks, p), d.sks, p);
      if (got.ints == negacyclic_product_mod_t(sum_mod_t({a1, a2}, p.t),
                                               sum_mod_t({b1, b2}, p.t), p.t))
        ++masked_masked;
    }
  }

  const bool ok = fresh_fresh == 20 && masked_fresh == 20 && masked_masked == 20;
  const std::string detail = fmt(
      "desk n=2: fresh*fresh %d/20, masked*fresh %d/20, masked*masked %d/20 "
      "exact products",
      fresh_fresh, masked_fresh, masked_masked);
  EXPECT_TRUE(emit(6, ok, seconds_since(t0), 600.0, detail));
}

// ---------------------------------------------------------------------------
// 7. Leakage regression: the per-client recovery attack must succeed totally
// against the unmasked baseline and recover at most 1% of coefficients per
// trial against the masked scheme.

TEST(Acceptance, C07_LeakageDeltaBetweenBaselineAndMasked) {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig cfg;
  cfg.profile = "desk";
  cfg.seed = parse_hex("a77ac6");
  cfg.n = 4;
  cfg.m = 4;
  cfg.d = 1024;
  cfg.f = 6;
  World w = init_world(cfg);

  int baseline_full = 0, baseline_rows = 0;
  int masked_low = 0, masked_rows = 0;
  double worst_masked_fraction = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    AttackReport base = run_attack_round(w, true);
    for (const AttackClientRow& r : base.rows) {
      ++baseline_rows;
      if (r.matched == r.entries) ++baseline_full;
    }
    AttackReport masked = run_attack_round(w, false);
    for (const AttackClientRow& r : masked.rows) {
      ++masked_rows;
      if (r.fraction <= 0.01) ++masked_low;
      worst_masked_fraction = std::max(worst_masked_fraction, r.fraction);
    }
  }

  const bool ok = baseline_full == baseline_rows && baseline_rows == 80 &&
                  masked_low == masked_rows && masked_rows == 80;
  const std::string detail = fmt(
      "20 trials x 4 clients: baseline recovered %d/%d uploads completely; "
      "masked fraction <= 0.01 in %d/%d (worst %.6f)",
      baseline_full, baseline_rows, masked_low, masked_rows,
      worst_masked_fraction);
  EXPECT_TRUE(emit(7, ok, seconds_since(t0), 300.0, detail));
}

// ---------------------------------------------------------------------------
// 8. Federated aggregation end to end: the decoded aggregate must track the
// plaintext weighted sum within the fixed-point quantization budget, and the
// textual report must be byte-identical across fresh worlds on one seed.

TEST(Acceptance, C08_FederatedRoundAccurateAndDeterministic) {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig cfg;
  cfg.profile = "ppfl";
  cfg.seed = parse_hex("4ed5");
  cfg.n = 4;
  cfg.m = 4;
  cfg.d = 4096;
  cfg.f = 16;

  World wa = init_world(cfg);
  RoundReport ra = run_round(wa);

  // Gradients persist on the world after the round; the oracle is the
  // clamped weighted sum the clients actually encoded.
  double max_err = 0.0;
  for (std::size_t k = 0; k < cfg.d; ++k) {
    double expected = 0.0;
    for (int id : wa.s_benign) {
      const ClientState& c = wa.clients[id - 1];
      const double v = c.alpha * c.gradient[k];
      expected += std::min(std::max(v, -cfg.clamp), cfg.clamp);
    }
    max_err = std::max(max_err, std::abs(ra.aggregate[k] - expected));
  }
  const double tol = cfg.m * std::ldexp(1.0, -cfg.f);

  World wb = init_world(cfg);
  RoundReport rb = run_round(wb);
  const bool identical = ra.to_text() == rb.to_text();

  const bool ok = max_err <= tol && identical && ra.aggregate.size() == cfg.d;
  const std::string detail = fmt(
      "n=4 d=4096 f=16: max |aggregate - weighted sum| = %.3g (tol %.3g); "
      "reports %s across fresh worlds",
      max_err, tol, identical ? "byte-identical" : "DIFFER");
  EXPECT_TRUE(emit(8, ok, seconds_since(t0), 300.0, detail));
}

// ---------------------------------------------------------------------------
// 9. Serialized expanded ciphertexts must fit (m+1)*polybytes + constant
// exactly as the layout size m grows.

TEST(Acceptance, C09_ExpandedCiphertextBytesAffineInParties) {
  const auto t0 = std::chrono::steady_clock::now();
  const Deployment& d = desk();
  XofRng rng(parse_hex("09"), "acceptance/size-audit");

  const std::size_t polybytes = d.p.primes.size() * d.p.N * 8;
  CiphertextBundle b = encrypt(bfv_pt(random_rt(rng, d.p)), d.kts[0], d.p, rng);

  std::map<int, std::size_t> bytes;
  for (int m : {2, 4, 8}) bytes[m] = serialize(expand(b, m), d.p).size();

  const std::size_t c2 = bytes[2] - 3 * polybytes;
  const std::size_t c4 = bytes[4] - 5 * polybytes;
  const std::size_t c8 = bytes[8] - 9 * polybytes;
  const bool ok = c2 == c4 && c4 == c8 &&
                  bytes[4] - bytes[2] == 2 * polybytes &&
                  bytes[8] - bytes[4] == 4 * polybytes;
  const std::string detail =
      fmt("bytes(m) = (m+1)*%zu + %zu exactly for m=2,4,8 (measured %zu/%zu/%zu)",
          polybytes, c2, bytes[2], bytes[4], bytes[8]);
  EXPECT_TRUE(emit(9, ok, seconds_since(t0), 60.0, detail));
}

// ---------------------------------------------------------------------------
// 10. Distributed decryption must agree with direct decryption on random
// masked aggregates, bit-exactly after BFV decoding.

TEST(Acceptance, C10_MergeMatchesDirectDecryption) {
  const auto t0 = std::chrono::steady_clock::now();
  const Deployment& d = desk();
  XofRng rng(parse_hex("10"), "acceptance/merge");

  int agree = 0, exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<u64> mu1 = random_rt(rng, d.p);
    std::vector<u64> mu2 = random_rt(rng, d.p);
    ExpandedCiphertext e = masked_pair_sum(d, mu1, mu2, rng);

    Plaintext direct = decrypt(e, d.sks, d.p);
    std::vector<PartialDecryption> parts;
    for (int i : {1, 2})
      parts.push_back(part_dec(e, i, d.sks.at(i), d.p, rng));
    Plaintext merged = merge(e, parts, d.p);

    if (merged.ints == direct.ints) ++agree;
    if (merged.ints == sum_mod_t({mu1, mu2}, d.p.t)) ++exact;
  }

  const bool ok = agree == 50 && exact == 50;
  const std::string detail = fmt(
      "desk: merge(part_dec...) == decrypt on %d/50 aggregates (%d/50 equal "
      "the plaintext sum)",
      agree, exact);
  EXPECT_TRUE(emit(10, ok, seconds_since(t0), 120.0, detail));
}

}  // namespace
}  // namespace smhe
