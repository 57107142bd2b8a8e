#include <gtest/gtest.h>

#include "smhe/masking.hpp"

namespace smhe {
namespace {

class MaskingTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    params_ = new Params(setup(parse_hex("3a5c"), "test1024"));
  }
  static void TearDownTestSuite() {
    delete params_;
    params_ = nullptr;
  }
  static Params* params_;
};
Params* MaskingTest::params_ = nullptr;

TEST_F(MaskingTest, BfvCodecRoundtripExact) {
  const Params& p = *params_;
  XofRng rng(parse_hex("01"), "bfv-codec");
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<u64> mu(p.N);
    for (auto& v : mu) v = rng.uniform_below(p.t);
    EXPECT_EQ(bfv_decode(bfv_encode(mu, p), p), mu);
  }
}

TEST_F(MaskingTest, BfvCodecToleratesNoise) {
  // Decoding survives additive noise up to the capacity bound Q/(2t).
  const Params& p = *params_;
  std::vector<u64> mu(p.N, 0);
  mu[0] = 1234;
  Poly m = bfv_encode(mu, p);
  // inject +/- capacity/2 noise on every coefficient
  bigint half_cap = p.basis.Q / (4 * bigint(p.t));
  std::vector<bigint> noise(p.N);
  for (std::size_t k = 0; k < p.N; ++k)
    noise[k] = (k % 2 == 0) ? half_cap : -half_cap;
  Poly noisy = add(m, poly_from_centered(noise, p.primes));
  EXPECT_EQ(bfv_decode(noisy, p), mu);
}

TEST_F(MaskingTest, BfvEncodeValidatesRange) {
  const Params& p = *params_;
  std::vector<u64> mu(p.N, 0);
  mu[3] = p.t;  // out of range
  EXPECT_THROW(bfv_encode(mu, p), std::invalid_argument);
  EXPECT_THROW(bfv_encode(std::vector<u64>(p.N + 1, 0), p), std::invalid_argument);
}

TEST_F(MaskingTest, CkksCodecWithinHalfStep) {
  ParamsOverrides ov;
  ov.scheme = Scheme::CKKS;
  Params pc = setup(parse_hex("3a5c"), "test1024", ov);
  XofRng rng(parse_hex("02"), "ckks-codec");
  std::vector<double> v(pc.N);
  for (auto& x : v) x = (rng.unit_double() - 0.5) * 100.0;
  std::vector<double> back = ckks_decode(ckks_encode(v, pc.ckks_scale, pc), pc.ckks_scale, pc);
  for (std::size_t k = 0; k < pc.N; ++k)
    EXPECT_NEAR(back[k], v[k], 1.0 / pc.ckks_scale);
}

TEST_F(MaskingTest, UniEncDecryptsUnderOwnKey) {
  const Params& p = *params_;
  XofRng rng(parse_hex("03"), "unienc");
  KeyTriple kt = keygen(p, rng, 1);
  std::vector<u64> mu(p.N);
  for (auto& v : mu) v = rng.uniform_below(p.t);
  FreshCiphertext ct = uni_enc(bfv_encode(mu, p), kt.pk, p, rng);
  Poly m = add(ct.c0, mul(ct.c1, kt.sk.s, p.tables));
  EXPECT_EQ(bfv_decode(m, p), mu);
  EXPECT_EQ(ct.owner, 1);

  // Fresh noise stays under the tracked estimate.
  bigint err = inf_norm(sub(m, bfv_encode(mu, p)), p.basis);
  EXPECT_LE(err, bigint(static_cast<long long>(ct.noise_bound)));
}

TEST_F(MaskingTest, MaskEncOwnershipChecked) {
  const Params& p = *params_;
  XofRng rng(parse_hex("04"), "maskenc");
  KeyTriple k1 = keygen(p, rng, 1);
  KeyTriple k2 = keygen(p, rng, 2);
  EXPECT_THROW(mask_enc(k1.pk, k2.sk, p, rng), std::invalid_argument);
  MaskMaterial m = mask_enc(k1.pk, k1.sk, p, rng);
  EXPECT_EQ(m.owner, 1);
}

TEST_F(MaskingTest, MaskZIsEncryptionOfZero) {
  const Params& p = *params_;
  XofRng rng(parse_hex("05"), "mask-z");
  KeyTriple kt = keygen(p, rng, 1);
  MaskMaterial m = mask_enc(kt.pk, kt.sk, p, rng);
  Poly dec = add(m.z0, mul(m.z1, kt.sk.s, p.tables));
  // <sk, cz> = r·e_pk + e0 + s·e1: bounded by fresh noise scale
  EXPECT_LE(inf_norm(dec, p.basis), bigint(static_cast<long long>(fresh_noise_bound(p))));
}

// The core cancellation property: the correction terms cancel across a pair,
// leaving only gadget and convolution residue.
TEST_F(MaskingTest, PairwiseCancellationWithinAnalyticBound) {
  const Params& p = *params_;
  XofRng rng(parse_hex("06"), "cancel");
  bigint bound = (bigint(2) * p.N * p.N + 4 * p.N) * p.B_chi +
                 bigint(p.tau) * p.N * p.B_chi * p.B_H;
  for (int trial = 0; trial < 5; ++trial) {
    KeyTriple k1 = keygen(p, rng, 1);
    KeyTriple k2 = keygen(p, rng, 2);
    MaskMaterial m1 = mask_enc(k1.pk, k1.sk, p, rng);
    MaskMaterial m2 = mask_enc(k2.pk, k2.sk, p, rng);
    MaskCorrection cx1 = extend(m1.gamma, k1.pk, k2.pk, p);

    // ⟨sk_1, cx_1⟩ ≈ r_1·(b_2-b_1) while ⟨sk_2, cz_1⟩ ≈ r_1·(b_1-b_2):
    // the pair sums to gadget + convolution residue only.
    Poly lhs = add(add(cx1.x0, mul(cx1.x1, k1.sk.s, p.tables)),
                   add(m1.z0, mul(m1.z1, k2.sk.s, p.tables)));
    EXPECT_LE(inf_norm(lhs, p.basis), bound) << "trial " << trial;
  }
}

TEST_F(MaskingTest, ExtendStarFoldsCounterpartsThroughOneDecomposition) {
  // With a single counterpart, Extend* must equal the pairwise Extend bit for
  // bit. With several, it is NOT the literal sum of pairwise corrections
  // (digit decomposition is non-linear); the contract is that one
  // decomposition of Σ_j (b_j - b) cancels against all the counterpart cz
  // terms at once, within the same analytic bound.
  const Params& p = *params_;
  XofRng rng(parse_hex("07"), "extstar");
  KeyTriple k1 = keygen(p, rng, 1);
  KeyTriple k2 = keygen(p, rng, 2);
  KeyTriple k3 = keygen(p, rng, 3);
  MaskMaterial m1 = mask_enc(k1.pk, k1.sk, p, rng);

  MaskCorrection single = extend_star(m1.gamma, k1.pk, {k2.pk}, p);
  MaskCorrection pairwise = extend(m1.gamma, k1.pk, k2.pk, p);
  EXPECT_EQ(single.x0, pairwise.x0);
  EXPECT_EQ(single.x1, pairwise.x1);

  MaskCorrection star = extend_star(m1.gamma, k1.pk, {k2.pk, k3.pk}, p);
  Poly lhs = add(add(star.x0, mul(star.x1, k1.sk.s, p.tables)),
                 add(add(m1.z0, mul(m1.z1, k2.sk.s, p.tables)),
                     add(m1.z0, mul(m1.z1, k3.sk.s, p.tables))));
  bigint bound = (bigint(2) * p.N * p.N + 4 * p.N) * p.B_chi +
                 bigint(p.tau) * p.N * p.B_chi * p.B_H;
  EXPECT_LE(inf_norm(lhs, p.basis), bound);

  EXPECT_THROW(extend_star(m1.gamma, k1.pk, {}, p), std::invalid_argument);
}

TEST_F(MaskingTest, ExtendRejectsForeignCrs) {
  // Keys from a different deployment (different CRS) are refused.
  const Params& p = *params_;
  Params other = setup(parse_hex("9999"), "test1024");
  XofRng rng(parse_hex("08"), "foreign");
  XofRng rng2(parse_hex("08"), "foreign2");
  KeyTriple k1 = keygen(p, rng, 1);
  KeyTriple alien = keygen(other, rng2, 2);
  MaskMaterial m1 = mask_enc(k1.pk, k1.sk, p, rng);
  EXPECT_THROW(extend(m1.gamma, k1.pk, alien.pk, p), std::invalid_argument);
}

}  // namespace
}  // namespace smhe
