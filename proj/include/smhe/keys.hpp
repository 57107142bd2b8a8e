#pragma once

// Key generation for SMHE/CDKS parties. Party indices are 1-based so that
// expanded-ciphertext slot 0 stays the constant term. The relinearization
// material (b, d, u, v) satisfies, for ephemeral γ ← χ zeroized in here:
//   b = -s·a + e0,   d = -γ·a + s·g + e1,   u ← U(R_Q^tau),   v = -s·u - γ·g + e2.

#include <algorithm>
#include <vector>

#include "smhe/gadget.hpp"
#include "smhe/ring.hpp"

namespace smhe {

struct SecretKey {
  int party = 0;
  Poly s;  // χ-distributed; the full key is sk = (1, s)
};

struct PublicKey {
  int party = 0;
  Poly b;  // first component of the evk b-vector
  Poly a;  // first CRS component
};

struct EvalKey {
  int party = 0;
  PolyVec b, d, u, v;
};

struct KeyTriple {
  SecretKey sk;
  PublicKey pk;
  EvalKey evk;
};

inline KeyTriple keygen(const Params& p, XofRng& rng, int party) {
  if (party < 1) throw std::invalid_argument("keygen: party indices are 1-based");

  Poly s = sample_chi(rng, p);
  Poly gamma = sample_chi(rng, p);

  EvalKey evk;
  evk.party = party;
  for (std::size_t j = 0; j < p.tau; ++j) {
    const Poly& a_j = p.crs[j];
    Poly e0 = sample_gauss(rng, p);
    Poly e1 = sample_gauss(rng, p);
    Poly e2 = sample_gauss(rng, p);
    Poly u_j = sample_uniform(rng, p);

    evk.b.entries.push_back(sub(e0, mul(s, a_j, p.tables)));
    evk.d.entries.push_back(add(sub(e1, mul(gamma, a_j, p.tables)),
                                scalar_mul(s, gadget_power(p, j))));
    evk.v.entries.push_back(sub(sub(e2, mul(s, u_j, p.tables)),
                                scalar_mul(gamma, gadget_power(p, j))));
    evk.u.entries.push_back(std::move(u_j));
  }

  // γ is ephemeral: wipe before it leaves scope.
  for (auto& row : gamma.residues) std::fill(row.begin(), row.end(), 0);

  KeyTriple out;
  out.sk = SecretKey{party, std::move(s)};
  out.pk = PublicKey{party, evk.b[0], p.crs[0]};
  out.evk = std::move(evk);
  return out;
}

// ⟨sk, (c0, c1)⟩ = c0 + c1·s (mod Q): the single-key decryption functional.
inline Poly inner_decrypt(const Poly& c0, const Poly& c1, const SecretKey& sk,
                          const Params& p) {
  return add(c0, mul(c1, sk.s, p.tables));
}

}  // namespace smhe
