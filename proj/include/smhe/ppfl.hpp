#pragma once

// Privacy-preserving federated aggregation simulator: n clients with
// synthetic gradients, a server folding masked additions over the selected
// set in ring order, distributed decryption, and the model update
//   ŵ_t = ŵ_{t-1} - η·ĝ_t / Σα_i.
// Everything is driven by one master seed; reports are line-delimited
// structured records and byte-identical across runs. Wall-clock fields are
// recorded only when timings are enabled (they default to zero so report
// bytes stay reproducible).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "smhe/evaluator.hpp"
#include "smhe/io.hpp"

namespace smhe {

// -------------------------------------------------------------------------
// Fixed-point gradient codec

struct FixedPointCodec {
  int f = 16;             // fractional bits
  double clamp = 8.0;     // values clipped into [-clamp, clamp]
  bool clamp_enabled = true;

  i64 encode(double v) const {
    if (clamp_enabled) {
      v = std::min(std::max(v, -clamp), clamp);
    } else if (v < -clamp || v > clamp) {
      throw std::out_of_range("fixed-point codec: value outside clamp range");
    }
    return std::llround(std::ldexp(v, f));
  }
  double decode(i64 code) const { return std::ldexp(static_cast<double>(code), -f); }
};

// Codeword -> R_t representative (signed values map to [0, t)).
inline u64 to_rt(i64 code, u64 t) {
  i64 half = static_cast<i64>(t / 2);
  if (code > half || code < -half)
    throw std::out_of_range("fixed-point codec: codeword exceeds plaintext modulus");
  return code >= 0 ? static_cast<u64>(code) : t - static_cast<u64>(-code);
}

inline i64 from_rt(u64 v, u64 t) {
  return v > t / 2 ? static_cast<i64>(v) - static_cast<i64>(t)
                   : static_cast<i64>(v);
}

// Packs a real vector into coefficient-packed plaintexts, one chunk per N
// entries. BFV carries signed fixed-point codewords in R_t; CKKS carries the
// clamped values directly (the scheme scale does the fixed-point work).
inline std::vector<Plaintext> encode_gradient(const std::vector<double>& v,
                                              const FixedPointCodec& codec,
                                              const Params& p) {
  std::vector<Plaintext> chunks;
  std::size_t pos = 0;
  while (pos < v.size() || chunks.empty()) {
    std::size_t len = std::min(p.N, v.size() - pos);
    Plaintext pt;
    pt.scheme = p.scheme;
    if (p.scheme == Scheme::BFV) {
      pt.ints.assign(p.N, 0);
      for (std::size_t k = 0; k < len; ++k)
        pt.ints[k] = to_rt(codec.encode(v[pos + k]), p.t);
    } else {
      pt.reals.assign(p.N, 0.0);
      for (std::size_t k = 0; k < len; ++k)
        pt.reals[k] = codec.decode(codec.encode(v[pos + k]));
    }
    chunks.push_back(std::move(pt));
    pos += len;
    if (v.empty()) break;
  }
  return chunks;
}

inline std::vector<double> decode_aggregate(const std::vector<Plaintext>& chunks,
                                            std::size_t d,
                                            const FixedPointCodec& codec,
                                            const Params& p) {
  std::vector<double> out;
  out.reserve(d);
  for (const Plaintext& pt : chunks) {
    if (p.scheme == Scheme::BFV) {
      for (u64 v : pt.ints) {
        if (out.size() == d) break;
        out.push_back(codec.decode(from_rt(v, p.t)));
      }
    } else {
      for (double v : pt.reals) {
        if (out.size() == d) break;
        out.push_back(v);
      }
    }
  }
  if (out.size() != d)
    throw std::invalid_argument("decode_aggregate: chunks do not cover dimension");
  return out;
}

// -------------------------------------------------------------------------
// Simulation state

struct SimConfig {
  std::string profile = "ppfl";
  Scheme scheme = Scheme::BFV;
  std::vector<std::uint8_t> seed;
  int n = 4;           // deployment size (clients)
  int m = 4;           // |S_benign|: the first m clients participate
  std::size_t d = 4096;  // gradient dimension
  int f = 16;          // fixed-point fractional bits
  double clamp = 8.0;
  double eta = 0.1;
  int rounds = 1;
  bool cdks_mode = false;  // baseline (unmasked) aggregation
  bool timings = false;    // record wall-clock; off by default for determinism
  std::vector<double> elimination_rates;
};

struct ClientState {
  int index = 0;
  KeyTriple keys;
  double alpha = 1.0;
  std::vector<double> gradient;
  std::vector<double> local_model;
};

struct World {
  SimConfig cfg;
  Params params;
  FixedPointCodec codec;
  std::vector<ClientState> clients;
  std::vector<int> s_benign;        // ascending party indices
  std::vector<double> global_model; // ŵ
  int round = 0;                    // t
  XofRng master;
  bool hold_gradients = false;      // tests pin gradients across rounds

  std::map<int, PublicKey> public_keys() const {
    std::map<int, PublicKey> pks;
    for (const auto& c : clients) pks.emplace(c.index, c.keys.pk);
    return pks;
  }
};

inline World init_world(const SimConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 64)
    throw std::invalid_argument("sim: client count must be in [1, 64]");
  if (cfg.m < 1 || cfg.m > cfg.n)
    throw std::invalid_argument("sim: participant count must be in [1, n]");
  if (cfg.d == 0) throw std::invalid_argument("sim: dimension must be positive");
  if (cfg.f < 1 || cfg.f > 30)
    throw std::invalid_argument("sim: fractional bits must be in [1, 30]");
  if (cfg.eta <= 0.0) throw std::invalid_argument("sim: learning rate must be positive");
  if (cfg.seed.empty()) throw std::invalid_argument("sim: seed must be nonempty");

  ParamsOverrides ov;
  ov.scheme = cfg.scheme;
  World w{cfg, setup(cfg.seed, cfg.profile, ov), FixedPointCodec{cfg.f, cfg.clamp},
          {},  {},  {},  0,   XofRng(cfg.seed, "ppfl-sim")};
  w.global_model.assign(cfg.d, 0.0);
  for (int i = 1; i <= cfg.n; ++i) {
    ClientState c;
    c.index = i;
    XofRng krng = w.master.fork("keygen/" + std::to_string(i));
    c.keys = keygen(w.params, krng, i);
    XofRng arng = w.master.fork("alpha/" + std::to_string(i));
    c.alpha = 0.5 + arng.unit_double();  // positive weight in [0.5, 1.5)
    c.gradient.assign(cfg.d, 0.0);
    c.local_model = w.global_model;
    w.clients.push_back(std::move(c));
  }
  for (int i = 1; i <= cfg.m; ++i) w.s_benign.push_back(i);
  return w;
}

// Synthetic per-round gradients: seeded Gaussian entries, clamped to the
// codec range. Every client draws from its own labeled stream.
inline void refresh_gradients(World& w) {
  if (w.hold_gradients) return;
  for (ClientState& c : w.clients) {
    XofRng grng = w.master.fork("round/" + std::to_string(w.round + 1) +
                                "/grad/" + std::to_string(c.index));
    bool spare = false;
    double cached = 0.0;
    for (std::size_t k = 0; k < w.cfg.d; ++k) {
      double z;
      if (spare) {
        z = cached;
        spare = false;
      } else {
        double u1 = grng.unit_double();
        double u2 = grng.unit_double();
        while (u1 <= 0.0) u1 = grng.unit_double();
        double radius = std::sqrt(-2.0 * std::log(u1));
        z = radius * std::cos(2.0 * std::numbers::pi * u2);
        cached = radius * std::sin(2.0 * std::numbers::pi * u2);
        spare = true;
      }
      c.gradient[k] = std::min(std::max(z, -w.codec.clamp), w.codec.clamp);
    }
  }
}

// -------------------------------------------------------------------------
// Reports

struct PhaseRecord {
  std::string name;
  std::uint64_t ns = 0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
};

namespace detail {

inline std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

inline std::string digest_hex(const std::vector<double>& values) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(values.size() * 8);
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i)
      bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  auto d = Shake128::digest32(bytes);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 8; ++i) {
    out.push_back(hex[d[i] >> 4]);
    out.push_back(hex[d[i] & 0xf]);
  }
  return out;
}

}  // namespace detail

struct RoundReport {
  int round = 0;
  std::string mode;    // "smhe" | "cdks"
  std::string scheme;  // "bfv" | "ckks"
  int n = 0, m = 0;
  std::size_t d = 0;
  int f = 0;
  std::vector<PhaseRecord> phases;
  std::vector<double> aggregate;  // decoded ĝ_t
  std::vector<double> model;      // ŵ_t after the update
  double update_linf = 0.0;

  std::string to_text() const {
    std::string out = detail::fmt(
        "record=round t=%d mode=%s scheme=%s clients=%d m=%d d=%zu f=%d\n",
        round, mode.c_str(), scheme.c_str(), n, m, d, f);
    for (const PhaseRecord& ph : phases)
      out += detail::fmt("record=phase name=%s ns=%llu bytes_in=%llu bytes_out=%llu\n",
                         ph.name.c_str(),
                         static_cast<unsigned long long>(ph.ns),
                         static_cast<unsigned long long>(ph.bytes_in),
                         static_cast<unsigned long long>(ph.bytes_out));
    out += detail::fmt("record=aggregate digest=%s linf=%.17g\n",
                       detail::digest_hex(aggregate).c_str(), update_linf);
    out += detail::fmt("record=model digest=%s\n",
                       detail::digest_hex(model).c_str());
    return out;
  }
};

struct AttackClientRow {
  int client = 0;
  std::size_t matched = 0;
  std::size_t entries = 0;
  double fraction = 0.0;
  std::vector<double> sample_recovered;  // first few decoded entries
  std::vector<double> sample_true;
};

struct AttackReport {
  int round = 0;
  std::string mode;
  std::vector<AttackClientRow> rows;

  std::string to_text() const {
    std::string out = detail::fmt("record=attack t=%d mode=%s\n", round, mode.c_str());
    for (const AttackClientRow& r : rows) {
      out += detail::fmt(
          "record=attack_client client=%d matched=%zu entries=%zu fraction=%.6f\n",
          r.client, r.matched, r.entries, r.fraction);
      auto csv = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
          s += detail::fmt(i ? ",%.6g" : "%.6g", v[i]);
        return s;
      };
      out += detail::fmt("record=attack_sample client=%d recovered=%s true=%s\n",
                         r.client, csv(r.sample_recovered).c_str(),
                         csv(r.sample_true).c_str());
    }
    return out;
  }
};

struct EliminationRow {
  double rate = 0.0;
  int survivors = 0;
  double max_abs_err = 0.0;
  bool ok = false;
};

inline std::string elimination_table_text(const std::vector<EliminationRow>& rows) {
  std::string out;
  for (const EliminationRow& r : rows)
    out += detail::fmt("record=elimination rate=%.4f survivors=%d max_abs_err=%.3e ok=%d\n",
                       r.rate, r.survivors, r.max_abs_err, r.ok ? 1 : 0);
  return out;
}

// -------------------------------------------------------------------------
// Round driver

namespace detail {

struct PhaseClock {
  bool enabled;
  std::chrono::steady_clock::time_point start;
  explicit PhaseClock(bool on) : enabled(on), start(std::chrono::steady_clock::now()) {}
  std::uint64_t ns() const {
    if (!enabled) return 0;
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start)
            .count());
  }
};

struct ClientUpload {
  int index = 0;
  std::vector<CiphertextBundle> bundles;     // masked scheme
  std::vector<FreshCiphertext> baseline;     // cdks mode
  std::vector<ExpandedCiphertext> expanded;  // server-side expansion
  std::vector<Plaintext> true_chunks;        // plaintext oracle / attack ground truth
};

// Phase 1-2: every participant encodes and encrypts its weighted gradient.
inline std::vector<ClientUpload> encrypt_phase(World& w, std::uint64_t& bytes_out) {
  std::vector<ClientUpload> ups;
  for (int id : w.s_benign) {
    const ClientState& c = w.clients[id - 1];
    std::vector<double> weighted(w.cfg.d);
    for (std::size_t k = 0; k < w.cfg.d; ++k) weighted[k] = c.alpha * c.gradient[k];
    ClientUpload up;
    up.index = id;
    up.true_chunks = encode_gradient(weighted, w.codec, w.params);
    XofRng erng = w.master.fork("round/" + std::to_string(w.round + 1) +
                                "/enc/" + std::to_string(id));
    for (const Plaintext& pt : up.true_chunks) {
      if (w.cfg.cdks_mode) {
        FreshCiphertext ct = cdks_encrypt(pt, c.keys.pk, w.params, erng);
        bytes_out += serialize(ct, w.params).size();
        up.baseline.push_back(std::move(ct));
      } else {
        CiphertextBundle b = encrypt(pt, c.keys, w.params, erng);
        bytes_out += serialize(b.ct, w.params).size();
        bytes_out += serialize(b.mask, w.params).size();
        up.bundles.push_back(std::move(b));
      }
    }
    ups.push_back(std::move(up));
  }
  return ups;
}

// Phase 3: the server expands every upload to the n-party layout.
inline void expand_phase(World& w, std::vector<ClientUpload>& ups,
                         std::size_t chunks) {
  const int n = w.cfg.n;
  for (ClientUpload& up : ups)
    for (std::size_t ch = 0; ch < chunks; ++ch)
      up.expanded.push_back(w.cfg.cdks_mode
                                ? cdks_expand(up.baseline[ch], up.index, n)
                                : expand(up.bundles[ch].ct, up.index, n));
}

// Phase 4: additions chained over S_benign in ring order, i.e. the first
// participant is masked against the last (the wrap pair), then each
// successive participant is folded in masked against its predecessor. The
// baseline folds without masks.
inline std::vector<ExpandedCiphertext> fold_phase(
    World& w, const std::vector<ClientUpload>& ups, std::size_t chunks) {
  auto pks = w.public_keys();
  std::vector<ExpandedCiphertext> agg;
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    if (w.cfg.cdks_mode) {
      ExpandedCiphertext acc = ups[0].expanded[ch];
      for (std::size_t i = 1; i < ups.size(); ++i)
        acc = cdks_add(acc, ups[i].expanded[ch], w.params);
      agg.push_back(std::move(acc));
      continue;
    }
    std::map<int, MaskMaterial> masks;
    for (const ClientUpload& up : ups) masks.emplace(up.index, up.bundles[ch].mask);

    ExpandedCiphertext acc = ups[0].expanded[ch];
    if (ups.size() > 1) {
      int first = ups.front().index;
      int last = ups.back().index;
      acc = add(acc, zero_ciphertext(w.params, w.cfg.n), pks, masks, w.params,
                std::vector<int>{first}, std::vector<int>{last});
      for (std::size_t i = 1; i < ups.size(); ++i)
        acc = add(acc, ups[i].expanded[ch], pks, masks, w.params,
                  std::vector<int>{ups[i - 1].index},
                  std::vector<int>{ups[i].index});
    }
    agg.push_back(std::move(acc));
  }
  return agg;
}

}  // namespace detail

// One full protocol round: train → encrypt → expand/aggregate → partdec →
// merge → update. Mutates the world (round counter, gradients, models).
inline RoundReport run_round(World& w) {
  RoundReport rep;
  rep.round = w.round + 1;
  rep.mode = w.cfg.cdks_mode ? "cdks" : "smhe";
  rep.scheme = w.params.scheme == Scheme::BFV ? "bfv" : "ckks";
  rep.n = w.cfg.n;
  rep.m = static_cast<int>(w.s_benign.size());
  rep.d = w.cfg.d;
  rep.f = w.cfg.f;
  if (w.s_benign.empty()) throw std::invalid_argument("run_round: empty participant set");

  {
    detail::PhaseClock clock(w.cfg.timings);
    refresh_gradients(w);
    rep.phases.push_back({"train", clock.ns(), 0, 0});
  }

  std::uint64_t upload_bytes = 0;
  std::vector<detail::ClientUpload> ups;
  {
    detail::PhaseClock clock(w.cfg.timings);
    ups = detail::encrypt_phase(w, upload_bytes);
    rep.phases.push_back({"encrypt", clock.ns(), 0, upload_bytes});
  }
  const std::size_t chunks = ups[0].true_chunks.size();

  {
    detail::PhaseClock clock(w.cfg.timings);
    detail::expand_phase(w, ups, chunks);
    rep.phases.push_back({"expand", clock.ns(), upload_bytes, 0});
  }

  std::vector<ExpandedCiphertext> agg;
  std::uint64_t agg_bytes = 0;
  {
    detail::PhaseClock clock(w.cfg.timings);
    agg = detail::fold_phase(w, ups, chunks);
    for (const auto& a : agg) agg_bytes += serialize(a, w.params).size();
    rep.phases.push_back({"aggregate", clock.ns(), 0, agg_bytes});
  }

  std::vector<std::vector<PartialDecryption>> parts(chunks);
  std::uint64_t part_bytes = 0;
  {
    detail::PhaseClock clock(w.cfg.timings);
    for (int id : w.s_benign) {
      XofRng prng = w.master.fork("round/" + std::to_string(w.round + 1) +
                                  "/partdec/" + std::to_string(id));
      for (std::size_t ch = 0; ch < chunks; ++ch) {
        PartialDecryption pd =
            part_dec(agg[ch], id, w.clients[id - 1].keys.sk, w.params, prng);
        part_bytes += serialize(pd, w.params).size();
        parts[ch].push_back(std::move(pd));
      }
    }
    // each participant pulls the aggregate down before responding
    rep.phases.push_back(
        {"partdec", clock.ns(), agg_bytes * w.s_benign.size(), part_bytes});
  }

  {
    detail::PhaseClock clock(w.cfg.timings);
    std::vector<Plaintext> decoded;
    for (std::size_t ch = 0; ch < chunks; ++ch)
      decoded.push_back(merge(agg[ch], parts[ch], w.params));
    rep.aggregate = decode_aggregate(decoded, w.cfg.d, w.codec, w.params);
    rep.phases.push_back({"merge", clock.ns(), part_bytes, 0});
  }

  {
    detail::PhaseClock clock(w.cfg.timings);
    double alpha_sum = 0.0;
    for (int id : w.s_benign) alpha_sum += w.clients[id - 1].alpha;
    double scale = w.cfg.eta / alpha_sum;
    for (std::size_t k = 0; k < w.cfg.d; ++k) {
      double step = scale * rep.aggregate[k];
      w.global_model[k] -= step;
      rep.update_linf = std::max(rep.update_linf, std::abs(step));
    }
    for (ClientState& c : w.clients) c.local_model = w.global_model;
    rep.model = w.global_model;
    rep.phases.push_back({"update", clock.ns(), 0, 0});
  }

  w.round += 1;
  return rep;
}

// Replays a round while an honest-but-curious observer records each client's
// (c_0, ν) pair and runs the recovery computation. Reports the exact-match
// fraction of fixed-point gradient entries per client.
inline AttackReport run_attack_round(World& w, bool cdks_mode) {
  if (w.params.scheme != Scheme::BFV)
    throw std::invalid_argument("attack round: exact-match audit needs the BFV profile");
  AttackReport rep;
  rep.round = w.round + 1;
  rep.mode = cdks_mode ? "cdks" : "smhe";
  if (w.s_benign.empty())
    throw std::invalid_argument("attack round: empty participant set");

  bool saved_mode = w.cfg.cdks_mode;
  w.cfg.cdks_mode = cdks_mode;
  refresh_gradients(w);

  std::uint64_t bytes = 0;
  std::vector<detail::ClientUpload> ups = detail::encrypt_phase(w, bytes);
  const std::size_t chunks = ups[0].true_chunks.size();
  detail::expand_phase(w, ups, chunks);
  std::vector<ExpandedCiphertext> agg = detail::fold_phase(w, ups, chunks);

  for (const detail::ClientUpload& up : ups) {
    AttackClientRow row;
    row.client = up.index;
    row.entries = w.cfg.d;
    XofRng prng = w.master.fork("round/" + std::to_string(w.round + 1) +
                                "/attack-partdec/" + std::to_string(up.index));
    std::size_t seen = 0;
    for (std::size_t ch = 0; ch < chunks; ++ch) {
      PartialDecryption nu = part_dec(agg[ch], up.index,
                                      w.clients[up.index - 1].keys.sk, w.params, prng);
      const Poly& c0 =
          cdks_mode ? up.baseline[ch].c0 : up.bundles[ch].ct.c0;
      Plaintext rec = attack_recover(c0, nu, w.params);
      for (std::size_t k = 0; k < w.params.N && seen < w.cfg.d; ++k, ++seen)
        if (rec.ints[k] == up.true_chunks[ch].ints[k]) ++row.matched;
      if (ch == 0)
        for (std::size_t k = 0; k < std::min<std::size_t>(8, w.cfg.d); ++k) {
          row.sample_recovered.push_back(
              w.codec.decode(from_rt(rec.ints[k], w.params.t)));
          row.sample_true.push_back(
              w.codec.decode(from_rt(up.true_chunks[0].ints[k], w.params.t)));
        }
    }
    row.fraction = static_cast<double>(row.matched) / static_cast<double>(row.entries);
    rep.rows.push_back(row);
  }

  w.cfg.cdks_mode = saved_mode;
  w.round += 1;
  return rep;
}

// For each elimination rate, runs one aggregation round over the surviving
// prefix of the participant set and checks the decoded aggregate against the
// plaintext weighted sum. World state is restored afterwards.
inline std::vector<EliminationRow> client_elimination_sweep(
    World& w, const std::vector<double>& rates) {
  std::vector<EliminationRow> rows;
  std::vector<int> saved_benign = w.s_benign;
  std::vector<double> saved_model = w.global_model;
  int saved_round = w.round;

  for (double rate : rates) {
    if (rate < 0.0 || rate >= 1.0)
      throw std::invalid_argument("elimination sweep: rate must be in [0, 1)");
    int total = static_cast<int>(saved_benign.size());
    int eliminated = static_cast<int>(rate * total);
    int surviving = total - eliminated;
    if (surviving < 1)
      throw std::invalid_argument("elimination sweep: empty surviving set");
    w.s_benign.assign(saved_benign.begin(), saved_benign.begin() + surviving);

    RoundReport rep = run_round(w);

    // Plaintext oracle: the fixed-point sum of the survivors' weighted
    // gradients, on the same codewords the clients encrypted.
    EliminationRow row;
    row.rate = rate;
    row.survivors = surviving;
    for (std::size_t k = 0; k < w.cfg.d; ++k) {
      i64 code_sum = 0;
      for (int id : w.s_benign) {
        const ClientState& c = w.clients[id - 1];
        code_sum += w.codec.encode(c.alpha * c.gradient[k]);
      }
      double expect = w.codec.decode(code_sum);
      row.max_abs_err = std::max(row.max_abs_err, std::abs(rep.aggregate[k] - expect));
    }
    row.ok = row.max_abs_err <=
             static_cast<double>(surviving) * std::ldexp(1.0, -w.cfg.f);
    rows.push_back(row);

    w.global_model = saved_model;
    w.round = saved_round;
  }
  w.s_benign = saved_benign;
  return rows;
}

// -------------------------------------------------------------------------
// Config plumbing: flat key=value text (see parse_kv_config) into SimConfig.
// Recognized keys: profile, scheme, seed, mode, n, m, d, f, clamp, eta,
// rounds, timings, elimination_rates (comma-separated).

inline std::vector<double> parse_rate_list(const std::string& text) {
  std::vector<double> rates;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    rates.push_back(std::stod(item));
  }
  return rates;
}

inline SimConfig sim_config_from_kv(const std::map<std::string, std::string>& kv) {
  SimConfig cfg;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "profile") {
        cfg.profile = value;
      } else if (key == "scheme") {
        if (value == "bfv") cfg.scheme = Scheme::BFV;
        else if (value == "ckks") cfg.scheme = Scheme::CKKS;
        else throw std::invalid_argument("scheme must be bfv or ckks");
      } else if (key == "seed") {
        cfg.seed = parse_hex(value);
      } else if (key == "mode") {
        if (value == "smhe") cfg.cdks_mode = false;
        else if (value == "cdks") cfg.cdks_mode = true;
        else throw std::invalid_argument("mode must be smhe or cdks");
      } else if (key == "n") {
        cfg.n = std::stoi(value);
      } else if (key == "m") {
        cfg.m = std::stoi(value);
      } else if (key == "d") {
        cfg.d = static_cast<std::size_t>(std::stoull(value));
      } else if (key == "f") {
        cfg.f = std::stoi(value);
      } else if (key == "clamp") {
        cfg.clamp = std::stod(value);
      } else if (key == "eta") {
        cfg.eta = std::stod(value);
      } else if (key == "rounds") {
        cfg.rounds = std::stoi(value);
      } else if (key == "timings") {
        cfg.timings = value == "1" || value == "true";
      } else if (key == "elimination_rates") {
        cfg.elimination_rates = parse_rate_list(value);
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("config: bad entry '" + key + "=" + value +
                                  "': " + e.what());
    }
  }
  return cfg;
}

}  // namespace smhe
