// Command-line driver: thin shells over the library operations, file-based
// object passing via the binary wire format, all randomness from --seed.
// Exit codes: 0 success, 1 crypto/validation failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smhe/smhe.hpp"

namespace {

using namespace smhe;

Params load_params_file(const std::string& path) {
  return load_params(read_file(path));
}

std::vector<std::uint8_t> seed_bytes(const std::string& hex) {
  auto seed = parse_hex(hex);
  if (seed.empty()) throw std::invalid_argument("--seed must be nonempty hex");
  return seed;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    if (!item.empty()) items.push_back(item);
    pos = comma + 1;
  }
  return items;
}

Plaintext parse_values(const std::string& csv, const Params& p) {
  Plaintext pt;
  pt.scheme = p.scheme;
  std::vector<std::string> items = split_csv(csv);
  if (items.size() > p.N)
    throw std::invalid_argument("too many values: limit is N=" + std::to_string(p.N));
  if (p.scheme == Scheme::BFV) {
    pt.ints.assign(p.N, 0);
    for (std::size_t i = 0; i < items.size(); ++i) {
      unsigned long long v = std::stoull(items[i]);
      if (v >= p.t) throw std::invalid_argument("value " + items[i] + " >= t");
      pt.ints[i] = v;
    }
  } else {
    pt.reals.assign(p.N, 0.0);
    for (std::size_t i = 0; i < items.size(); ++i) pt.reals[i] = std::stod(items[i]);
  }
  return pt;
}

std::string format_values(const Plaintext& pt, std::size_t limit) {
  std::string out;
  char buf[64];
  if (pt.scheme == Scheme::BFV) {
    std::size_t count = limit ? std::min(limit, pt.ints.size()) : pt.ints.size();
    for (std::size_t i = 0; i < count; ++i) {
      std::snprintf(buf, sizeof(buf), i ? ",%llu" : "%llu",
                    static_cast<unsigned long long>(pt.ints[i]));
      out += buf;
    }
  } else {
    std::size_t count = limit ? std::min(limit, pt.reals.size()) : pt.reals.size();
    for (std::size_t i = 0; i < count; ++i) {
      std::snprintf(buf, sizeof(buf), i ? ",%.9g" : "%.9g", pt.reals[i]);
      out += buf;
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file_atomic(out_path, text);
  }
}

// Accepts fresh or expanded ciphertext files; fresh ones are expanded into
// the n-party layout using the owner recorded at encryption time.
ExpandedCiphertext load_as_expanded(const std::string& path, const Params& p, int n) {
  auto bytes = read_file(path);
  ObjKind kind = peek_kind(bytes);
  if (kind == ObjKind::expanded_ct) {
    ExpandedCiphertext e = load_expanded(bytes, p);
    if (e.n != n)
      throw std::invalid_argument(path + ": deployment size " +
                                  std::to_string(e.n) + " != " + std::to_string(n));
    return e;
  }
  if (kind == ObjKind::fresh_ct) {
    FreshCiphertext ct = load_fresh(bytes, p);
    return expand(ct, ct.owner, n);
  }
  throw std::invalid_argument(path + ": expected a ciphertext object");
}

int infer_n(const std::vector<std::string>& inputs, const Params& p) {
  int n = 0;
  for (const std::string& path : inputs) {
    auto bytes = read_file(path);
    ObjKind kind = peek_kind(bytes);
    if (kind == ObjKind::expanded_ct)
      n = std::max(n, load_expanded(bytes, p).n);
    else if (kind == ObjKind::fresh_ct)
      n = std::max(n, load_fresh(bytes, p).owner);
  }
  if (n == 0) throw std::invalid_argument("cannot infer deployment size from inputs");
  return n;
}

int run(int argc, char** argv) {
  CLI::App app{"masked multi-key BFV/CKKS toolkit"};
  app.require_subcommand(1);

  // setup ------------------------------------------------------------
  std::string su_profile = "desk", su_seed, su_scheme = "bfv", su_out;
  std::optional<std::uint64_t> su_t;
  auto* setup_cmd = app.add_subcommand("setup", "derive a parameter file");
  setup_cmd->add_option("--profile", su_profile, "parameter profile")
      ->check(CLI::IsMember(known_profiles()));
  setup_cmd->add_option("--seed", su_seed, "deployment seed (hex)")->required();
  setup_cmd->add_option("--scheme", su_scheme)->check(CLI::IsMember({"bfv", "ckks"}));
  setup_cmd->add_option("--t", su_t, "plaintext modulus override");
  setup_cmd->add_option("--out", su_out, "output params file")->required();

  // keygen -----------------------------------------------------------
  std::string kg_params, kg_seed, kg_out;
  int kg_party = 0;
  auto* keygen_cmd = app.add_subcommand("keygen", "generate one party's key triple");
  keygen_cmd->add_option("--params", kg_params)->required();
  keygen_cmd->add_option("--seed", kg_seed)->required();
  keygen_cmd->add_option("--party", kg_party, "party index (1-based)")->required();
  keygen_cmd->add_option("--out", kg_out, "output prefix (.sk/.pk/.evk)")->required();

  // encrypt ----------------------------------------------------------
  std::string en_params, en_seed, en_sk, en_pk, en_mode = "smhe", en_values, en_out;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt packed values");
  encrypt_cmd->add_option("--params", en_params)->required();
  encrypt_cmd->add_option("--seed", en_seed)->required();
  encrypt_cmd->add_option("--sk", en_sk, "secret key (masked mode only)");
  encrypt_cmd->add_option("--pk", en_pk)->required();
  encrypt_cmd->add_option("--mode", en_mode)->check(CLI::IsMember({"smhe", "cdks"}));
  encrypt_cmd->add_option("--values", en_values, "comma-separated payload")->required();
  encrypt_cmd->add_option("--out", en_out, "output prefix (.ct/.mask)")->required();

  // add ----------------------------------------------------------------
  std::string ad_params, ad_mode = "smhe", ad_out;
  int ad_n = 0;
  std::vector<std::string> ad_in, ad_pk, ad_mask;
  auto* add_cmd = app.add_subcommand("add", "masked multi-key addition");
  add_cmd->add_option("--params", ad_params)->required();
  add_cmd->add_option("--mode", ad_mode)->check(CLI::IsMember({"smhe", "cdks"}));
  add_cmd->add_option("--n", ad_n, "deployment size (inferred when omitted)");
  add_cmd->add_option("--in", ad_in, "ciphertext files (fresh or expanded)")
      ->required()
      ->expected(-2);
  add_cmd->add_option("--pk", ad_pk, "public key files (masked mode)");
  add_cmd->add_option("--mask", ad_mask, "mask material files (masked mode)");
  add_cmd->add_option("--out", ad_out)->required();

  // mult ---------------------------------------------------------------
  std::string mu_params, mu_out;
  int mu_n = 0;
  std::vector<std::string> mu_in, mu_evk;
  auto* mult_cmd = app.add_subcommand("mult", "multi-key multiplication (depth 1)");
  mult_cmd->add_option("--params", mu_params)->required();
  mult_cmd->add_option("--n", mu_n, "deployment size (inferred when omitted)");
  mult_cmd->add_option("--in", mu_in)->required()->expected(2);
  mult_cmd->add_option("--evk", mu_evk, "evaluation key files")->required();
  mult_cmd->add_option("--out", mu_out)->required();

  // partdec --------------------------------------------------------------
  std::string pd_params, pd_seed, pd_sk, pd_in, pd_out;
  auto* partdec_cmd = app.add_subcommand("partdec", "partial decryption share");
  partdec_cmd->add_option("--params", pd_params)->required();
  partdec_cmd->add_option("--seed", pd_seed)->required();
  partdec_cmd->add_option("--sk", pd_sk)->required();
  partdec_cmd->add_option("--in", pd_in, "expanded ciphertext")->required();
  partdec_cmd->add_option("--out", pd_out)->required();

  // merge ------------------------------------------------------------------
  std::string mg_params, mg_in, mg_out;
  std::vector<std::string> mg_nu;
  std::size_t mg_trunc = 0;
  auto* merge_cmd = app.add_subcommand("merge", "combine shares and decode");
  merge_cmd->add_option("--params", mg_params)->required();
  merge_cmd->add_option("--in", mg_in, "expanded ciphertext")->required();
  merge_cmd->add_option("--nu", mg_nu, "partial decryption files")->required();
  merge_cmd->add_option("--trunc", mg_trunc, "print only the first K values");
  merge_cmd->add_option("--out", mg_out, "write result here instead of stdout");

  // attack-demo ---------------------------------------------------------
  std::string at_profile = "desk", at_seed, at_mode = "cdks", at_out;
  int at_n = 4, at_f = 6;
  std::size_t at_d = 64;
  auto* attack_cmd =
      app.add_subcommand("attack-demo", "partial-decryption leakage demo");
  attack_cmd->add_option("--profile", at_profile)
      ->check(CLI::IsMember(known_profiles()));
  attack_cmd->add_option("--seed", at_seed)->required();
  attack_cmd->add_option("--mode", at_mode)->check(CLI::IsMember({"smhe", "cdks"}));
  attack_cmd->add_option("--n", at_n, "client count");
  attack_cmd->add_option("--d", at_d, "gradient dimension");
  attack_cmd->add_option("--f", at_f, "fixed-point fractional bits");
  attack_cmd->add_option("--out", at_out);

  // simulate ---------------------------------------------------------------
  std::string si_config, si_seed, si_mode, si_out;
  bool si_timings = false;
  auto* sim_cmd = app.add_subcommand("simulate", "federated aggregation rounds");
  sim_cmd->add_option("--config", si_config, "key=value config file")->required();
  sim_cmd->add_option("--seed", si_seed, "override config seed (hex)");
  sim_cmd->add_option("--mode", si_mode)->check(CLI::IsMember({"smhe", "cdks"}));
  sim_cmd->add_flag("--timings", si_timings, "record wall-clock in reports");
  sim_cmd->add_option("--out", si_out);

  // bench -------------------------------------------------------------------
  std::string be_profile = "desk", be_seed, be_out;
  int be_reps = 3;
  auto* bench_cmd = app.add_subcommand("bench", "operation micro-benchmarks");
  bench_cmd->add_option("--profile", be_profile)
      ->check(CLI::IsMember(known_profiles()));
  bench_cmd->add_option("--seed", be_seed)->required();
  bench_cmd->add_option("--reps", be_reps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", be_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: usage: %s\n", e.what());
    return 2;
  }

  if (*setup_cmd) {
    ParamsOverrides ov;
    ov.scheme = su_scheme == "ckks" ? Scheme::CKKS : Scheme::BFV;
    if (su_t) ov.t = *su_t;
    Params p = setup(seed_bytes(su_seed), su_profile, ov);
    write_file_atomic(su_out, serialize(p));
    std::printf("wrote %s profile=%s N=%zu primes=%zu t=%llu scheme=%s\n",
                su_out.c_str(), p.profile.c_str(), p.N, p.primes.size(),
                static_cast<unsigned long long>(p.t), su_scheme.c_str());
    return 0;
  }

  if (*keygen_cmd) {
    Params p = load_params_file(kg_params);
    XofRng rng(seed_bytes(kg_seed), "cli/keygen/" + std::to_string(kg_party));
    KeyTriple kt = keygen(p, rng, kg_party);
    write_file_atomic(kg_out + ".sk", serialize(kt.sk, p));
    write_file_atomic(kg_out + ".pk", serialize(kt.pk, p));
    write_file_atomic(kg_out + ".evk", serialize(kt.evk, p));
    std::printf("wrote %s.{sk,pk,evk} party=%d\n", kg_out.c_str(), kg_party);
    return 0;
  }

  if (*encrypt_cmd) {
    Params p = load_params_file(en_params);
    PublicKey pk = load_pk(read_file(en_pk), p);
    Plaintext pt = parse_values(en_values, p);
    XofRng rng(seed_bytes(en_seed), "cli/encrypt/" + std::to_string(pk.party));
    if (en_mode == "cdks") {
      FreshCiphertext ct = cdks_encrypt(pt, pk, p, rng);
      write_file_atomic(en_out + ".ct", serialize(ct, p));
      std::printf("wrote %s.ct owner=%d mode=cdks\n", en_out.c_str(), ct.owner);
    } else {
      if (en_sk.empty())
        throw std::invalid_argument("masked encryption needs --sk for the mask material");
      SecretKey sk = load_sk(read_file(en_sk), p);
      CiphertextBundle b = encrypt(encode(pt, p), sk, pk, p, rng);
      write_file_atomic(en_out + ".ct", serialize(b.ct, p));
      write_file_atomic(en_out + ".mask", serialize(b.mask, p));
      std::printf("wrote %s.{ct,mask} owner=%d mode=smhe\n", en_out.c_str(),
                  b.ct.owner);
    }
    return 0;
  }

  if (*add_cmd) {
    Params p = load_params_file(ad_params);
    int n = ad_n ? ad_n : infer_n(ad_in, p);
    std::map<int, PublicKey> pks;
    for (const std::string& path : ad_pk) {
      PublicKey pk = load_pk(read_file(path), p);
      pks.emplace(pk.party, std::move(pk));
    }
    std::map<int, MaskMaterial> masks;
    for (const std::string& path : ad_mask) {
      MaskMaterial m = load_mask(read_file(path), p);
      masks.emplace(m.owner, std::move(m));
    }
    ExpandedCiphertext acc = load_as_expanded(ad_in[0], p, n);
    for (std::size_t i = 1; i < ad_in.size(); ++i) {
      ExpandedCiphertext next = load_as_expanded(ad_in[i], p, n);
      acc = ad_mode == "cdks" ? cdks_add(acc, next, p)
                              : add(acc, next, pks, masks, p);
    }
    write_file_atomic(ad_out, serialize(acc, p));
    std::string refs;
    for (int i : acc.ref_set) refs += (refs.empty() ? "" : ",") + std::to_string(i);
    std::printf("wrote %s refs=%s masked=%d\n", ad_out.c_str(), refs.c_str(),
                acc.masked ? 1 : 0);
    return 0;
  }

  if (*mult_cmd) {
    Params p = load_params_file(mu_params);
    int n = mu_n ? mu_n : infer_n(mu_in, p);
    std::map<int, EvalKey> evks;
    for (const std::string& path : mu_evk) {
      EvalKey evk = load_evk(read_file(path), p);
      evks.emplace(evk.party, std::move(evk));
    }
    ExpandedCiphertext a = load_as_expanded(mu_in[0], p, n);
    ExpandedCiphertext b = load_as_expanded(mu_in[1], p, n);
    ExpandedCiphertext prod = mult(a, b, evks, p);
    write_file_atomic(mu_out, serialize(prod, p));
    std::printf("wrote %s\n", mu_out.c_str());
    return 0;
  }

  if (*partdec_cmd) {
    Params p = load_params_file(pd_params);
    SecretKey sk = load_sk(read_file(pd_sk), p);
    ExpandedCiphertext e = load_expanded(read_file(pd_in), p);
    XofRng rng(seed_bytes(pd_seed), "cli/partdec/" + std::to_string(sk.party));
    PartialDecryption nu = part_dec(e, sk.party, sk, p, rng);
    write_file_atomic(pd_out, serialize(nu, p));
    std::printf("wrote %s party=%d\n", pd_out.c_str(), sk.party);
    return 0;
  }

  if (*merge_cmd) {
    Params p = load_params_file(mg_params);
    ExpandedCiphertext e = load_expanded(read_file(mg_in), p);
    std::vector<PartialDecryption> parts;
    for (const std::string& path : mg_nu)
      parts.push_back(load_partdec(read_file(path), p));
    Plaintext pt = merge(e, parts, p);
    std::string text = "result scheme=" +
                       std::string(p.scheme == Scheme::BFV ? "bfv" : "ckks") +
                       " values=" + format_values(pt, mg_trunc) + "\n";
    emit(text, mg_out);
    return 0;
  }

  if (*attack_cmd) {
    SimConfig cfg;
    cfg.profile = at_profile;
    cfg.seed = seed_bytes(at_seed);
    cfg.n = at_n;
    cfg.m = at_n;
    cfg.d = at_d;
    cfg.f = at_f;
    World w = init_world(cfg);
    AttackReport rep = run_attack_round(w, at_mode == "cdks");
    emit(rep.to_text(), at_out);
    return 0;
  }

  if (*sim_cmd) {
    std::vector<std::uint8_t> cfg_bytes = read_file(si_config);
    SimConfig cfg = sim_config_from_kv(parse_kv_config(std::string(
        reinterpret_cast<const char*>(cfg_bytes.data()), cfg_bytes.size())));
    if (!si_seed.empty()) cfg.seed = seed_bytes(si_seed);
    if (!si_mode.empty()) cfg.cdks_mode = si_mode == "cdks";
    if (si_timings) cfg.timings = true;
    World w = init_world(cfg);
    std::string text;
    for (int r = 0; r < cfg.rounds; ++r) text += run_round(w).to_text();
    if (!cfg.elimination_rates.empty())
      text += elimination_table_text(
          client_elimination_sweep(w, cfg.elimination_rates));
    emit(text, si_out);
    return 0;
  }

  if (*bench_cmd) {
    Params p = setup(seed_bytes(be_seed), be_profile);
    XofRng rng(seed_bytes(be_seed), "cli/bench");
    std::string text;
    auto time_op = [&](const char* name, auto&& fn) {
      auto start = std::chrono::steady_clock::now();
      for (int r = 0; r < be_reps; ++r) fn();
      auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
      char buf[128];
      std::snprintf(buf, sizeof(buf), "record=bench op=%s reps=%d ns_per_op=%lld\n",
                    name, be_reps, static_cast<long long>(ns / be_reps));
      text += buf;
    };

    KeyTriple k1 = keygen(p, rng, 1);
    KeyTriple k2 = keygen(p, rng, 2);
    std::map<int, PublicKey> pks = {{1, k1.pk}, {2, k2.pk}};
    std::map<int, EvalKey> evks = {{1, k1.evk}, {2, k2.evk}};
    std::map<int, SecretKey> sks = {{1, k1.sk}, {2, k2.sk}};
    Plaintext pt;
    pt.scheme = p.scheme;
    if (p.scheme == Scheme::BFV)
      pt.ints.assign(p.N, 7 % p.t);
    else
      pt.reals.assign(p.N, 0.25);

    time_op("keygen", [&] { keygen(p, rng, 1); });
    CiphertextBundle b1 = encrypt(pt, k1, p, rng);
    CiphertextBundle b2 = encrypt(pt, k2, p, rng);
    time_op("encrypt", [&] { encrypt(pt, k1, p, rng); });
    ExpandedCiphertext e1 = expand(b1, 2);
    ExpandedCiphertext e2 = expand(b2, 2);
    time_op("expand", [&] { expand(b1, 2); });
    std::map<int, MaskMaterial> masks = {{1, b1.mask}, {2, b2.mask}};
    ExpandedCiphertext sum = add(e1, e2, pks, masks, p);
    time_op("add", [&] { add(e1, e2, pks, masks, p); });
    time_op("mult", [&] { mult(e1, e2, evks, p); });
    XofRng prng = rng.fork("bench/partdec");
    PartialDecryption nu1 = part_dec(sum, 1, k1.sk, p, prng);
    PartialDecryption nu2 = part_dec(sum, 2, k2.sk, p, prng);
    time_op("partdec", [&] { part_dec(sum, 1, k1.sk, p, prng); });
    std::vector<PartialDecryption> parts = {nu1, nu2};
    time_op("merge", [&] { merge(sum, parts, p); });
    time_op("serialize_expanded", [&] { serialize(sum, p); });
    emit(text, be_out);
    return 0;
  }

  return 2;  // unreachable: require_subcommand
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
