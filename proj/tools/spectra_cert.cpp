// spectra-cert: analyze, verify, generate, probe, import-sdpa.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "spectra/io.hpp"

namespace fs = std::filesystem;
using namespace spectra;

namespace {

// Exit codes shared by every command.
enum Exit : int {
  kOk = 0,
  kRejected = 1,
  kUndecided = 2,
  kInfeasible = 3,
  kUsage = 64,
  kInternal = 70,
  kExhausted = 75,
};

struct AnalyzeFlags {
  std::string input;
  std::string mode = "exact";
  double tol_eq = 1e-9;
  double tol_pd = 1e-9;
  double tol_rank = 1e-7;
  int max_iters = 200;
  std::string max_denom = "1000000000000";
  std::string hints;
  std::string out;
  bool no_classify = false;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SPECTRA_CERT_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ParseError(std::string("SPECTRA_CERT_SEED is not an integer: ") + s);
    }
  }
  return 0;
}

std::vector<mpz_class> denominator_ladder(const std::string& text) {
  mpz_class cap;
  if (cap.set_str(text, 10) != 0 || cap < 1) throw ParseError("--max-denom must be a positive integer");
  std::vector<mpz_class> out;
  for (const auto& d : default_denominators())
    if (d <= cap) out.push_back(d);
  if (out.empty() || out.back() != cap) out.push_back(cap);
  return out;
}

ConvertOptions convert_options(const AnalyzeFlags& f) {
  ConvertOptions o;
  if (f.mode == "float") o.mode = Mode::Float;
  else if (f.mode != "exact") throw ParseError("--mode must be exact or float");
  o.tol.eq = f.tol_eq;
  o.tol.pd = f.tol_pd;
  o.tol.rank = f.tol_rank;
  o.tol.max_iterations = f.max_iters;
  o.denominators = denominator_ladder(f.max_denom);
  o.classify = !f.no_classify;
  return o;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return kOk;
    case Verdict::Infeasible: return kInfeasible;
    case Verdict::Undecided: return kUndecided;
  }
  return kInternal;
}

struct Analysis {
  Instance instance;
  Certificate cert;
  VerificationReport check;
  json report;
};

Analysis analyze_one(const std::string& path, const AnalyzeFlags& f, std::uint64_t seed) {
  Analysis a;
  a.instance = read_instance(path);
  ConvertOptions opts = convert_options(f);
  opts.hints = a.instance.hints;
  if (!f.hints.empty())
    opts.hints = hints_from_json(read_json_file(f.hints), a.instance.system.m(),
                                 a.instance.system.n);
  a.cert = convert(a.instance.system, opts);
  if (a.cert.verdict != Verdict::Undecided)
    a.check = verify_certificate(a.instance.system, a.cert);
  else
    a.check.fail("verdict", "report", "no certificate");

  json meta;
  meta["instance"] = fs::path(path).filename().string();
  meta["seed"] = seed;
  meta["mode"] = f.mode;
  meta["tolerances"] = {{"eq", f.tol_eq}, {"pd", f.tol_pd}, {"rank", f.tol_rank},
                        {"maxIterations", f.max_iters}, {"maxDenominator", f.max_denom}};
  meta["hinted"] = !opts.hints.empty();
  a.report = certificate_to_json(a.cert, a.check, meta);
  return a;
}

std::string summary(const Certificate& c) {
  std::string s = to_string(c.verdict);
  if (c.verdict == Verdict::Infeasible)
    s += " k=" + std::to_string(c.staircase.k) + " strength=" + to_string(c.strength);
  if (c.verdict == Verdict::Feasible)
    s += " p=" + std::to_string(c.p) + " k=" + std::to_string(c.staircase.k);
  return s;
}

int cmd_analyze(const AnalyzeFlags& f, std::uint64_t seed) {
  if (fs::is_directory(f.input)) {
    if (!f.hints.empty()) throw ParseError("--hints needs a single instance");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(f.input))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (!f.out.empty()) fs::create_directories(f.out);
    int worst = kOk;
    for (const auto& file : files) {
      int code;
      try {
        Analysis a = analyze_one(file.string(), f, seed);
        code = verdict_exit(a.cert.verdict);
        if (!f.out.empty())
          write_json_file((fs::path(f.out) / (file.stem().string() + ".report.json")).string(), a.report);
        std::cout << file.filename().string() << ": " << summary(a.cert) << '\n';
      } catch (const ParseError& e) {
        code = kUsage;
        std::cout << file.filename().string() << ": parse error: " << e.what() << '\n';
      }
      if (code == kUsage || (code == kUndecided && worst != kUsage)) worst = code;
    }
    return worst;
  }
  Analysis a = analyze_one(f.input, f, seed);
  if (f.out.empty())
    std::cout << a.report.dump(2) << '\n';
  else
    write_json_file(f.out, a.report);
  std::cerr << summary(a.cert) << '\n';
  return verdict_exit(a.cert.verdict);
}

int cmd_verify(const std::string& instance, const std::string& report) {
  const Instance inst = read_instance(instance);
  const json j = read_json_file(report);
  const Certificate cert = certificate_from_json(j);
  if (cert.verdict == Verdict::Undecided) {
    std::cout << json{{"status", "undecided"}}.dump(2) << '\n';
    return kUndecided;
  }
  const VerificationReport rep = verify_certificate(inst.system, cert);
  json out = report_verification(rep);
  out["verdict"] = to_string(cert.verdict);
  std::cout << out.dump(2) << '\n';
  return rep.accepted ? kOk : kRejected;
}

struct GenerateFlags {
  std::string spec_path;
  std::string kind = "infeasible";
  std::size_t n = 3, m = 2, p = 0, count = 1;
  std::optional<std::size_t> k;
  std::vector<std::size_t> blocks;
  long entry_bound = 3;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string prefix = "instance";
};

GenSpec spec_from_flags(const GenerateFlags& f, std::uint64_t seed) {
  GenSpec s;
  s.kind = parse_gen_kind(f.kind);
  s.n = f.n;
  s.m = f.m;
  s.k = f.k;
  s.p = f.p;
  s.block_sizes = f.blocks;
  s.entry_bound = f.entry_bound;
  s.seed = seed;
  if (!f.spec_path.empty()) {
    const json j = read_json_file(f.spec_path);
    if (j.contains("kind")) s.kind = parse_gen_kind(j["kind"].get<std::string>());
    if (j.contains("n")) s.n = j["n"].get<std::size_t>();
    if (j.contains("m")) s.m = j["m"].get<std::size_t>();
    if (j.contains("k") && !j["k"].is_null()) s.k = j["k"].get<std::size_t>();
    if (j.contains("p")) s.p = j["p"].get<std::size_t>();
    if (j.contains("blockSizes")) s.block_sizes = j["blockSizes"].get<std::vector<std::size_t>>();
    if (j.contains("entryBound")) s.entry_bound = j["entryBound"].get<long>();
    if (j.contains("seed") && !f.seed) s.seed = j["seed"].get<std::uint64_t>();
  }
  return s;
}

int cmd_generate(const GenerateFlags& f) {
  const GenSpec base = spec_from_flags(f, f.seed ? *f.seed : default_seed());
  fs::create_directories(f.out_dir);
  for (std::size_t i = 0; i < f.count; ++i) {
    GenSpec s = base;
    s.seed = batch_seed(base.seed, i);
    const GeneratedInstance g = generate(s);
    Instance inst;
    inst.system = g.system;
    inst.ground_truth = ground_truth_to_json(g);
    const std::string name = f.prefix + "-" + std::to_string(i) + ".json";
    write_json_file((fs::path(f.out_dir) / name).string(), instance_to_json(inst));
    std::cout << name << ": " << to_string(g.resolved.kind) << " k="
              << (g.resolved.k ? std::to_string(*g.resolved.k) : "-")
              << (g.resolved.kind == GenKind::WeaklyInfeasible
                      ? (g.confirmed ? " confirmed" : " unconfirmed")
                      : "")
              << '\n';
  }
  return kOk;
}

struct ProbeFlags {
  AnalyzeFlags analyze;
  std::string objective;
  std::optional<std::uint64_t> random_c;
  std::size_t count = 1;
  std::string report;
  std::string out;
};

// Objective files may hold the matrix directly or under "C".
const json& field_or_self(const json& j) { return j.is_object() && j.contains("C") ? j["C"] : j; }

SymMatrix random_objective(std::size_t n, std::uint64_t seed) {
  Sampler rng(seed);
  SymMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) c.set(i, j, rng.entry(5));
  return c;
}

int cmd_probe(const ProbeFlags& f) {
  if (f.objective.empty() == !f.random_c)
    throw ParseError("give exactly one of --objective or --random-C");
  const Instance inst = read_instance(f.analyze.input);
  Certificate cert;
  if (!f.report.empty()) {
    cert = certificate_from_json(read_json_file(f.report));
    if (!verify_certificate(inst.system, cert).accepted)
      throw ParseError("the supplied report does not verify against the instance");
  } else {
    ConvertOptions opts = convert_options(f.analyze);
    opts.hints = inst.hints;
    cert = convert(inst.system, opts);
  }
  if (cert.verdict == Verdict::Infeasible)
    throw ParseError("probe needs a feasible instance; this one is infeasible");
  if (cert.verdict == Verdict::Undecided) {
    std::cerr << "instance could not be decided\n";
    return kUndecided;
  }

  std::vector<SymMatrix> objectives;
  if (!f.objective.empty()) {
    objectives.push_back(sym_from_json(field_or_self(read_json_file(f.objective)), inst.system.n));
  } else {
    for (std::size_t i = 0; i < f.count; ++i)
      objectives.push_back(random_objective(inst.system.n, batch_seed(*f.random_c, i)));
  }

  ToleranceProfile tol = convert_options(f.analyze).tol;
  json probes = json::array();
  bool failed = false;
  for (const auto& c : objectives) {
    // C . (V X V^T) = (V^T C V) . X
    const SymMatrix reduced = congruence(c, cert.transcript.V);
    DualityProbe pr = duality_probe(cert.staircase, cert.p, reduced, tol);
    failed = failed || pr.numeric_failure;
    json e = probe_to_json(pr);
    e["C"] = matrix_to_json(c.matrix());
    e["CReduced"] = matrix_to_json(reduced.matrix());
    probes.push_back(std::move(e));
  }
  json out;
  out["schemaVersion"] = kSchemaVersion;
  out["kind"] = "duality-probe";
  out["label"] = "float demonstration, not an exact proof";
  out["p"] = cert.p;
  out["k"] = cert.staircase.k;
  out["probes"] = std::move(probes);
  out["metadata"] = {{"tool", kToolName}, {"version", kToolVersion},
                     {"seed", f.random_c ? json(*f.random_c) : json(nullptr)}};
  out["timestamp"] = utc_timestamp();
  if (f.out.empty())
    std::cout << out.dump(2) << '\n';
  else
    write_json_file(f.out, out);
  return failed ? kUndecided : kOk;
}

int cmd_import(const std::string& path, const std::string& out) {
  Instance inst;
  inst.system = import_sdpa_file(path);
  const json j = instance_to_json(inst);
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(out, j);
  return kOk;
}

void add_solver_flags(CLI::App* cmd, AnalyzeFlags& f) {
  cmd->add_option("--mode", f.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--tol-eq", f.tol_eq, "equality residual tolerance");
  cmd->add_option("--tol-pd", f.tol_pd, "strict positivity tolerance");
  cmd->add_option("--tol-rank", f.tol_rank, "numeric rank cut");
  cmd->add_option("--max-iters", f.max_iters, "interior-point iteration cap");
  cmd->add_option("--max-denom", f.max_denom, "largest rounding denominator");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact staircase certificates for semidefinite feasibility systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  AnalyzeFlags af;
  auto* analyze = app.add_subcommand("analyze", "decide feasibility and emit a certificate");
  analyze->add_option("instance", af.input, "instance file or directory")->required();
  add_solver_flags(analyze, af);
  analyze->add_option("--hints", af.hints, "hint file (y vectors and rotations)");
  analyze->add_option("--out", af.out, "report file (directory in batch mode)");
  analyze->add_flag("--no-classify", af.no_classify, "skip strong/weak classification");
  std::optional<std::uint64_t> analyze_seed;
  analyze->add_option("--seed", analyze_seed, "seed recorded in the report");

  std::string v_instance, v_report;
  auto* verify = app.add_subcommand("verify", "re-check a report against its instance");
  verify->add_option("instance", v_instance)->required();
  verify->add_option("report", v_report)->required();

  GenerateFlags gf;
  auto* gen = app.add_subcommand("generate", "write random instances with known answers");
  gen->add_option("spec", gf.spec_path, "optional JSON generator spec");
  gen->add_option("--kind", gf.kind)
      ->check(CLI::IsMember({"infeasible", "feasible", "strongly-infeasible", "weakly-infeasible"}));
  gen->add_option("--n", gf.n);
  gen->add_option("--m", gf.m);
  gen->add_option("--k", gf.k);
  gen->add_option("--p", gf.p);
  gen->add_option("--block-sizes", gf.blocks);
  gen->add_option("--count", gf.count);
  gen->add_option("--seed", gf.seed);
  gen->add_option("--entry-bound", gf.entry_bound);
  gen->add_option("--out-dir", gf.out_dir);
  gen->add_option("--prefix", gf.prefix);

  ProbeFlags pf;
  auto* probe = app.add_subcommand("probe", "float duality-gap demonstration on a feasible instance");
  probe->add_option("instance", pf.analyze.input)->required();
  probe->add_option("--objective", pf.objective, "JSON file with a symmetric C");
  probe->add_option("--random-C", pf.random_c, "seed for random objectives");
  probe->add_option("--count", pf.count, "number of random objectives");
  probe->add_option("--report", pf.report, "reuse an analyze report");
  probe->add_option("--out", pf.out);
  add_solver_flags(probe, pf.analyze);

  std::string sdpa_in, sdpa_out;
  auto* imp = app.add_subcommand("import-sdpa", "convert an SDPA sparse file to an instance");
  imp->add_option("file", sdpa_in)->required();
  imp->add_option("--out", sdpa_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(af, analyze_seed ? *analyze_seed : default_seed());
    if (*verify) return cmd_verify(v_instance, v_report);
    if (*gen) return cmd_generate(gf);
    if (*probe) return cmd_probe(pf);
    if (*imp) return cmd_import(sdpa_in, sdpa_out);
  } catch (const ResampleExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExhausted;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidSpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
