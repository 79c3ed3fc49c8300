#include "spectra/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace spectra {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t size_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    bad(std::string("field '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<std::size_t> sizes_from_json(const json& j) {
  if (!j.is_array()) bad("blockSizes must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) bad("block sizes must be nonnegative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

json float_matrix_to_json(const Eigen::MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd float_matrix_from_json(const json& j) {
  if (!j.is_array()) bad("expected a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) bad("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) a(i, c) = j[i][c].get<double>();
  }
  return a;
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "infeasible") return Verdict::Infeasible;
  if (s == "feasible") return Verdict::Feasible;
  if (s == "undecided") return Verdict::Undecided;
  bad("unknown verdict '" + s + "'");
}

Strength strength_from_string(const std::string& s) {
  if (s == "strong") return Strength::Strong;
  if (s == "weak") return Strength::Weak;
  if (s == "weak-unconfirmed") return Strength::WeakUnconfirmed;
  bad("unknown strength '" + s + "'");
}

// SDPA treats ",(){}" as whitespace.
std::string sdpa_clean(std::string line) {
  for (char& c : line)
    if (c == ',' || c == '(' || c == ')' || c == '{' || c == '}') c = ' ';
  return line;
}

long long sdpa_int(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    bad(std::string("SDPA: expected an integer for ") + what + ", found '" + tok + "'");
  }
}

}  // namespace

json rational_to_json(const Rational& x) { return to_string(x); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  bad("rationals must be \"p/q\" strings or integers, found " + j.dump());
}

json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(rational_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    bad("expected a " + std::to_string(rows) + " x " + std::to_string(cols) + " matrix");
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      bad("row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) a(i, c) = rational_from_json(j[i][c]);
  }
  return a;
}

SymMatrix sym_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) bad("expected " + std::to_string(n) + " rows");
  bool upper = n > 1;
  for (std::size_t i = 0; i < n && upper; ++i)
    upper = j[i].is_array() && j[i].size() == n - i;
  if (!upper) {
    Matrix a = matrix_from_json(j, n, n);
    if (!a.is_symmetric()) bad("matrix is not symmetric");
    return SymMatrix(std::move(a));
  }
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = i; c < n; ++c) a.set(i, c, rational_from_json(j[i][c - i]));
  return a;
}

json vector_to_json(const RatVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(rational_to_json(x));
  return out;
}

RatVector vector_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  RatVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

json system_to_json(const SdpSystem& s) {
  json out;
  out["n"] = s.n;
  out["m"] = s.m();
  json a = json::array();
  for (const auto& ai : s.A) a.push_back(matrix_to_json(ai.matrix()));
  out["A"] = std::move(a);
  out["b"] = vector_to_json(s.b);
  return out;
}

SdpSystem system_from_json(const json& j) {
  SdpSystem s;
  s.n = size_field(j, "n");
  const std::size_t m = size_field(j, "m");
  const json& a = field(j, "A");
  if (!a.is_array() || a.size() != m)
    bad("A must list m = " + std::to_string(m) + " matrices");
  for (std::size_t i = 0; i < m; ++i) {
    try {
      s.A.push_back(sym_from_json(a[i], s.n));
    } catch (const ParseError& e) {
      bad("A[" + std::to_string(i) + "]: " + e.what());
    }
  }
  s.b = vector_from_json(field(j, "b"));
  if (s.b.size() != m) bad("b must have m = " + std::to_string(m) + " entries");
  try {
    s.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    bad(e.what());
  }
  return s;
}

std::vector<IterationHint> hints_from_json(const json& j, std::size_t m,
                                           std::size_t n) {
  const json& list = j.is_object() ? field(j, "hints") : j;
  if (!list.is_array()) bad("hints must be an array");
  std::vector<IterationHint> out;
  for (const auto& h : list) {
    IterationHint hint;
    hint.y = vector_from_json(field(h, "y"));
    if (hint.y.size() != m) bad("hint y must have m = " + std::to_string(m) + " entries");
    if (h.contains("rotation") && !h["rotation"].is_null()) {
      const json& r = h["rotation"];
      if (!r.is_array()) bad("rotation must be a matrix");
      const std::size_t q = r.size();
      if (q > n) bad("rotation larger than n");
      hint.rotation = matrix_from_json(r, q, q);
    }
    out.push_back(std::move(hint));
  }
  return out;
}

json instance_to_json(const Instance& inst) {
  json out;
  out["schemaVersion"] = kSchemaVersion;
  const json sys = system_to_json(inst.system);
  for (const auto& [k, v] : sys.items()) out[k] = v;
  if (!inst.hints.empty()) {
    json hs = json::array();
    for (const auto& h : inst.hints) {
      json e;
      e["y"] = vector_to_json(h.y);
      if (h.rotation) e["rotation"] = matrix_to_json(*h.rotation);
      hs.push_back(std::move(e));
    }
    out["hints"] = std::move(hs);
  }
  if (inst.ground_truth) out["ground_truth"] = *inst.ground_truth;
  return out;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) bad("instance must be a JSON object");
  if (j.contains("schemaVersion") && j["schemaVersion"] != kSchemaVersion)
    bad("unsupported schemaVersion " + j["schemaVersion"].dump());
  Instance inst;
  inst.system = system_from_json(j);
  if (j.contains("hints"))
    inst.hints = hints_from_json(j["hints"], inst.system.m(), inst.system.n);
  if (j.contains("ground_truth")) inst.ground_truth = j["ground_truth"];
  return inst;
}

Instance read_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}

json ground_truth_to_json(const GeneratedInstance& g) {
  json spec;
  spec["kind"] = to_string(g.resolved.kind);
  spec["n"] = g.resolved.n;
  spec["m"] = g.resolved.m;
  spec["k"] = g.resolved.k ? json(*g.resolved.k) : json(nullptr);
  spec["p"] = g.resolved.p;
  spec["blockSizes"] = g.resolved.block_sizes;
  spec["entryBound"] = g.resolved.entry_bound;
  spec["seed"] = g.resolved.seed;

  json out;
  out["generator"] = {{"tool", kToolName}, {"version", kToolVersion}, {"prng", kPrngId}};
  out["spec"] = std::move(spec);
  out["confirmed"] = g.confirmed;
  out["attempts"] = g.attempts;
  out["certificate"] = certificate_to_json(g.truth, VerificationReport{}, json::object());
  out["certificate"].erase("verification");
  out["certificate"].erase("diagnostics");
  out["certificate"].erase("timestamp");
  return out;
}

json report_verification(const VerificationReport& rep) {
  json out;
  out["accepted"] = rep.accepted;
  out["checkedExactly"] = rep.checked_exactly;
  out["status"] = !rep.accepted ? "rejected" : rep.checked_exactly ? "accepted" : "toleranced";
  if (!rep.block_style.empty()) out["blockStyle"] = rep.block_style;
  json f = json::array();
  for (const auto& x : rep.failures)
    f.push_back({{"check", x.check}, {"location", x.location}, {"detail", x.detail}});
  out["failures"] = std::move(f);
  return out;
}

json certificate_to_json(const Certificate& cert, const VerificationReport& rep,
                         const json& metadata) {
  const StaircaseForm& sf = cert.staircase;
  json out;
  out["schemaVersion"] = kSchemaVersion;
  out["verdict"] = to_string(cert.verdict);
  if (cert.verdict != Verdict::Undecided) {
    out["k"] = sf.k;
    out["blockSizes"] = sf.block_sizes;
    out["blockStyle"] = to_string(sf.style);
  }
  if (cert.verdict == Verdict::Infeasible) {
    out["strength"] = to_string(cert.strength);
    out["farkasRay"] = cert.farkas_ray ? vector_to_json(*cert.farkas_ray) : json(nullptr);
  }
  if (cert.verdict == Verdict::Feasible) {
    out["p"] = cert.p;
    out["X"] = cert.X ? matrix_to_json(cert.X->matrix()) : json(nullptr);
    out["XOriginal"] = cert.X_source ? matrix_to_json(cert.X_source->matrix()) : json(nullptr);
  }
  if (cert.verdict != Verdict::Undecided) {
    out["system"] = system_to_json(sf.system);
    json t;
    t["mode"] = to_string(cert.transcript.mode);
    t["certifying"] = cert.transcript.mode == Mode::Exact;
    t["T"] = matrix_to_json(cert.transcript.T);
    t["V"] = matrix_to_json(cert.transcript.V);
    if (cert.transcript.V_float) t["VFloat"] = float_matrix_to_json(*cert.transcript.V_float);
    out["transcript"] = std::move(t);
    if (sf.normalized) {
      json nm = json::array();
      for (const auto& a : sf.normalized->A) nm.push_back(float_matrix_to_json(a));
      out["normalized"] = {{"A", std::move(nm)},
                           {"b", std::vector<double>(sf.normalized->b.data(),
                                                     sf.normalized->b.data() + sf.normalized->b.size())}};
    }
  }
  out["verification"] = report_verification(rep);

  json iters = json::array();
  for (const auto& l : cert.diagnostics.iterations) {
    json e;
    e["ell"] = l.ell;
    e["r"] = l.r;
    e["phase"] = l.phase;
    e["outcome"] = l.outcome;
    e["solverIterations"] = l.solver_iterations;
    e["objective"] = l.objective;
    e["primalResidual"] = l.primal_residual;
    e["dualResidual"] = l.dual_residual;
    if (!l.denominator.empty()) e["denominator"] = l.denominator;
    iters.push_back(std::move(e));
  }
  out["diagnostics"] = {{"iterations", std::move(iters)},
                        {"messages", cert.diagnostics.messages}};
  json meta = metadata.is_object() ? metadata : json::object();
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  out["metadata"] = std::move(meta);
  out["timestamp"] = utc_timestamp();
  return out;
}

Certificate certificate_from_json(const json& j) {
  if (!j.is_object()) bad("report must be a JSON object");
  Certificate c;
  c.verdict = verdict_from_string(field(j, "verdict").get<std::string>());
  if (c.verdict == Verdict::Undecided) return c;
  c.staircase.k = size_field(j, "k");
  c.staircase.block_sizes = sizes_from_json(field(j, "blockSizes"));
  if (j.contains("blockStyle"))
    c.staircase.style = j["blockStyle"] == "identity" ? BlockStyle::Identity
                                                      : BlockStyle::PositiveDiagonal;
  c.staircase.system = system_from_json(field(j, "system"));
  const std::size_t n = c.staircase.system.n, m = c.staircase.system.m();
  const json& t = field(j, "transcript");
  c.transcript.mode = field(t, "mode") == "float" ? Mode::Float : Mode::Exact;
  c.transcript.T = matrix_from_json(field(t, "T"), m, m);
  c.transcript.V = matrix_from_json(field(t, "V"), n, n);
  if (t.contains("VFloat")) c.transcript.V_float = float_matrix_from_json(t["VFloat"]);
  if (c.verdict == Verdict::Infeasible) {
    if (j.contains("strength")) c.strength = strength_from_string(j["strength"].get<std::string>());
    if (j.contains("farkasRay") && !j["farkasRay"].is_null())
      c.farkas_ray = vector_from_json(j["farkasRay"]);
  } else {
    c.p = size_field(j, "p");
    const json& x = field(j, "X");
    if (!x.is_null()) c.X = sym_from_json(x, n);
    if (j.contains("XOriginal") && !j["XOriginal"].is_null())
      c.X_source = sym_from_json(j["XOriginal"], n);
  }
  return c;
}

VerificationReport verify_certificate(const SdpSystem& source, const Certificate& cert) {
  VerificationReport rep;
  if (cert.verdict == Verdict::Undecided) {
    rep.fail("verdict", "report", "undecided reports carry no certificate");
    return rep;
  }
  if (cert.verdict == Verdict::Infeasible) {
    rep.merge(replay_infeasibility(cert.staircase));
    if (cert.farkas_ray) rep.merge(verify_farkas_ray(source, *cert.farkas_ray));
  } else if (!cert.X) {
    rep.fail("witness-shape", "X", "feasible report without a witness");
  } else {
    rep.merge(check_max_rank(cert.staircase, *cert.X, cert.p));
    if (cert.X_source) {
      const Matrix& v = cert.transcript.V;
      if (source.n != cert.X_source->order() ||
          !(v * cert.X->matrix() * v.transpose() == cert.X_source->matrix()))
        rep.fail("witness-source", "XOriginal", "XOriginal != V X V^T");
      else
        for (std::size_t i = 0; i < source.m(); ++i)
          if (dot(source.A[i], *cert.X_source) != source.b[i])
            rep.fail("witness-source", "A" + std::to_string(i + 1), "A . XOriginal != b");
    }
  }
  rep.merge(verify_transcript(source, cert.staircase.system, cert.transcript));
  return rep;
}

json probe_to_json(const DualityProbe& probe) {
  auto num = [](double v) -> json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
  };
  json out;
  out["C"] = matrix_to_json(probe.C.matrix());
  out["primal"] = num(probe.primal_value);
  out["dual"] = num(probe.dual_value);
  out["gap"] = num(probe.gap);
  out["unbounded"] = probe.unbounded;
  out["numericFailure"] = probe.numeric_failure;
  out["exact"] = false;
  if (!probe.note.empty()) out["note"] = probe.note;
  return out;
}

SdpSystem import_sdpa(std::istream& in) {
  std::vector<std::string> toks;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header && (line.empty() || line[0] == '"' || line[0] == '*')) continue;
    header = false;
    std::istringstream ls(sdpa_clean(line));
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '"' || tok[0] == '*' || tok[0] == '=') break;  // trailing comment
      toks.push_back(tok);
    }
  }
  if (toks.empty()) bad("SDPA: empty file");
  std::size_t pos = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (pos >= toks.size()) bad(std::string("SDPA: unexpected end of file reading ") + what);
    return toks[pos++];
  };

  const long long m = sdpa_int(next("mDIM"), "mDIM");
  if (m < 0) bad("SDPA: negative mDIM");
  const long long blocks = sdpa_int(next("nBLOCK"), "nBLOCK");
  if (blocks != 1)
    bad("SDPA: only a single psd block is supported (nBLOCK = " + std::to_string(blocks) + ")");
  const long long size = sdpa_int(next("bLOCKsTRUCT"), "bLOCKsTRUCT");
  if (size < 0) bad("SDPA: diagonal (LP) blocks are not supported");
  if (size == 0) bad("SDPA: block size must be positive");

  SdpSystem s;
  s.n = static_cast<std::size_t>(size);
  for (long long i = 0; i < m; ++i) s.b.push_back(parse_rational(next("c")));
  s.A.assign(static_cast<std::size_t>(m), SymMatrix(s.n));
  while (pos < toks.size()) {
    const long long mat = sdpa_int(next("matno"), "matno");
    const long long blk = sdpa_int(next("blkno"), "blkno");
    const long long i = sdpa_int(next("i"), "i");
    const long long j = sdpa_int(next("j"), "j");
    const Rational v = parse_rational(next("value"));
    if (mat < 0 || mat > m) bad("SDPA: matrix number " + std::to_string(mat) + " out of range");
    if (blk != 1) bad("SDPA: block number " + std::to_string(blk) + " out of range");
    if (i < 1 || j < 1 || i > size || j > size)
      bad("SDPA: entry (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    if (mat == 0) continue;  // objective
    s.A[static_cast<std::size_t>(mat - 1)].set(static_cast<std::size_t>(i - 1),
                                               static_cast<std::size_t>(j - 1), v);
  }
  return s;
}

SdpSystem import_sdpa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  return import_sdpa(in);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace spectra
