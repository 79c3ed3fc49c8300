#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spectra/io.hpp"

namespace py = pybind11;
using namespace spectra;

namespace {

ConvertOptions options(const std::string& mode, bool classify) {
  ConvertOptions o;
  if (mode == "float") o.mode = Mode::Float;
  else if (mode != "exact") throw ParseError("mode must be 'exact' or 'float'");
  o.classify = classify;
  return o;
}

// Instance JSON in, report JSON out.
std::string analyze(const std::string& instance, const std::string& mode,
                    const std::optional<std::string>& hints, bool classify) {
  const Instance inst = instance_from_json(json::parse(instance));
  ConvertOptions o = options(mode, classify);
  o.hints = inst.hints;
  if (hints) o.hints = hints_from_json(json::parse(*hints), inst.system.m(), inst.system.n);
  Certificate c;
  {
    py::gil_scoped_release release;
    c = convert(inst.system, o);
  }
  VerificationReport rep;
  if (c.verdict != Verdict::Undecided) rep = verify_certificate(inst.system, c);
  else rep.fail("verdict", "report", "no certificate");
  return certificate_to_json(c, rep, json{{"mode", mode}}).dump();
}

std::string verify(const std::string& instance, const std::string& report) {
  const Instance inst = instance_from_json(json::parse(instance));
  const Certificate c = certificate_from_json(json::parse(report));
  json out = report_verification(verify_certificate(inst.system, c));
  out["verdict"] = to_string(c.verdict);
  return out.dump();
}

std::string generate_instance(const std::string& kind, std::size_t n, std::size_t m,
                              std::optional<std::size_t> k, std::size_t p,
                              std::vector<std::size_t> block_sizes, long entry_bound,
                              std::uint64_t seed) {
  GenSpec s;
  s.kind = parse_gen_kind(kind);
  s.n = n;
  s.m = m;
  s.k = k;
  s.p = p;
  s.block_sizes = std::move(block_sizes);
  s.entry_bound = entry_bound;
  s.seed = seed;
  const GeneratedInstance g = generate(s);
  Instance inst;
  inst.system = g.system;
  inst.ground_truth = ground_truth_to_json(g);
  return instance_to_json(inst).dump();
}

std::string probe(const std::string& instance, const std::string& objective) {
  const Instance inst = instance_from_json(json::parse(instance));
  const Certificate c = convert(inst.system);
  if (c.verdict != Verdict::Feasible)
    throw ParseError("probe needs a feasible instance (verdict " + to_string(c.verdict) + ")");
  const SymMatrix cs = sym_from_json(json::parse(objective), inst.system.n);
  const DualityProbe pr = duality_probe(c.staircase, c.p, congruence(cs, c.transcript.V));
  json out = probe_to_json(pr);
  out["p"] = c.p;
  return out.dump();
}

std::string import_sdpa_text(const std::string& text) {
  std::istringstream in(text);
  Instance inst;
  inst.system = import_sdpa(in);
  return instance_to_json(inst).dump();
}

bool psd(const std::string& matrix) {
  const json j = json::parse(matrix);
  return is_psd(sym_from_json(j, j.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact staircase certificates for semidefinite feasibility systems (JSON in, JSON out).";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResampleExhausted>(m, "ResampleExhausted", PyExc_RuntimeError);
  py::register_exception<InvalidSpecError>(m, "InvalidSpecError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("analyze", &analyze, py::arg("instance"), py::arg("mode") = "exact",
        py::arg("hints") = py::none(), py::arg("classify") = true);
  m.def("verify", &verify, py::arg("instance"), py::arg("report"));
  m.def("generate", &generate_instance, py::arg("kind"), py::arg("n"), py::arg("m"),
        py::arg("k") = py::none(), py::arg("p") = 0,
        py::arg("block_sizes") = std::vector<std::size_t>{}, py::arg("entry_bound") = 3,
        py::arg("seed") = 0);
  m.def("probe", &probe, py::arg("instance"), py::arg("objective"));
  m.def("import_sdpa", &import_sdpa_text, py::arg("text"));
  m.def("is_psd", &psd, py::arg("matrix"));
  m.attr("__version__") = kToolVersion;
}
