#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "loewner/decompose.h"
#include "loewner/effects.h"
#include "loewner/harness.h"
#include "loewner/json_io.h"
#include "loewner/projections.h"
#include "subprocess_map.h"

namespace loewner::cli {
namespace {

// Usage-level problems: bad flags, unreadable or malformed inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

double ParsePositive(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || !std::isfinite(v) || v <= 0.0) {
    throw UsageError(what + ": expected a positive number, got '" + text + "'");
  }
  return v;
}

Tolerances TolerancesFromEnv() {
  Tolerances tol;
  const std::pair<const char*, double*> vars[] = {
      {"LOEWNER_TOL_PSD", &tol.psd},
      {"LOEWNER_TOL_HERM", &tol.herm},
      {"LOEWNER_TOL_EQ", &tol.eq},
      {"LOEWNER_TOL_RANK", &tol.rank}};
  for (const auto& [name, field] : vars) {
    if (const char* v = std::getenv(name)) *field = ParsePositive(v, name);
  }
  return tol;
}

std::vector<int> ParseBlocks(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || v < 1) {
      throw UsageError("block list must look like 2,3");
    }
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw UsageError("block list is empty");
  return out;
}

void Emit(const Json& j, const std::string& out_path, std::ostream& out) {
  const std::string text = DumpJson(j) + "\n";
  if (out_path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot write '" + out_path + "'");
  f << text;
}

Element ReadElement(const std::string& path, const Tolerances& tol) {
  return ElementFromJson(ReadJsonFile(path), tol);
}

// --- commands ---------------------------------------------------------------

int CmdOrder(const std::string& a_path, const std::string& b_path,
             const std::string& out_path, const Tolerances& tol,
             std::ostream& out) {
  const Element a = ReadElement(a_path, tol).AsHermitian(tol);
  const Element b = ReadElement(b_path, tol).AsHermitian(tol);
  RequireSameAlgebra(a, b);
  const Json j{{"leq", Leq(a, b, tol)},
               {"geq", Leq(b, a, tol)},
               {"strict_lt", LtStrict(a, b, tol)},
               {"strict_gt", LtStrict(b, a, tol)},
               {"min_eigenvalue", MinEigenvalue((b - a).AsHermitian())}};
  Emit(j, out_path, out);
  return kExitOk;
}

int CmdHomo(double t, const std::string& blocks, int samples,
            std::uint64_t seed, const std::string& out_path,
            const Tolerances& tol, std::ostream& out) {
  if (!(t >= 0.0 && t <= 1.0)) throw UsageError("--t must lie in [0, 1]");
  if (samples < 0) throw UsageError("--samples must be non-negative");
  Rng rng(seed);
  const HomoCertificate cert =
      MakeHomoCertificate(t, Algebra(ParseBlocks(blocks)), rng, samples, tol);
  Emit(ToJson(cert), out_path, out);
  return cert.Passed() ? kExitOk : kExitFailure;
}

int CmdOrth(const std::string& p_path, const std::string& q_path,
            const std::string& out_path, const Tolerances& tol,
            std::ostream& out) {
  const Element p = ReadElement(p_path, tol);
  const Element q = ReadElement(q_path, tol);
  RequireSameAlgebra(p, q);
  if (!IsProjection(p, tol) || !IsProjection(q, tol)) {
    throw UsageError("lemma orth needs two projections");
  }
  const bool by_order = OrthByOrder(p, q, tol);
  const bool direct = OrthogonalDirect(p, q, tol);
  const Json j{{"orthogonal_by_order", by_order},
               {"orthogonal_direct", direct},
               {"agree", by_order == direct},
               {"inf_p_sup_q_half", ToJson(InfPWithHalfSup(p, q, tol))},
               {"position", ToJson(TwoProjectionPositionOf(p, q, tol))}};
  Emit(j, out_path, out);
  return by_order == direct ? kExitOk : kExitFailure;
}

int CmdMapEval(const std::string& map_path, const std::string& x_path,
               bool inverse, const std::string& out_path,
               const Tolerances& tol, std::ostream& out) {
  const OrderIsoExpr expr = ExprFromJson(ReadJsonFile(map_path), tol);
  const Element x = ReadElement(x_path, tol);
  const Element y =
      inverse ? InverseMap(expr, tol)(x.AsHermitian(tol)) : Evaluate(expr, x, tol);
  Emit(ToJson(y), out_path, out);
  return kExitOk;
}

int CmdMapServe(const std::string& map_path, bool inverse,
                const Tolerances& tol, std::istream& in, std::ostream& out) {
  const OrderIsoExpr expr = ExprFromJson(ReadJsonFile(map_path), tol);
  const ElementMap map = inverse ? InverseMap(expr, tol)
                                 : ElementMap([expr, tol](const Element& a) {
                                     return Evaluate(expr, a, tol);
                                   });
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Element x = ElementFromJson(ParseJson(line), tol);
      out << DumpJson(ToJson(map(x.AsHermitian(tol))), -1) << "\n";
    } catch (const Error& e) {
      out << DumpJson(Json{{"error", e.what()}}, -1) << "\n";
    }
    out.flush();
  }
  return kExitOk;
}

const std::set<std::string> kCommandFields = {
    "kind", "argv", "inverse_argv", "source", "target", "source_interval",
    "target_interval"};

IntervalKind DefaultKind(const std::string& kind) {
  if (kind == "cone") return IntervalKind::kCone;
  if (kind == "sa") return IntervalKind::kSa;
  return IntervalKind::kEffect;
}

std::vector<std::string> StringList(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(std::string(what) + " must be a non-empty string list");
  }
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw ParseError(std::string(what) + ": not a string");
    out.push_back(s.get<std::string>());
  }
  return out;
}

IntervalKind KindField(const Json& j, const char* key, IntervalKind fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return ParseIntervalKind(j[key].get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(std::string(key) + ": " + e.what());
  }
}

BlackBoxMap LoadBlackBox(const Json& j, const std::string& kind,
                         const std::string& blocks, std::uint64_t seed,
                         const Tolerances& tol, std::string& mode) {
  if (j.is_object() && j.value("kind", "") == "command") {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!kCommandFields.count(it.key())) {
        throw ParseError("unknown field '" + it.key() + "' in command map");
      }
    }
    mode = "command";
    const Algebra source = AlgebraFromJson(j.at("source"));
    const Algebra target =
        j.contains("target") ? AlgebraFromJson(j["target"]) : source;
    const IntervalKind sk = KindField(j, "source_interval", DefaultKind(kind));
    const IntervalKind tk = KindField(j, "target_interval", sk);
    ElementMap inverse;
    if (j.contains("inverse_argv")) {
      inverse = SubprocessCallback(StringList(j["inverse_argv"], "inverse_argv"),
                                   tol);
    }
    Rng rng(seed);
    return MakeBlackBox(source, target, sk, tk,
                        SubprocessCallback(StringList(j.at("argv"), "argv"), tol),
                        inverse, rng, 10, tol);
  }
  mode = "expression";
  const OrderIsoExpr expr = ExprFromJson(j, tol);
  std::optional<Algebra> source = expr.SourceAlgebra();
  if (!blocks.empty()) source = Algebra(ParseBlocks(blocks));
  if (!source) {
    throw UsageError("map carries no algebra; pass --algebra");
  }
  return BlackBoxFromExpr(expr, *source, tol);
}

int CmdDecompose(const std::string& kind, const std::string& phi_path,
                 const std::string& blocks, std::uint64_t seed, int samples,
                 int grid, const std::string& out_path, const Tolerances& tol,
                 std::ostream& out) {
  const Json spec = ReadJsonFile(phi_path);
  std::string mode;
  Json report{{"command", "decompose"}, {"kind", kind}};
  std::optional<BlackBoxMap> phi;
  try {
    phi = LoadBlackBox(spec, kind, blocks, seed, tol, mode);
  } catch (const CertificateError& e) {
    report["mode"] = "command";
    report["passed"] = false;
    report["error"] = e.what();
    Emit(report, out_path, out);
    return kExitFailure;
  }
  report["mode"] = mode;
  const bool comm = kind == "comm";
  if (!comm && (phi->source_kind != DefaultKind(kind) ||
                phi->target_kind != phi->source_kind)) {
    throw UsageError("map intervals do not match 'decompose " + kind + "'");
  }
  if (kind == "cone" && !phi->has_inverse()) {
    throw UsageError("decompose cone needs an invertible map");
  }
  DecomposeOptions options;
  options.seed = seed;
  options.validation_samples = samples;
  options.tol = tol;
  Json residuals;
  Json record;
  try {
    if (kind == "effect") {
      const EffectDecomposition d = DecomposeEffectIso(*phi, options);
      record = ToJson(d);
      residuals = Json{{"residual", d.residual},
                       {"linearity_residual", d.J.linearity_residual},
                       {"jordan_residual", d.J.jordan_residual},
                       {"unital_residual", d.J.unital_residual}};
    } else if (kind == "cone") {
      const ConeDecomposition d = DecomposeConeIso(*phi, options);
      record = ToJson(d);
      residuals = Json{{"residual", d.residual},
                       {"b_square_residual", d.b_square_residual},
                       {"linearity_residual", d.J.linearity_residual},
                       {"jordan_residual", d.J.jordan_residual}};
    } else if (kind == "sa") {
      const SaDecomposition d = DecomposeSaIso(*phi, options);
      record = ToJson(d);
      residuals = Json{{"residual", d.residual},
                       {"b_square_residual", d.b_square_residual},
                       {"linearity_residual", d.J.linearity_residual},
                       {"jordan_residual", d.J.jordan_residual}};
    } else {
      CommOptions copts;
      copts.seed = seed;
      copts.validation_samples = samples;
      copts.grid = grid;
      copts.tol = tol;
      const CommDecomposition d = DecomposeCommutative(*phi, copts);
      record = ToJson(d);
      residuals = Json{{"residual", d.residual}};
    }
  } catch (const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    report["passed"] = false;
    report["error"] = e.what();
    Emit(report, out_path, out);
    return kExitFailure;
  }
  report["passed"] = true;
  report["residuals"] = residuals;
  report["decomposition"] = record;
  Emit(report, out_path, out);
  return kExitOk;
}

int CmdFuzz(const std::string& suite, int trials, std::uint64_t seed,
            const std::string& pool, const std::string& out_path,
            const Tolerances& tol, std::ostream& out) {
  if (trials < 0) throw UsageError("--trials must be non-negative");
  const auto& names = SuiteNames();
  if (suite != "all" &&
      std::find(names.begin(), names.end(), suite) == names.end()) {
    throw UsageError("unknown suite '" + suite + "'");
  }
  TrialConfig config;
  config.seed = seed;
  config.trials = trials;
  config.tol = tol;
  if (!pool.empty()) {
    const Json j = ParseJson(pool);
    if (!j.is_array()) throw UsageError("--pool must be a JSON list of block lists");
    for (const auto& sig : j) {
      config.algebra_pool.push_back(AlgebraFromJson(Json{{"blocks", sig}}).blocks());
    }
  }
  const Json report = RunSuites(suite, config);
  Emit(report, out_path, out);
  return report["passed"].get<bool>() ? kExitOk : kExitFailure;
}

int CmdStaircase(const std::string& a_path, int n, const std::string& out_path,
                 const Tolerances& tol, std::ostream& out) {
  if (n < 1) throw UsageError("--n must be positive");
  const Element a = ReadElement(a_path, tol);
  Json j;
  try {
    j = ToJson(SpectralStaircase(a, n, tol));
    j["certified"] = true;
  } catch (const CertificateError& e) {
    Emit(Json{{"certified", false}, {"error", e.what()}}, out_path, out);
    return kExitFailure;
  }
  Emit(j, out_path, out);
  return kExitOk;
}

const std::set<std::string> kManifestFields = {"schema", "command", "inputs",
                                               "args",   "tolerances", "seed",
                                               "out"};

// Manifest -> command line, tolerance overrides applied to `tol`.
std::vector<std::string> ManifestArgs(const std::string& path, Tolerances& tol) {
  const Json m = ReadJsonFile(path);
  if (!m.is_object()) throw ParseError("manifest must be an object");
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (!kManifestFields.count(it.key())) {
      throw ParseError("unknown manifest field '" + it.key() + "'");
    }
  }
  if (m.value("schema", "") != "v1") {
    throw ParseError("manifest schema must be \"v1\"");
  }
  std::vector<std::string> args = StringList(m.at("command"), "command");
  if (m.contains("inputs")) {
    for (auto& s : StringList(m["inputs"], "inputs")) args.push_back(s);
  }
  if (m.contains("args")) {
    for (auto& s : StringList(m["args"], "args")) args.push_back(s);
  }
  if (m.contains("seed")) {
    if (!m["seed"].is_number_unsigned()) {
      throw ParseError("manifest seed must be a non-negative integer");
    }
    args.push_back("--seed");
    args.push_back(std::to_string(m["seed"].get<std::uint64_t>()));
  }
  if (m.contains("out")) {
    if (!m["out"].is_string()) throw ParseError("manifest out must be a string");
    args.push_back("--out");
    args.push_back(m["out"].get<std::string>());
  }
  if (m.contains("tolerances")) {
    const Json& t = m["tolerances"];
    if (!t.is_object()) throw ParseError("manifest tolerances must be an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      double* field = it.key() == "psd"    ? &tol.psd
                      : it.key() == "herm" ? &tol.herm
                      : it.key() == "eq"   ? &tol.eq
                      : it.key() == "rank" ? &tol.rank
                                           : nullptr;
      if (!field) throw ParseError("unknown tolerance '" + it.key() + "'");
      if (!it.value().is_number() || !(it.value().get<double>() > 0.0)) {
        throw ParseError("tolerance '" + it.key() + "' must be positive");
      }
      *field = it.value().get<double>();
    }
  }
  return args;
}

int Run(std::vector<std::string> args, Tolerances tol, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Order isomorphisms between operator intervals", "loewner"};
  app.require_subcommand(1);
  std::string out_path;
  std::string manifest;
  app.add_option("--manifest", manifest, "Run the command described by a v1 manifest");

  auto* order = app.add_subcommand("order", "Compare two elements");
  std::string a_path, b_path;
  order->add_option("a", a_path)->required();
  order->add_option("b", b_path)->required();
  order->add_option("--out", out_path);

  auto* lemma = app.add_subcommand("lemma", "Certificates for projection lemmas");
  lemma->require_subcommand(1);
  auto* homo = lemma->add_subcommand("homo", "inf{p, sup{q, 1/2}} certificate");
  double t = 0.0;
  std::string blocks = "1";
  int samples = 16;
  std::uint64_t seed = 0;
  homo->add_option("--t", t)->required();
  homo->add_option("--blocks", blocks, "Base algebra, e.g. 1 or 2,1");
  homo->add_option("--samples", samples);
  homo->add_option("--seed", seed);
  homo->add_option("--out", out_path);
  auto* orth = lemma->add_subcommand("orth", "Orthogonality through the order");
  orth->add_option("p", a_path)->required();
  orth->add_option("q", b_path)->required();
  orth->add_option("--out", out_path);

  auto* map = app.add_subcommand("map", "Evaluate map expressions");
  map->require_subcommand(1);
  bool inverse = false;
  auto* eval = map->add_subcommand("eval", "Apply a map to an element");
  eval->add_option("map", a_path)->required();
  eval->add_option("x", b_path)->required();
  eval->add_flag("--inverse", inverse, "Apply the inverse map");
  eval->add_option("--out", out_path);
  auto* serve = map->add_subcommand(
      "serve", "Answer one element per stdin line with one per stdout line");
  serve->add_option("map", a_path)->required();
  serve->add_flag("--inverse", inverse, "Serve the inverse map");

  auto* decompose = app.add_subcommand("decompose", "Recover canonical parameters");
  std::string kind;
  std::string algebra;
  int validation = 50;
  int grid = 64;
  decompose->add_option("kind", kind)
      ->required()
      ->check(CLI::IsMember({"effect", "cone", "sa", "comm"}));
  decompose->add_option("phi", a_path)->required();
  decompose->add_option("--algebra", algebra, "Source blocks, e.g. 2,3");
  decompose->add_option("--seed", seed);
  decompose->add_option("--validation", validation)->check(CLI::NonNegativeNumber);
  decompose->add_option("--grid", grid, "Grid cells for comm")->check(CLI::Range(2, 100000));
  decompose->add_option("--out", out_path);

  auto* fuzz = app.add_subcommand("fuzz", "Run property suites");
  std::string suite;
  int trials = 100;
  std::string pool;
  fuzz->add_option("--suite", suite)->required();
  fuzz->add_option("--trials", trials);
  fuzz->add_option("--seed", seed)->required();
  fuzz->add_option("--pool", pool, "JSON list of block lists");
  fuzz->add_option("--out", out_path);

  auto* staircase = app.add_subcommand("staircase", "Spectral staircase of an effect");
  int n = 4;
  staircase->add_option("a", a_path)->required();
  staircase->add_option("--n", n);
  staircase->add_option("--out", out_path);

  // --manifest alone replaces the command line.
  if (args.size() == 2 && args[0] == "--manifest") {
    std::vector<std::string> expanded = ManifestArgs(args[1], tol);
    tol.Validate();
    return Run(std::move(expanded), tol, in, out, err);
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  if (!manifest.empty()) throw UsageError("--manifest takes no other arguments");

  if (order->parsed()) return CmdOrder(a_path, b_path, out_path, tol, out);
  if (homo->parsed()) {
    return CmdHomo(t, blocks, samples, seed, out_path, tol, out);
  }
  if (orth->parsed()) return CmdOrth(a_path, b_path, out_path, tol, out);
  if (eval->parsed()) {
    return CmdMapEval(a_path, b_path, inverse, out_path, tol, out);
  }
  if (serve->parsed()) return CmdMapServe(a_path, inverse, tol, in, out);
  if (decompose->parsed()) {
    return CmdDecompose(kind, a_path, algebra, seed, validation, grid, out_path,
                        tol, out);
  }
  if (fuzz->parsed()) {
    return CmdFuzz(suite, trials, seed, pool, out_path, tol, out);
  }
  if (staircase->parsed()) return CmdStaircase(a_path, n, out_path, tol, out);
  throw UsageError("no command given");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  try {
    Tolerances tol = TolerancesFromEnv();
    tol.Validate();
    return Run(args, tol, in, out, err);
  } catch (const CertificateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    // Parse, shape and domain errors are all input problems.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace loewner::cli
