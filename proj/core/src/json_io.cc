#include "loewner/json_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

namespace loewner {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string FormatDouble(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Dump(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        Dump(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += pretty && flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        Dump(v, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += FormatDouble(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected number");
  return j.get<double>();
}

Complex Entry(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("matrix entry must be a number or [re, im]");
}

IntervalKind DefaultInterval(const std::string& kind) {
  if (kind == "congruence") return IntervalKind::kCone;
  if (kind == "shift" || kind == "exp_iso") return IntervalKind::kSa;
  return IntervalKind::kEffect;
}

}  // namespace

std::string DumpJson(const Json& j, int indent) {
  std::string out;
  Dump(j, indent, 0, out);
  return out;
}

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseJson(ss.str());
}

Json ToJson(const Algebra& algebra) { return Json{{"blocks", algebra.blocks()}}; }

Algebra AlgebraFromJson(const Json& j) {
  const Json& blocks = Field(j, "blocks");
  if (!blocks.is_array()) throw ParseError("algebra blocks must be an array");
  std::vector<int> dims;
  for (const auto& b : blocks) {
    if (!b.is_number_integer()) throw ParseError("block sizes must be integers");
    dims.push_back(b.get<int>());
  }
  try {
    return Algebra(dims);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Json ToJson(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const Json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      throw ParseError("matrix rows must have equal length");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = Entry(j[r][c]);
  }
  return m;
}

Json ToJson(const Element& a) {
  Json blocks = Json::array();
  for (const auto& b : a.blocks()) blocks.push_back(ToJson(b));
  return Json{{"blocks", std::move(blocks)}, {"hermitian", a.hermitian()}};
}

Element ElementFromJson(const Json& j, const Tolerances& tol) {
  const Json& blocks = Field(j, "blocks");
  if (!blocks.is_array() || blocks.empty()) {
    throw ParseError("element blocks must be a non-empty array");
  }
  std::vector<Matrix> mats;
  std::vector<int> dims;
  for (const auto& b : blocks) {
    Matrix m = MatrixFromJson(b);
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw ParseError("element blocks must be square and non-empty");
    }
    dims.push_back(static_cast<int>(m.rows()));
    mats.push_back(std::move(m));
  }
  bool hermitian = true;
  if (j.contains("hermitian")) {
    if (!j["hermitian"].is_boolean()) throw ParseError("hermitian must be bool");
    hermitian = j["hermitian"].get<bool>();
  }
  try {
    return Element(Algebra(dims), std::move(mats), hermitian, tol);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Json ToJson(const JordanSpec& spec) {
  Json us = Json::array();
  for (const auto& u : spec.unitaries()) us.push_back(ToJson(u));
  Json tr = Json::array();
  for (bool t : spec.transpose()) tr.push_back(t);
  return Json{{"source", ToJson(spec.source())},
              {"target", ToJson(spec.target())},
              {"permutation", spec.permutation()},
              {"unitaries", std::move(us)},
              {"transpose", std::move(tr)}};
}

JordanSpec JordanSpecFromJson(const Json& j, const Tolerances& tol) {
  const Algebra source = AlgebraFromJson(Field(j, "source"));
  const Algebra target =
      j.contains("target") ? AlgebraFromJson(j["target"]) : source;
  std::vector<int> perm;
  std::vector<Matrix> us;
  std::vector<bool> tr;
  try {
    if (j.contains("permutation")) {
      perm = j["permutation"].get<std::vector<int>>();
    } else {
      for (int i = 0; i < source.num_blocks(); ++i) perm.push_back(i);
    }
    if (j.contains("transpose")) {
      for (const auto& t : j["transpose"]) tr.push_back(t.get<bool>());
    } else {
      tr.assign(source.num_blocks(), false);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("jordan spec: ") + e.what());
  }
  if (j.contains("unitaries")) {
    for (const auto& u : j["unitaries"]) us.push_back(MatrixFromJson(u));
  } else {
    for (int n : source.blocks()) us.push_back(Matrix::Identity(n, n));
  }
  try {
    return JordanSpec(source, target, perm, us, tr, tol);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Json ToJson(const OrderIsoExpr& expr) {
  Json j = std::visit(
      Overloaded{
          [](const OrderIsoExpr::PhiT& n) {
            return Json{{"kind", "phi_T"}, {"T", ToJson(n.T)}};
          },
          [](const OrderIsoExpr::PhiTInv& n) {
            return Json{{"kind", "phi_T_inv"}, {"T", ToJson(n.T)}};
          },
          [](const OrderIsoExpr::PhiAlpha& n) {
            return Json{{"kind", "phi_alpha"}, {"alpha", n.alpha}};
          },
          [](const OrderIsoExpr::PhiAlphaInv& n) {
            return Json{{"kind", "phi_alpha_inv"}, {"alpha", n.alpha}};
          },
          [](const OrderIsoExpr::Jordan& n) {
            return Json{{"kind", "jordan"}, {"spec", ToJson(n.spec)}};
          },
          [](const OrderIsoExpr::Congruence& n) {
            return Json{{"kind", "congruence"}, {"b", ToJson(n.b)}};
          },
          [](const OrderIsoExpr::Shift& n) {
            return Json{{"kind", "shift"}, {"c", ToJson(n.c)}};
          },
          [](const OrderIsoExpr::FAlpha& n) {
            return Json{{"kind", "f_alpha"}, {"alpha", n.alpha}};
          },
          [](const OrderIsoExpr::ExpIso& n) {
            return Json{{"kind", "exp_iso"}, {"spec", ToJson(n.spec)}};
          },
          [](const OrderIsoExpr::DirectT& n) {
            return Json{{"kind", "direct_T"}, {"T", ToJson(n.T)}};
          },
          [](const OrderIsoExpr::Compose& n) {
            Json maps = Json::array();
            for (const auto& m : n.maps) maps.push_back(ToJson(m));
            return Json{{"kind", "compose"}, {"maps", std::move(maps)}};
          },
      },
      expr.node());
  j["interval"] = std::string(IntervalKindName(expr.interval()));
  return j;
}

OrderIsoExpr ExprFromJson(const Json& j, const Tolerances& tol) {
  const Json& kind_json = Field(j, "kind");
  if (!kind_json.is_string()) throw ParseError("map kind must be a string");
  const std::string kind = kind_json.get<std::string>();
  IntervalKind interval = DefaultInterval(kind);
  if (j.contains("interval")) {
    try {
      interval = ParseIntervalKind(j["interval"].get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("interval: ") + e.what());
    }
  }
  using E = OrderIsoExpr;
  auto node = [&]() -> E::Node {
    if (kind == "phi_T") return E::PhiT{ElementFromJson(Field(j, "T"), tol)};
    if (kind == "phi_T_inv") {
      return E::PhiTInv{ElementFromJson(Field(j, "T"), tol)};
    }
    if (kind == "phi_alpha") return E::PhiAlpha{Number(Field(j, "alpha"), "alpha")};
    if (kind == "phi_alpha_inv") {
      return E::PhiAlphaInv{Number(Field(j, "alpha"), "alpha")};
    }
    if (kind == "jordan") return E::Jordan{JordanSpecFromJson(Field(j, "spec"), tol)};
    if (kind == "congruence") return E::Congruence{ElementFromJson(Field(j, "b"), tol)};
    if (kind == "shift") return E::Shift{ElementFromJson(Field(j, "c"), tol)};
    if (kind == "f_alpha") return E::FAlpha{Number(Field(j, "alpha"), "alpha")};
    if (kind == "exp_iso") return E::ExpIso{JordanSpecFromJson(Field(j, "spec"), tol)};
    if (kind == "direct_T") return E::DirectT{ElementFromJson(Field(j, "T"), tol)};
    if (kind == "compose") {
      const Json& maps = Field(j, "maps");
      if (!maps.is_array() || maps.empty()) {
        throw ParseError("compose needs a non-empty map list");
      }
      std::vector<OrderIsoExpr> parts;
      for (const auto& m : maps) parts.push_back(ExprFromJson(m, tol));
      if (!j.contains("interval")) interval = parts.back().interval();
      return E::Compose{std::move(parts)};
    }
    throw ParseError("unknown map kind '" + kind + "'");
  }();
  OrderIsoExpr expr(std::move(node), interval);
  try {
    expr.TargetInterval();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return expr;
}

Json ToJson(const TwoProjectionPosition& pos) {
  Json generic = Json::array();
  for (const auto& g : pos.generic) {
    generic.push_back(Json{{"block", g.block},
                           {"t", g.t},
                           {"e", ToJson(Matrix(g.e))},
                           {"f", ToJson(Matrix(g.f))}});
  }
  return Json{{"p_and_q", ToJson(pos.p_and_q)},
              {"p_and_qperp", ToJson(pos.p_and_qperp)},
              {"pperp_and_q", ToJson(pos.pperp_and_q)},
              {"pperp_and_qperp", ToJson(pos.pperp_and_qperp)},
              {"generic", std::move(generic)}};
}

Json ToJson(const HomoCertificate& cert) {
  return Json{{"t", cert.t},
              {"coefficient", cert.coefficient},
              {"residual_lower", cert.residual_lower},
              {"residual_factor", cert.residual_factor},
              {"maximality_residual", cert.maximality_residual},
              {"samples", cert.samples},
              {"passed", cert.Passed()}};
}

Json ToJson(const Staircase& staircase) {
  Json terms = Json::array();
  for (const auto& term : staircase.terms) {
    terms.push_back(Json{{"t", term.t}, {"p", ToJson(term.p)}});
  }
  return Json{{"n", staircase.n},
              {"terms", std::move(terms)},
              {"residual", ToJson(staircase.residual)},
              {"residual_norm", staircase.residual_norm}};
}

Json ToJson(const LinearMapRecord& map) {
  Json rows = Json::array();
  for (int r = 0; r < map.matrix.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < map.matrix.cols(); ++c) row.push_back(map.matrix(r, c));
    rows.push_back(std::move(row));
  }
  return Json{{"source", ToJson(map.source)},
              {"target", ToJson(map.target)},
              {"matrix", std::move(rows)}};
}

Json ToJson(const LinearExtension& ext) {
  return Json{{"map", ToJson(ext.map)},
              {"linearity_residual", ext.linearity_residual},
              {"jordan_residual", ext.jordan_residual},
              {"unital_residual", ext.unital_residual}};
}

Json ToJson(const EffectDecomposition& d) {
  return Json{{"epsilon", d.epsilon},
              {"alpha", d.alpha},
              {"T", ToJson(d.T)},
              {"J", ToJson(d.J)},
              {"spec", d.spec ? ToJson(*d.spec) : Json(nullptr)},
              {"residual", d.residual}};
}

Json ToJson(const ConeDecomposition& d) {
  return Json{{"b", ToJson(d.b)},
              {"J", ToJson(d.J)},
              {"spec", d.spec ? ToJson(*d.spec) : Json(nullptr)},
              {"scale", d.scale},
              {"b_square_residual", d.b_square_residual},
              {"residual", d.residual}};
}

Json ToJson(const SaDecomposition& d) {
  return Json{{"b", ToJson(d.b)},
              {"c", ToJson(d.c)},
              {"J", ToJson(d.J)},
              {"spec", d.spec ? ToJson(*d.spec) : Json(nullptr)},
              {"b_square_residual", d.b_square_residual},
              {"residual", d.residual}};
}

Json ToJson(const CommDecomposition& d) {
  return Json{{"interval", std::string(IntervalKindName(d.kind))},
              {"mu", d.mu},
              {"grid", d.grid},
              {"tables", d.tables},
              {"residual", d.residual}};
}

}  // namespace loewner
