// JSON interchange for algebras, elements, maps and certificates.
//
// Algebra:  {"blocks":[2,3]}
// Element:  {"blocks":[[[[re,im],...],...],...],"hermitian":true}
//           row-major per block; a bare number is accepted for a real entry.
// Map:      {"kind":"compose","maps":[...],"interval":"effect"}
//           kinds: phi_T, phi_T_inv, phi_alpha, phi_alpha_inv, jordan,
//           congruence, shift, f_alpha, exp_iso, direct_T, compose.
//
// Parse failures throw ParseError.

#ifndef LOEWNER_JSON_IO_H_
#define LOEWNER_JSON_IO_H_

#include <string>

#include <nlohmann/json.hpp>

#include "loewner/algebra.h"
#include "loewner/canonical_maps.h"
#include "loewner/decompose.h"
#include "loewner/effects.h"
#include "loewner/projections.h"

namespace loewner {

using Json = nlohmann::ordered_json;

class ParseError : public Error {
 public:
  using Error::Error;
};

// Serializes with 17 significant digits for every floating-point number.
std::string DumpJson(const Json& j, int indent = 2);
Json ParseJson(const std::string& text);
Json ReadJsonFile(const std::string& path);

Json ToJson(const Algebra& algebra);
Algebra AlgebraFromJson(const Json& j);

Json ToJson(const Matrix& m);
Matrix MatrixFromJson(const Json& j);

Json ToJson(const Element& a);
Element ElementFromJson(const Json& j, const Tolerances& tol = {});

Json ToJson(const JordanSpec& spec);
JordanSpec JordanSpecFromJson(const Json& j, const Tolerances& tol = {});

Json ToJson(const OrderIsoExpr& expr);
OrderIsoExpr ExprFromJson(const Json& j, const Tolerances& tol = {});

Json ToJson(const TwoProjectionPosition& pos);
Json ToJson(const HomoCertificate& cert);
Json ToJson(const Staircase& staircase);
Json ToJson(const LinearMapRecord& map);
Json ToJson(const LinearExtension& ext);
Json ToJson(const EffectDecomposition& d);
Json ToJson(const ConeDecomposition& d);
Json ToJson(const SaDecomposition& d);
Json ToJson(const CommDecomposition& d);

}  // namespace loewner

#endif  // LOEWNER_JSON_IO_H_
