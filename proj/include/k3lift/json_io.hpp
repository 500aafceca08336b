#pragma once

// JSON wire format. Scalars are arrays of integer coefficients c_0..c_{m-1}
// (plain integers are accepted on input); vectors are arrays of scalars and
// matrices arrays of rows. Lattices are {ring, rank, gram} where ring is "Z"
// (integer Gram matrix, read into the active context) or a context object.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/crystal_family.hpp"
#include "k3lift/errors.hpp"
#include "k3lift/int_lattice.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/lift_search.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"
#include "k3lift/period_domain.hpp"

namespace k3lift::json_io {

using nlohmann::json;

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::int64_t to_int(const json& j, const char* what) {
  if (!j.is_number_integer()) fail(ErrorCode::InvalidInput, std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

inline std::uint64_t to_count(const json& j, const char* what) {
  const std::int64_t v = to_int(j, what);
  require(v >= 0, ErrorCode::InvalidInput, std::string(what) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

// ---- ring context ----------------------------------------------------------

inline json ring_to_json(const Ring& r) {
  return json{{"p", r->p()}, {"n", r->n()}, {"m", r->m()}, {"modulus", r->modulus()}};
}

inline Ring ring_from_json(const json& j) {
  const std::uint64_t p = to_count(field(j, "p"), "p");
  const int n = static_cast<int>(to_int(field(j, "n"), "n"));
  const int m = j.contains("m") ? static_cast<int>(to_int(j.at("m"), "m")) : 1;
  std::vector<std::uint64_t> modulus;
  if (j.contains("modulus"))
    for (const auto& c : j.at("modulus")) modulus.push_back(to_count(c, "modulus coefficient"));
  return RingContext::make(p, n, m, std::move(modulus));
}

/// Parses "p,n,m[,c_0,...,c_m]".
inline Ring ring_from_flag(const std::string& s) {
  std::vector<std::uint64_t> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(',', pos);
    const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      parts.push_back(std::stoull(tok, &used));
      require(used == tok.size(), ErrorCode::InvalidInput, "bad --ctx entry '" + tok + "'");
    } catch (const std::logic_error&) {
      fail(ErrorCode::InvalidInput, "bad --ctx entry '" + tok + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  require(parts.size() >= 2, ErrorCode::InvalidInput, "--ctx needs at least p,n");
  const int m = parts.size() >= 3 ? static_cast<int>(parts[2]) : 1;
  std::vector<std::uint64_t> modulus(parts.begin() + std::min<std::ptrdiff_t>(3, static_cast<std::ptrdiff_t>(parts.size())),
                                     parts.end());
  return RingContext::make(parts[0], static_cast<int>(parts[1]), m, std::move(modulus));
}

// ---- scalars, vectors, matrices --------------------------------------------

inline json to_json(const Scalar& s) {
  json a = json::array();
  for (int i = 0; i < s.ring()->m(); ++i) a.push_back(s.coeff(i));
  return a;
}

inline Scalar scalar_from_json(const Ring& r, const json& j) {
  if (j.is_number_integer()) return Scalar::from_int(r, j.get<std::int64_t>());
  if (!j.is_array()) fail(ErrorCode::InvalidInput, "scalar must be an integer or an array of integers");
  std::vector<std::int64_t> c;
  for (const auto& x : j) c.push_back(to_int(x, "scalar coefficient"));
  return Scalar::from_coeffs(r, c);
}

inline json to_json(const Vec& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(to_json(s));
  return a;
}

inline Vec vec_from_json(const Ring& r, const json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, "vector must be an array");
  Vec v;
  for (const auto& x : j) v.push_back(scalar_from_json(r, x));
  return v;
}

inline json vecs_to_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline std::vector<Vec> vecs_from_json(const Ring& r, const json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, "vector list must be an array");
  std::vector<Vec> out;
  for (const auto& x : j) out.push_back(vec_from_json(r, x));
  return out;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Matrix matrix_from_json(const Ring& r, const json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::InvalidInput, "matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) fail(ErrorCode::InvalidInput, "matrix rows must be arrays");
  const std::size_t cols = j[0].size();
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Vec row = vec_from_json(r, j[i]);
    check_dims(row.size(), cols, "matrix row");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = row[k];
  }
  return m;
}

inline std::vector<Matrix> matrices_from_json(const Ring& r, const json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, "matrix list must be an array");
  std::vector<Matrix> out;
  for (const auto& x : j) out.push_back(matrix_from_json(r, x));
  return out;
}

// ---- lattices --------------------------------------------------------------

inline StandardLattice standard_from_name(const std::string& s) {
  if (s == "U") return StandardLattice::U;
  if (s == "E8") return StandardLattice::E8;
  if (s == "K3") return StandardLattice::K3;
  fail(ErrorCode::InvalidInput, "unknown standard lattice '" + s + "'");
}

/// Throws ContextMismatch when the embedded context differs from `r`.
inline void check_context(const Ring& r, const json& ctx) {
  const Ring given = ring_from_json(ctx);
  if (!(*given == *r))
    fail(ErrorCode::ContextMismatch, "input context " + ctx.dump() + " differs from active context " +
                                         ring_to_json(r).dump());
}

inline QuadLattice lattice_from_json(const Ring& r, const json& j) {
  const json& ring = field(j, "ring");
  QuadLattice l;
  if (ring.is_string()) {
    if (ring.get<std::string>() != "Z") fail(ErrorCode::InvalidInput, "lattice ring must be \"Z\" or a context");
    if (j.contains("standard")) {
      l = QuadLattice(r, standard_lattice(standard_from_name(j.at("standard").get<std::string>())));
    } else {
      IntMatrix g;
      for (const auto& row : field(j, "gram")) {
        IntVec v;
        for (const auto& x : row) v.push_back(to_int(x, "Gram entry"));
        g.push_back(std::move(v));
      }
      l = QuadLattice(r, IntLattice(std::move(g)));
    }
  } else {
    check_context(r, ring);
    l = QuadLattice(matrix_from_json(r, field(j, "gram")));
  }
  if (j.contains("rank"))
    require(to_count(j.at("rank"), "rank") == l.rank(), ErrorCode::InvalidInput, "declared rank does not match Gram matrix");
  return l;
}

inline json to_json(const QuadLattice& l) {
  return json{{"ring", ring_to_json(l.ring())}, {"rank", l.rank()}, {"gram", to_json(l.gram())}};
}

// ---- period domain and connections -----------------------------------------

inline FrameRef frame_from_json(const Ring& r, const json& j) {
  QuadLattice l = lattice_from_json(r, field(j, "lattice"));
  std::optional<Matrix> basis;
  if (j.contains("basis")) basis = Matrix::from_columns(r, l.rank(), vecs_from_json(r, j.at("basis")));
  return std::make_shared<const PeriodFrame>(std::move(l), std::move(basis));
}

inline json to_json(const PeriodFrame& f) {
  return json{{"lattice", to_json(f.ambient())}, {"basis", vecs_to_json(f.basis().columns())}};
}

inline ConnectionData connection_from_json(const Ring& r, const json& j) {
  ConnectionData c{frame_from_json(r, field(j, "frame")), matrices_from_json(r, field(j, "matrices"))};
  validate(c);
  return c;
}

inline json to_json(const ConditionReport& rep) {
  json j{{"hodge_line", status_name(rep.hodge_line)},
         {"isotropic", status_name(rep.isotropic)},
         {"frobenius", status_name(rep.frobenius)},
         {"ok", rep.ok()}};
  if (rep.frobenius_valuation >= 0) j["frobenius_valuation"] = rep.frobenius_valuation;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

inline json to_json(const PeriodLine& line) {
  return json{{"coords", to_json(line.coords)}, {"last", to_json(line.last)}, {"generator", to_json(line.generator())}};
}

// ---- lift search -----------------------------------------------------------

inline SlopeDecomposition slope_from_json(const Ring& r, const json& j) {
  SlopeDecomposition sd{lattice_from_json(r, field(j, "lattice")), vecs_from_json(r, field(j, "minus")),
                        vecs_from_json(r, field(j, "unit")), vecs_from_json(r, field(j, "plus")), std::nullopt};
  if (j.contains("frobenius")) sd.frobenius = matrix_from_json(r, j.at("frobenius"));
  return sd;
}

inline SupersingularInput supersingular_from_json(const Ring& r, const json& j) {
  SupersingularInput inp{lattice_from_json(r, field(j, "lattice")), matrix_from_json(r, field(j, "isometry")),
                         vec_from_json(r, field(j, "hodge")), std::nullopt, 0, std::nullopt};
  if (j.contains("ample")) inp.ample = vec_from_json(r, j.at("ample"));
  if (j.contains("artin_invariant")) inp.artin_invariant = static_cast<int>(to_int(j.at("artin_invariant"), "artin_invariant"));
  if (j.contains("symplectic")) {
    if (!j.at("symplectic").is_boolean()) fail(ErrorCode::InvalidInput, "symplectic must be a boolean");
    inp.symplectic = j.at("symplectic").get<bool>();
  }
  return inp;
}

inline json to_json(const LiftingCertificate& c) {
  json params = json::object();
  for (const auto& [name, value] : c.parameters) params[name] = to_json(value);
  return json{{"kind", "certificate"},
              {"branch", branch_name(c.branch)},
              {"context", ring_to_json(c.ring())},
              {"lattice", to_json(c.lattice)},
              {"isometry", to_json(c.isometry)},
              {"order", c.order},
              {"hodge", to_json(c.hodge)},
              {"m", to_json(c.m)},
              {"orthogonal_to", vecs_to_json(c.orthogonal_to)},
              {"span_basis", vecs_to_json(c.span_basis)},
              {"parameters", params},
              {"transcript",
               {{"norm", to_json(c.transcript.norm)},
                {"eigenvalue", to_json(c.transcript.eigenvalue)},
                {"pairings", to_json(c.transcript.pairings)},
                {"span_coords", to_json(c.transcript.span_coords)}}}};
}

/// Reads a certificate in the active context `r`; its own context must agree.
inline LiftingCertificate certificate_from_json(const Ring& r, const json& j) {
  if (j.contains("kind") && j.at("kind") != "certificate") fail(ErrorCode::InvalidInput, "not a certificate");
  if (j.contains("context")) check_context(r, j.at("context"));
  LiftingCertificate c;
  const auto b = parse_branch(field(j, "branch").get<std::string>());
  if (!b) fail(ErrorCode::InvalidInput, "unknown branch");
  c.branch = *b;
  c.lattice = lattice_from_json(r, field(j, "lattice"));
  c.isometry = matrix_from_json(r, field(j, "isometry"));
  c.order = to_count(field(j, "order"), "order");
  c.hodge = vec_from_json(r, field(j, "hodge"));
  c.m = vec_from_json(r, field(j, "m"));
  c.orthogonal_to = vecs_from_json(r, field(j, "orthogonal_to"));
  c.span_basis = vecs_from_json(r, field(j, "span_basis"));
  if (j.contains("parameters"))
    for (const auto& [name, value] : j.at("parameters").items()) c.parameters.emplace_back(name, scalar_from_json(r, value));
  const json& t = field(j, "transcript");
  c.transcript.norm = scalar_from_json(r, field(t, "norm"));
  c.transcript.eigenvalue = scalar_from_json(r, field(t, "eigenvalue"));
  c.transcript.pairings = vec_from_json(r, field(t, "pairings"));
  c.transcript.span_coords = vec_from_json(r, field(t, "span_coords"));
  return c;
}

}  // namespace k3lift::json_io
