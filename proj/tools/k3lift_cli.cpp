// k3lift: command-line front end. Reads a JSON instance (--in FILE or
// stdin), writes JSON with sorted keys to stdout. Exit codes: 0 success,
// 1 malformed input, 2 precondition failure or failed verification.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "k3lift/json_io.hpp"
#include "k3lift/k3lift.hpp"
#include "k3lift/random.hpp"

namespace {

using nlohmann::json;
using namespace k3lift;
namespace jio = k3lift::json_io;

struct Options {
  std::string ctx;
  std::string in;
  std::optional<std::uint64_t> seed;
  // eig-split demo
  std::optional<std::size_t> rank;
  std::optional<std::uint64_t> order;
  // lift-search
  std::string mode;
  // constraints
  std::optional<std::uint64_t> phi;
  std::vector<std::uint64_t> sigma;
  std::optional<std::uint64_t> scan;
  std::vector<std::uint64_t> tame;
  std::optional<std::uint64_t> thresholds;
  std::string format = "json";
};

json read_input(const Options& o) {
  std::string text;
  if (!o.in.empty() && o.in != "-") {
    std::ifstream f(o.in);
    if (!f) fail(ErrorCode::InvalidInput, "cannot open " + o.in);
    text.assign(std::istreambuf_iterator<char>(f), {});
  } else {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

/// --ctx wins; otherwise the instance's own "context" field.
Ring resolve_ring(const Options& o, const json& inst) {
  if (!o.ctx.empty()) {
    Ring r = jio::ring_from_flag(o.ctx);
    if (inst.is_object() && inst.contains("context")) jio::check_context(r, inst.at("context"));
    return r;
  }
  if (inst.is_object() && inst.contains("context")) return jio::ring_from_json(inst.at("context"));
  fail(ErrorCode::InvalidInput, "no ring context: pass --ctx p,n,m or a \"context\" field");
}

json split_to_json(const Matrix& a, const EigenSplit& s) {
  json comps = json::array();
  for (const auto& c : s.components)
    comps.push_back({{"eigenvalue", jio::to_json(c.zeta)}, {"rank", c.basis.size()}, {"basis", jio::vecs_to_json(c.basis)}});
  const SplitChecks ch = check_split(a, s);
  const CharPolyReport cp = char_poly_report(a);
  return json{{"order", s.order},
              {"components", comps},
              {"checks",
               {{"idempotent", ch.idempotent},
                {"orthogonal", ch.orthogonal},
                {"sum_identity", ch.sum_identity},
                {"eigen", ch.eigen},
                {"direct_sum", ch.direct_sum}}},
              {"char_poly", {{"coeffs", jio::to_json(cp.coeffs)}, {"integer_candidates", cp.integer_reps}}}};
}

json run_eig_split(const Options& o) {
  if (o.rank || o.order) {
    require(o.rank && o.order && o.seed, ErrorCode::InvalidInput, "random demo needs --rank, --order and --seed");
    require(!o.ctx.empty(), ErrorCode::InvalidInput, "random demo needs --ctx");
    const Ring r = jio::ring_from_flag(o.ctx);
    random::Rng rng(*o.seed);
    const auto ti = random::tame_isometry(r, *o.rank, *o.order, rng);
    json out = split_to_json(ti.matrix, eigen_split(ti.matrix, ti.order));
    out["lattice"] = jio::to_json(ti.lattice);
    out["isometry"] = jio::to_json(ti.matrix);
    out["seed"] = *o.seed;
    return out;
  }
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const QuadLattice l = jio::lattice_from_json(r, jio::field(inst, "lattice"));
  const Matrix a = jio::matrix_from_json(r, jio::field(inst, "isometry"));
  if (!verify_isometry(l, a)) fail(ErrorCode::NotAnIsometry, "A does not preserve the form");
  const std::uint64_t n = jio::to_count(jio::field(inst, "order"), "order");
  return split_to_json(a, eigen_split(a, n));
}

json run_isotropic_lift(const Options& o) {
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const QuadLattice l = jio::lattice_from_json(r, jio::field(inst, "lattice"));
  const Vec u = jio::vec_from_json(r, jio::field(inst, "u"));
  const Vec v = jio::vec_from_json(r, jio::field(inst, "v"));
  check_dims(u.size(), l.rank(), "u");
  check_dims(v.size(), l.rank(), "v");
  const IsotropicCombination ic = isotropic_combination(l, u, v);
  return json{{"a", jio::to_json(ic.a)}, {"w", jio::to_json(ic.w)}, {"norm", jio::to_json(l.norm(ic.w))}};
}

json run_period_complete(const Options& o) {
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const FrameRef frame = jio::frame_from_json(r, jio::field(inst, "frame"));
  const PeriodLine line = complete_period_line(frame, jio::vec_from_json(r, jio::field(inst, "coords")));
  std::optional<FrobeniusStructure> frob;
  if (inst.contains("frobenius")) frob = FrobeniusStructure{jio::matrix_from_json(r, inst.at("frobenius"))};
  json out = jio::to_json(line);
  out["generator_ambient"] = jio::to_json(line.generator_ambient());
  out["conditions"] = jio::to_json(check_conditions(line, frob ? &*frob : nullptr));
  return out;
}

json run_phi_map(const Options& o) {
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const ConnectionData conn = jio::connection_from_json(r, jio::field(inst, "connection"));
  const PhiImage im = phi_map(conn, {jio::vec_from_json(r, jio::field(inst, "point"))});
  return json{{"coords", jio::to_json(im.coords)}, {"h", jio::to_json(im.h)}};
}

json run_phi_invert(const Options& o) {
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const ConnectionData conn = jio::connection_from_json(r, jio::field(inst, "connection"));
  const PhiPreimage pre = phi_invert(conn, jio::vec_from_json(r, jio::field(inst, "target")));
  return json{{"point", jio::to_json(pre.point.values)}, {"iterations", pre.iterations}};
}

json run_lift_search(const Options& o) {
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const std::uint64_t n = jio::to_count(jio::field(inst, "order"), "order");
  if (o.mode == "finite-height") {
    const SlopeDecomposition sd = jio::slope_from_json(r, jio::field(inst, "slope"));
    const Matrix a = jio::matrix_from_json(r, jio::field(inst, "isometry"));
    const Vec hodge = jio::vec_from_json(r, jio::field(inst, "hodge"));
    if (!inst.contains("others")) return jio::to_json(lift_finite_height(sd, a, n, hodge));
    const UniversalLine ul = universal_line(sd, a, n, hodge, jio::matrices_from_json(r, inst.at("others")));
    json out = jio::to_json(ul.certificate);
    json report = json::array();
    for (const auto& e : ul.others) {
      json row{{"stabilizes", e.stabilizes}};
      if (e.eigenvalue) row["eigenvalue"] = jio::to_json(*e.eigenvalue);
      report.push_back(row);
    }
    out["others"] = report;
    return out;
  }
  const SupersingularInput inp = jio::supersingular_from_json(r, inst);
  if (o.mode == "ss-nonsymplectic") return jio::to_json(lift_ss_nonsymplectic(inp, n));
  if (o.mode == "ss-symplectic") return jio::to_json(lift_ss_symplectic(inp, n));
  fail(ErrorCode::InvalidInput, "unknown mode '" + o.mode + "'");
}

struct VerifyOutcome {
  json out;
  bool valid;
};

VerifyOutcome run_verify(const Options& o) {
  const json inst = read_input(o);
  const Ring r = resolve_ring(o, inst);
  const VerificationReport rep = verify_certificate(jio::certificate_from_json(r, inst));
  return {json{{"valid", rep.valid()}, {"failures", rep.failures}}, rep.valid()};
}

json run_constraints(const Options& o) {
  json out = json::object();
  if (o.phi) out["phi"] = euler_phi(*o.phi);
  if (!o.sigma.empty()) {
    const SigmaReport s = sigma_check(o.sigma[0], o.sigma[1]);
    out["sigma"] = {{"n", s.n},          {"p", s.p},
                    {"member", s.member}, {"phi", s.phi},
                    {"good_reduction", s.good_reduction}, {"uniqueness", s.uniqueness},
                    {"note", s.note}};
  }
  if (!o.tame.empty()) {
    require(detail::is_prime(o.tame[0]), ErrorCode::InvalidInput, "p must be prime");
    out["tameness"] = tameness_name(tameness(o.tame[0], o.tame[1]));
  }
  if (o.thresholds) {
    const SurfaceThresholds t = surface_thresholds(*o.thresholds);
    out["thresholds"] = {{"p", t.p},
                         {"all_automorphisms_tame", t.all_automorphisms_tame},
                         {"all_finite_height_weakly_tame", t.all_finite_height_weakly_tame},
                         {"rationale", t.rationale}};
  }
  if (o.scan) {
    const auto rows = remark38_scan(*o.scan);
    json js = json::array();
    for (const auto& row : rows) js.push_back({{"p", row.p}, {"phi", row.phi}, {"exceeds_21", row.exceeds_21}});
    out["remark38"] = {{"p_max", *o.scan}, {"holds_above_60", remark38_holds(rows)}, {"rows", js}};
  }
  require(!out.empty(), ErrorCode::InvalidInput, "constraints needs --phi, --sigma, --tameness, --thresholds or --scan-remark38");
  return out;
}

std::string scalar_text(const json& j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

/// Plain "key value" lines; the phi(p + 1) scan becomes a table.
std::string constraints_table(const json& out) {
  std::ostringstream s;
  for (const auto& [key, value] : out.items()) {
    if (key == "remark38") {
      s << "remark38 p_max " << value.at("p_max") << " holds_above_60 " << value.at("holds_above_60") << "\n";
      s << "p\tphi(p+1)\t>21\n";
      for (const auto& row : value.at("rows"))
        s << row.at("p") << "\t" << row.at("phi") << "\t" << (row.at("exceeds_21").get<bool>() ? "yes" : "no") << "\n";
    } else if (value.is_object()) {
      for (const auto& [k, v] : value.items()) s << key << "." << k << "\t" << scalar_text(v) << "\n";
    } else {
      s << key << "\t" << scalar_text(value) << "\n";
    }
  }
  return s.str();
}

void report_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Finite-precision lifting computations for K3 crystals"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--ctx", o.ctx, "ring context p,n,m[,c_0,...,c_m]");
  app.add_option("--in", o.in, "input JSON file (default: stdin)");
  app.add_option("--seed", o.seed, "seed for randomized demos");

  auto* eig = app.add_subcommand("eig-split", "eigenspace decomposition of a tame isometry");
  eig->add_option("--rank", o.rank, "random demo: lattice rank");
  eig->add_option("--order", o.order, "random demo: isometry order");
  app.add_subcommand("isotropic-lift", "isotropic vector u + p a v");
  app.add_subcommand("period-complete", "complete period coordinates to an isotropic line");
  app.add_subcommand("phi-map", "period map of a deformation point");
  app.add_subcommand("phi-invert", "inverse period map");
  auto* lift = app.add_subcommand("lift-search", "build a lifting certificate");
  lift->add_option("--mode", o.mode, "branch")
      ->required()
      ->check(CLI::IsMember({"finite-height", "ss-nonsymplectic", "ss-symplectic"}));
  app.add_subcommand("verify", "re-check a lifting certificate");
  auto* cons = app.add_subcommand("constraints", "arithmetic constraints");
  cons->add_option("--phi", o.phi, "Euler phi of N");
  cons->add_option("--sigma", o.sigma, "N p: membership in Sigma and reduction")->expected(2);
  cons->add_option("--tameness", o.tame, "p N: tame or wild")->expected(2);
  cons->add_option("--thresholds", o.thresholds, "p: surface-wide tameness thresholds");
  cons->add_option("--scan-remark38", o.scan, "scan phi(p + 1) for primes up to P_MAX");
  cons->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("InvalidInput", e.what());
    return 1;
  }

  try {
    json out;
    int code = 0;
    if (eig->parsed()) {
      out = run_eig_split(o);
    } else if (app.got_subcommand("isotropic-lift")) {
      out = run_isotropic_lift(o);
    } else if (app.got_subcommand("period-complete")) {
      out = run_period_complete(o);
    } else if (app.got_subcommand("phi-map")) {
      out = run_phi_map(o);
    } else if (app.got_subcommand("phi-invert")) {
      out = run_phi_invert(o);
    } else if (lift->parsed()) {
      out = run_lift_search(o);
    } else if (app.got_subcommand("verify")) {
      VerifyOutcome v = run_verify(o);
      out = std::move(v.out);
      code = v.valid ? 0 : 2;
    } else {
      out = run_constraints(o);
      if (o.format == "table") {
        std::cout << constraints_table(out);
        return 0;
      }
    }
    std::cout << out.dump(2) << "\n";
    return code;
  } catch (const Error& e) {
    report_error(std::string(code_name(e.code())), e.what());
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const json::exception& e) {
    report_error("InvalidInput", e.what());
    return 1;
  }
}
