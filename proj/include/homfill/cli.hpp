#pragma once

// Command-line front end. run() takes the arguments after the program name
// and returns the exit code: 0 success, 1 input or validation error, 2 budget
// exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homfill/builders.hpp"
#include "homfill/connectivity.hpp"
#include "homfill/equivariance.hpp"
#include "homfill/filling.hpp"
#include "homfill/fixtures.hpp"
#include "homfill/format.hpp"
#include "homfill/fv.hpp"

namespace homfill::cli {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBudget = 2;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A fixture name or a path to a complex file.
inline ChainComplex load_complex(const std::string& source, bool validate = true) {
  if (auto X = resolve_fixture(source)) return *X;
  std::string text = read_file(source);
  try {
    return parse_complex(text, validate);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), source + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

/// ρ for degree-d chains: ∂_d, or the augmentation in degree 0.
inline ModuleMap map_for_degree(const ChainComplex& X, std::size_t d) {
  if (d > X.top_degree()) throw InputError("degree " + std::to_string(d) + " exceeds the top degree " + std::to_string(X.top_degree()));
  return d == 0 ? augmentation_map(X.basis(0)) : X.boundary(d);
}

inline std::string format_value(const FvValue& v) {
  switch (v.kind) {
    case FvValue::Kind::kFinite: return std::to_string(v.value);
    case FvValue::Kind::kInfinite: return "inf";
    case FvValue::Kind::kBudgetExceeded: return "budget(" + std::to_string(v.budget) + ")";
  }
  return "";
}

struct Options {
  std::string complex;
  std::size_t degree = 1;
  std::string chain;
  std::optional<Coeff> budget;
  std::size_t kmax = 0;
  std::size_t n = 0;
  std::string action;
  bool cumulative = false;
  std::string format = "csv";
  std::vector<std::string> edges;
};

inline int cmd_build(const Options& o, std::ostream& out) {
  out << serialize_complex(load_complex(o.complex));
  return kExitOk;
}

inline int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  ChainComplex X = load_complex(o.complex, false);
  auto report = validate_complex(X);
  if (!report) {
    err << "invalid: boundary of boundary is nonzero at cell '" << report.cell << "' in degree " << report.degree
        << " (residual " << format_chain(report.residual) << ")\n";
    return kExitInput;
  }
  out << "ok " << X.name() << " sizes";
  auto sizes = X.sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? "," : " ") << sizes[i];
  out << "\n";
  return kExitOk;
}

inline int cmd_fill(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  Chain z = parse_chain(o.chain, X.basis(o.degree));
  auto res = filling_norm(X.filling_map(o.degree), z, o.budget);
  if (res.is_finite()) {
    out << "finite " << res.value << " " << format_chain(res.witness) << "\n";
    return kExitOk;
  }
  if (res.is_infeasible()) {
    out << "infeasible " << (res.obstruction ? res.obstruction->describe() : std::string("unknown")) << "\n";
    return kExitOk;
  }
  out << "budget-exceeded " << res.budget << "\n";
  return kExitBudget;
}

inline int cmd_decompose(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  auto rho = map_for_degree(X, o.degree);
  for (const auto& part : decompose(rho, parse_chain(o.chain, X.basis(o.degree)))) out << format_chain(part) << "\n";
  return kExitOk;
}

inline int cmd_connected(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  auto rho = map_for_degree(X, o.degree);
  out << (is_rho_connected(rho, parse_chain(o.chain, X.basis(o.degree))) ? "true" : "false") << "\n";
  return kExitOk;
}

inline std::optional<PermutationAction> load_action(const Options& o, const ModuleMap& rho) {
  if (o.action.empty()) return std::nullopt;
  auto A = parse_action(read_file(o.action), rho.source(), rho.target());
  auto report = equivariance_report(rho, A);
  if (!report)
    throw ValidationError("action element '" + report.element + "' does not commute with the map at cell '" +
                          report.cell + "'");
  if (!A.is_closed()) throw ValidationError("action elements are not closed under composition");
  return A;
}

inline int cmd_dn(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  auto rho = map_for_degree(X, o.degree);
  auto A = load_action(o, rho);
  std::vector<Chain> chains;
  std::size_t lo = o.cumulative ? 1 : o.n;
  for (std::size_t i = lo; i <= o.n && i > 0; ++i) {
    auto level = A ? dn_orbit_representatives(rho, *A, i) : enumerate_dn(rho, i);
    chains.insert(chains.end(), level.begin(), level.end());
  }
  for (const auto& c : chains) out << format_chain(c) << "\n";
  return kExitOk;
}

inline int cmd_fv(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  if (o.format != "csv" && o.format != "records") throw InputError("unknown format '" + o.format + "'");
  auto kmax = static_cast<Coeff>(o.kmax);
  FvTable table = o.degree == 0 ? fv0_table(X, kmax, o.budget) : fv_table(X, o.degree, kmax, o.budget);
  bool budget_hit = false;
  if (o.format == "csv") out << "k,value\n";
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    budget_hit = budget_hit || row.kind == FvValue::Kind::kBudgetExceeded;
    if (o.format == "csv") {
      out << k << "," << format_value(row) << "\n";
      continue;
    }
    nlohmann::ordered_json rec;
    rec["k"] = k;
    rec["value"] = format_value(row);
    if (row.is_finite()) {
      rec["cycle"] = format_chain(row.cycle);
      rec["filling"] = format_chain(row.filling);
    } else if (row.is_infinite()) {
      rec["cycle"] = format_chain(row.cycle);
    }
    out << rec.dump() << "\n";
  }
  return budget_hit ? kExitBudget : kExitOk;
}

inline int cmd_bound(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  auto rho = map_for_degree(X, o.degree);
  auto A = load_action(o, rho);
  BnBound b = A ? bn_via_orbits(rho, X.filling_map(o.degree), *A, o.n) : fv_upper_bound(rho, X.filling_map(o.degree), o.n);
  out << "n,b_n,bound,elements\n";
  out << b.n << "," << (b.b_n ? std::to_string(*b.b_n) : "inf") << "," << (b.bound ? std::to_string(*b.bound) : "inf")
      << "," << b.connected_kernel_elements << "\n";
  if (b.unfillable) out << "# unfillable " << format_chain(*b.unfillable) << "\n";
  return kExitOk;
}

inline int cmd_fineness(const Options& o, std::ostream& out) {
  ChainComplex X = load_complex(o.complex);
  auto report = fineness_report(X, o.n, o.edges.empty() ? std::nullopt : std::optional(o.edges));
  out << "edge,count\n";
  if (o.edges.empty()) {
    for (const auto& lbl : edge_labels(X)) out << lbl << "," << report.at(lbl) << "\n";
  } else {
    for (const auto& lbl : o.edges) out << lbl << "," << report.at(lbl) << "\n";
  }
  return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Filling functions of finite integer chain complexes.", "homfill"};
  app.require_subcommand(1, 1);
  Options o;
  const std::string complex_help = "fixture name (tetra_solid, tetra_hollow, grid_WxH, torus_N, coned_f2_R, "
                                   "coned_z2_R, path_N, cycle_N) or complex file";

  auto* build = app.add_subcommand("build", "write a complex in the text format");
  build->add_option("--complex", o.complex, complex_help)->required();

  auto* validate = app.add_subcommand("validate", "check that the boundary of every boundary vanishes");
  validate->add_option("--complex", o.complex, complex_help)->required();

  auto* fill = app.add_subcommand("fill", "minimal filling of a d-chain by (d+1)-chains");
  fill->add_option("--complex", o.complex, complex_help)->required();
  fill->add_option("--degree", o.degree, "degree d of the chain")->required();
  fill->add_option("--cycle", o.chain, "chain as label:coeff,label:coeff (0 for zero)")->required();
  fill->add_option("--budget", o.budget, "give up once the filling norm provably exceeds this");

  auto* dec = app.add_subcommand("decompose", "split a d-cycle into connected cycles");
  dec->add_option("--complex", o.complex, complex_help)->required();
  dec->add_option("--degree", o.degree, "degree d; the map is the boundary (augmentation for 0)")->required();
  dec->add_option("--chain", o.chain, "chain as label:coeff,...")->required();

  auto* con = app.add_subcommand("connected", "whether a chain is connected for the boundary map");
  con->add_option("--complex", o.complex, complex_help)->required();
  con->add_option("--degree", o.degree, "degree d")->required();
  con->add_option("--chain", o.chain, "chain as label:coeff,...")->required();

  auto* dn = app.add_subcommand("dn", "connected chains of norm n, one per line");
  dn->add_option("--complex", o.complex, complex_help)->required();
  dn->add_option("--degree", o.degree, "degree d")->required();
  dn->add_option("--n", o.n, "norm")->required();
  dn->add_option("--action", o.action, "action file; prints one representative per orbit")->check(CLI::ExistingFile);
  dn->add_flag("--cumulative", o.cumulative, "all norms 1..n");

  auto* fv = app.add_subcommand("fv", "filling function table.\nCSV columns: k,value with value an integer, inf, or budget(<cap>).\n"
                                      "records: one JSON object per k with value, cycle and filling");
  fv->add_option("--complex", o.complex, complex_help)->required();
  fv->add_option("--degree", o.degree, "cycle degree d (0 uses the augmentation)")->required();
  fv->add_option("--kmax", o.kmax, "largest cycle norm")->required();
  fv->add_option("--budget", o.budget, "cap on each filling search");
  fv->add_option("--format", o.format, "csv or records")->check(CLI::IsMember({"csv", "records"}));

  auto* bound = app.add_subcommand("bound", "n·B_n from connected kernel elements.\nCSV columns: n,b_n,bound,elements");
  bound->add_option("--complex", o.complex, complex_help)->required();
  bound->add_option("--degree", o.degree, "degree d")->required();
  bound->add_option("--n", o.n, "norm bound")->required();
  bound->add_option("--action", o.action, "action file; search orbit representatives only")->check(CLI::ExistingFile);

  auto* fine = app.add_subcommand("fineness", "circuits of length <= n through each edge.\nCSV columns: edge,count");
  fine->add_option("--complex", o.complex, complex_help)->required();
  fine->add_option("--n", o.n, "circuit length bound")->required();
  fine->add_option("--edge", o.edges, "restrict to these edge labels");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (build->parsed()) return cmd_build(o, out);
    if (validate->parsed()) return cmd_validate(o, out, err);
    if (fill->parsed()) return cmd_fill(o, out);
    if (dec->parsed()) return cmd_decompose(o, out);
    if (con->parsed()) return cmd_connected(o, out);
    if (dn->parsed()) return cmd_dn(o, out);
    if (fv->parsed()) return cmd_fv(o, out);
    if (bound->parsed()) return cmd_bound(o, out);
    if (fine->parsed()) return cmd_fineness(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace homfill::cli
