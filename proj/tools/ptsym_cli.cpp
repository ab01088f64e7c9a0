// ptsym: command-line front end. Matrices come in as JSON files, reports go
// out as JSON (or CSV for time and parameter series). Exit codes:
//   0 success, 2 validation/parse, 3 domain precondition, 4 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptsym/io.hpp"
#include "ptsym/ptsym.hpp"

namespace {

using namespace ptsym;
using io::Json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::Dimension:
    case ErrorKind::InvalidInput:
      return 2;
    case ErrorKind::Precondition:
    case ErrorKind::NotPtSymmetric:
    case ErrorKind::BrokenHamiltonian:
    case ErrorKind::CriticalPoint:
    case ErrorKind::DegeneratePostSelection:
      return 3;
    case ErrorKind::NotPsd:
    case ErrorKind::IllConditioned:
      return 4;
  }
  return 4;
}

int report_error(std::string_view kind, const std::string& message, int code) {
  Json j;
  j["error"] = std::string(kind);
  j["message"] = message;
  std::cerr << io::dump(j, 0) << '\n';
  return code;
}

// "re,im" or "re" -> complex.
cplx parse_complex_flag(const std::string& text, const char* flag) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> parts;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Validation, std::string(flag) + ": expected re,im but got \"" + text + "\"");
    }
  }
  if (parts.empty() || parts.size() > 2) {
    throw Error(ErrorKind::Validation, std::string(flag) + ": expected re,im but got \"" + text + "\"");
  }
  return {parts[0], parts.size() == 2 ? parts[1] : 0.0};
}

std::vector<int> parse_signs_flag(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "1" || part == "+1") {
      out.push_back(1);
    } else if (part == "-1") {
      out.push_back(-1);
    } else {
      throw Error(ErrorKind::Validation, "--signs: entries must be +1 or -1, got \"" + part + "\"");
    }
  }
  return out;
}

// Flags shared by every subcommand; optional values override the config file.
struct CommonFlags {
  std::string config;
  std::string output;
  std::optional<double> cluster_tol, rank_tol, val_tol, sym_tol, can_tol, met_tol, crit_tol, p_tol, free_tol;
  std::optional<double> t_start, t_end;
  std::optional<int> points;
  std::optional<std::string> signs;

  void attach(CLI::App* app, bool with_grid) {
    app->add_option("--config", config, "JSON config file (default: $PTSYM_CONFIG)");
    app->add_option("-o,--output", output, "write the result here instead of stdout");
    app->add_option("--cluster-tol", cluster_tol);
    app->add_option("--rank-tol", rank_tol);
    app->add_option("--val-tol", val_tol);
    app->add_option("--sym-tol", sym_tol);
    app->add_option("--can-tol", can_tol);
    app->add_option("--met-tol", met_tol);
    app->add_option("--crit-tol", crit_tol);
    app->add_option("--p-tol", p_tol);
    app->add_option("--free-tol", free_tol);
    if (with_grid) {
      app->add_option("--t-start", t_start);
      app->add_option("--t-end", t_end);
      app->add_option("--points", points);
    }
  }

  io::RunConfig resolve() const {
    io::RunConfig cfg;
    std::string path = config;
    if (path.empty()) {
      if (const char* env = std::getenv("PTSYM_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) io::apply_config_json(cfg, io::read_json_file(path), path);
    auto set = [](const std::optional<double>& v, double& dst) {
      if (v) dst = *v;
    };
    set(cluster_tol, cfg.tol.cluster_tol);
    set(rank_tol, cfg.tol.rank_tol);
    set(val_tol, cfg.tol.val_tol);
    set(sym_tol, cfg.tol.sym_tol);
    set(can_tol, cfg.tol.can_tol);
    set(met_tol, cfg.tol.met_tol);
    set(crit_tol, cfg.tol.crit_tol);
    set(p_tol, cfg.tol.p_tol);
    set(free_tol, cfg.tol.free_tol);
    set(t_start, cfg.t_start);
    set(t_end, cfg.t_end);
    if (points) cfg.points = *points;
    if (signs) cfg.signs = parse_signs_flag(*signs);
    cfg.validate();
    return cfg;
  }
};

struct SystemFlags {
  std::string hamiltonian, parity, time_reversal;

  void attach(CLI::App* app) {
    app->add_option("-H,--hamiltonian", hamiltonian, "Hamiltonian matrix file")->required();
    app->add_option("-P,--parity", parity, "parity matrix file")->required();
    app->add_option("-T,--time-reversal", time_reversal, "time-reversal matrix file")->required();
  }
};

struct System {
  Matrix h;
  PTPair pair;
};

System load_system(const SystemFlags& f, const io::RunConfig& cfg) {
  Matrix h = io::read_matrix_file(f.hamiltonian);
  const Matrix p = io::read_matrix_file(f.parity);
  const Matrix t = io::read_matrix_file(f.time_reversal);
  if (p.rows() != h.rows() || t.rows() != h.rows()) {
    throw Error(ErrorKind::Validation, "Hamiltonian, parity and time-reversal must share one dimension");
  }
  return {std::move(h), validate_pt_pair(p, t, cfg.tol.val_tol)};
}

Matrix load_state(const std::string& path, Eigen::Index dim) {
  Matrix rho = io::read_state_file(path);
  if (rho.rows() != dim) throw Error(ErrorKind::Validation, path + ": state dimension does not match H");
  try {
    require_density_matrix(rho);
  } catch (const Error& e) {
    throw Error(ErrorKind::Validation, path + ": " + e.what());
  }
  return rho;
}

SignCharacteristic resolve_signs(const io::RunConfig& cfg, const CanonicalDecomposition& d) {
  if (!cfg.signs) return SignCharacteristic::all_positive(d);
  if (cfg.signs->size() != d.real_block_count()) {
    throw Error(ErrorKind::Validation, "signs: expected " + std::to_string(d.real_block_count()) +
                                           " entries, one per real block");
  }
  return {*cfg.signs};
}

Json blocks_json(const std::vector<Block>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) {
    Json j;
    j["kind"] = std::string(to_string(b.kind));
    j["eigenvalue"] = io::complex_json(b.eigenvalue);
    j["order"] = b.order;
    j["offset"] = b.offset;
    out.push_back(j);
  }
  return out;
}

Json eigenvalues_json(const std::vector<Block>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) {
    for (int i = 0; i < b.order; ++i) out.push_back(io::complex_json(b.eigenvalue));
    if (b.kind == BlockKind::ComplexConjugatePair) {
      for (int i = 0; i < b.order; ++i) out.push_back(io::complex_json(std::conj(b.eigenvalue)));
    }
  }
  return out;
}

std::string class_name(const SpectralClass& sc) { return sc.unbroken() ? "Unbroken" : "Broken"; }

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Validation, "cannot write " + path);
  out << text;
}

void emit_json(const Json& j, const std::string& path) { emit(io::dump(j) + "\n", path); }

// ---- subcommands ---------------------------------------------------------

int cmd_classify(const SystemFlags& sf, const CommonFlags& cf) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  const auto sym = is_pt_symmetric(sys.h, sys.pair, cfg.tol.sym_tol);
  Json j;
  j["pt_symmetric"] = sym.symmetric;
  j["residual"] = sym.residual;
  if (!sym.symmetric) {
    j["class"] = nullptr;
    j["blocks"] = Json::array();
    Json ev = Json::array();
    for (const auto& z : eigen_decompose(sys.h, {cfg.tol.cluster_tol, cfg.tol.rank_tol}).eigenvalues()) {
      ev.push_back(io::complex_json(z));
    }
    j["eigenvalues"] = ev;
  } else {
    const auto sc = classify_spectrum(sys.h, sys.pair, cfg.tol);
    j["class"] = class_name(sc);
    j["blocks"] = blocks_json(sc.detail);
    j["eigenvalues"] = eigenvalues_json(sc.detail);
  }
  emit_json(j, cf.output);
  return 0;
}

int cmd_canonical(const SystemFlags& sf, const CommonFlags& cf) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  const auto d = pt_canonical_form(sys.h, sys.pair, cfg.tol);
  Json j;
  j["class"] = class_name(d.spectral_class());
  j["blocks"] = blocks_json(d.blocks);
  j["psi"] = io::matrix_json(d.psi);
  j["j"] = io::matrix_json(d.j);
  j["k"] = io::matrix_json(d.k);
  j["similarity_residual"] = d.similarity_residual;
  j["k_residual"] = d.k_residual;
  j["psi_condition"] = d.psi_condition;
  j["near_exceptional"] = d.near_exceptional;
  j["warnings"] = d.warnings;
  emit_json(j, cf.output);
  return 0;
}

int cmd_metric(const SystemFlags& sf, const CommonFlags& cf) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  const auto d = pt_canonical_form(sys.h, sys.pair, cfg.tol);
  const auto m = build_metric(d, resolve_signs(cfg, d), cfg.tol.met_tol);
  const auto in = inertia(m.eta);
  Json j;
  j["class"] = class_name(d.spectral_class());
  j["signs"] = m.signs.epsilons;
  j["positive_definite"] = m.positive_definite;
  j["residual"] = verify_metric(sys.h, m.eta);
  j["inertia"] = Json{{"positive", in.positive}, {"negative", in.negative}, {"zero", in.zero}};
  j["eta"] = io::matrix_json(m.eta);
  emit_json(j, cf.output);
  return 0;
}

int cmd_inner(const SystemFlags& sf, const CommonFlags& cf, const std::string& phi1, const std::string& phi2) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  std::optional<Vector> v1, v2;
  if (!phi1.empty()) v1 = io::read_vector_file(phi1);
  if (!phi2.empty()) v2 = io::read_vector_file(phi2);
  if (v1.has_value() != v2.has_value()) {
    throw Error(ErrorKind::Validation, "--phi1 and --phi2 must be given together");
  }
  if (v1 && (v1->size() != sys.h.rows() || v2->size() != sys.h.rows())) {
    throw Error(ErrorKind::Validation, "vector dimension does not match H");
  }
  const auto d = pt_canonical_form(sys.h, sys.pair, cfg.tol);
  const auto m = build_metric(d, resolve_signs(cfg, d), cfg.tol.met_tol);
  Json j;
  if (v1) j["value"] = io::complex_json(eta_inner(*v1, *v2, m.eta));
  // <psi_i, eta psi_j> over the canonical basis.
  j["basis_table"] = io::matrix_json(d.psi.adjoint() * m.eta * d.psi);
  emit_json(j, cf.output);
  return 0;
}

int cmd_evolve(const SystemFlags& sf, const CommonFlags& cf, const std::string& state, bool normalize) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  const Matrix rho = load_state(state, sys.h.rows());
  const auto grid = cfg.grid();
  const Eigen::Index n = sys.h.rows();

  std::ostringstream out;
  io::CsvWriter csv(out);
  std::vector<std::string> header{"t", "trace"};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto name = "rho" + detail::coeff_name(a, b, n).substr(1);
      header.push_back("Re_" + name);
      header.push_back("Im_" + name);
    }
  }
  csv.row(header);
  for (double t : grid.points()) {
    Matrix r = evolve_density(rho, sys.h, t);
    const double tr = r.trace().real();
    if (normalize) r = normalize_density(r);
    std::vector<std::string> cells{io::format_double(t), io::format_double(tr)};
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        cells.push_back(io::format_double(r(a, b).real()));
        cells.push_back(io::format_double(r(a, b).imag()));
      }
    }
    csv.row(cells);
  }
  emit(out.str(), cf.output);
  return 0;
}

int cmd_invariants(const SystemFlags& sf, const CommonFlags& cf, const std::string& state,
                   std::string drift_path) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  const Matrix rho = load_state(state, sys.h.rows());
  const auto d = pt_canonical_form(sys.h, sys.pair, cfg.tol);
  const auto rep = invariant_report(sys.h, sys.pair, rho, cfg.grid(), resolve_signs(cfg, d), cfg.tol);
  const Eigen::Index n = sys.h.rows();

  std::ostringstream out;
  io::CsvWriter csv(out);
  std::vector<std::string> header{"t"};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto name = detail::coeff_name(a, b, n);
      header.push_back("Re_" + name);
      header.push_back("Im_" + name);
    }
  }
  header.push_back("Re_eta_trace");
  header.push_back("Im_eta_trace");
  csv.row(header);
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    std::vector<std::string> cells{io::format_double(rep.times[i])};
    const Matrix& r = rep.coefficient_series[i].r;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        cells.push_back(io::format_double(r(a, b).real()));
        cells.push_back(io::format_double(r(a, b).imag()));
      }
    }
    cells.push_back(io::format_double(rep.eta_trace_series[i].real()));
    cells.push_back(io::format_double(rep.eta_trace_series[i].imag()));
    csv.row(cells);
  }

  Json side;
  side["class"] = class_name(rep.case_tag);
  side["blocks"] = blocks_json(rep.case_tag.detail);
  side["eta_trace_drift"] = rep.eta_trace_drift;
  side["overflow_risk"] = rep.overflow_risk;
  side["usable_horizon"] = rep.usable_horizon;
  Json inv = Json::array();
  for (const auto& t : rep.invariants) {
    inv.push_back(Json{{"name", t.name}, {"initial", io::complex_json(t.values.front())}, {"drift", t.drift}});
  }
  side["invariants"] = inv;

  if (drift_path.empty() && !cf.output.empty()) drift_path = cf.output + ".drift.json";
  emit(out.str(), cf.output);
  if (!drift_path.empty()) emit_json(side, drift_path);
  return 0;
}

struct SweepFlags {
  double r = 1.0;
  double s = 1.0;
  double theta_min = 0.0;
  double theta_max = std::numbers::pi;
  int steps = 181;
  std::optional<std::string> probe_x, probe_y;
};

int cmd_bender_sweep(const SweepFlags& f, const CommonFlags& cf) {
  const auto cfg = cf.resolve();
  if (f.steps < 2) throw Error(ErrorKind::Validation, "--steps must be >= 2");
  if (!(f.theta_max > f.theta_min)) throw Error(ErrorKind::Validation, "--theta-max must exceed --theta-min");
  if (!std::isfinite(f.theta_min) || !std::isfinite(f.theta_max)) {
    throw Error(ErrorKind::Validation, "theta range must be finite");
  }
  if (f.s == 0.0) throw Error(ErrorKind::Validation, "--s must be nonzero");
  try {
    BenderParams{f.r, f.s, 0.0}.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Validation, e.what());
  }
  Probe probe = cfg.probe;
  if (f.probe_x) probe.x = parse_complex_flag(*f.probe_x, "--probe-x");
  if (f.probe_y) probe.y = parse_complex_flag(*f.probe_y, "--probe-y");

  std::vector<double> thetas;
  thetas.reserve(static_cast<std::size_t>(f.steps));
  for (int i = 0; i < f.steps; ++i) {
    thetas.push_back(f.theta_min + (f.theta_max - f.theta_min) * i / (f.steps - 1));
  }
  const auto rows = critical_sweep(f.r, f.s, thetas, probe, cfg.tol.crit_tol);

  std::ostringstream out;
  io::CsvWriter csv(out);
  csv.row({"theta", "class", "alpha", "S0", "S0_times_cos_alpha", "eigvec_overlap", "note"});
  for (const auto& row : rows) {
    csv.row({io::format_double(row.theta), row.label, io::csv_optional(row.alpha), io::csv_optional(row.s0),
             io::csv_optional(row.s0_times_cos_alpha), io::csv_optional(row.eigvec_overlap), row.note});
  }
  emit(out.str(), cf.output);
  return 0;
}

int cmd_stokes(const CommonFlags& cf, const std::string& ex, const std::string& ey, const std::string& state,
               std::optional<double> alpha) {
  const auto cfg = cf.resolve();
  cplx x, y;
  if (!state.empty()) {
    if (!ex.empty() || !ey.empty()) throw Error(ErrorKind::Validation, "give either --state or --ex/--ey");
    const Vector v = io::read_vector_file(state);
    if (v.size() != 2) throw Error(ErrorKind::Validation, state + ": Stokes parameters need a 2-vector");
    x = v(0);
    y = v(1);
  } else {
    if (ex.empty() || ey.empty()) throw Error(ErrorKind::Validation, "--ex and --ey are required");
    x = parse_complex_flag(ex, "--ex");
    y = parse_complex_flag(ey, "--ey");
  }
  const auto st = stokes_vector(x, y);
  Json j;
  j["S0"] = st.s0;
  j["S1"] = st.s1;
  j["S2"] = st.s2;
  j["S3"] = st.s3;
  if (alpha) {
    if (!std::isfinite(*alpha)) throw Error(ErrorKind::Validation, "--alpha must be finite");
    const auto c = expansion_coefficients(x, y, *alpha, cfg.tol.crit_tol);
    j["alpha"] = *alpha;
    j["c1"] = io::complex_json(c.c1);
    j["c2"] = io::complex_json(c.c2);
    j["S0_eta"] = s0_eta(x, y, *alpha, cfg.tol.crit_tol);
  }
  emit_json(j, cf.output);
  return 0;
}

int cmd_dilate(const SystemFlags& sf, const CommonFlags& cf, const std::string& state) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  const Matrix rho = load_state(state, sys.h.rows());
  const auto ev = embedded_evolution_check(sys.h, sys.pair, rho, cfg.grid(), cfg.tol);
  Json j;
  j["c"] = ev.c;
  j["max_deviation"] = ev.max_deviation;
  j["max_unitarity_residual"] = ev.max_unitarity_residual;
  j["times"] = ev.times;
  j["success_probability"] = ev.success_probability;
  emit_json(j, cf.output);
  return 0;
}

int cmd_free_check(const SystemFlags& sf, const CommonFlags& cf, std::optional<double> c, const std::string& state,
                   const std::string& kraus) {
  const auto cfg = cf.resolve();
  const auto sys = load_system(sf, cfg);
  std::optional<Matrix> rho, k;
  if (!state.empty()) rho = load_state(state, sys.h.rows());
  if (!kraus.empty()) {
    k = io::read_matrix_file(kraus);
    if (k->rows() != sys.h.rows()) throw Error(ErrorKind::Validation, kraus + ": dimension does not match H");
  }
  if (c && !(*c > 0.0 && std::isfinite(*c))) throw Error(ErrorKind::Validation, "--c must be positive");

  const auto d = pt_canonical_form(sys.h, sys.pair, cfg.tol);
  const double cval = c ? *c : uniform_bound(d);
  const auto chk = verify_free_evolution(sys.h, sys.pair, cval, cfg.grid(), cfg.tol.free_tol, cfg.tol);
  const auto basis = FreeBasis::from_columns(d.psi);
  Json j;
  j["c"] = cval;
  j["passed"] = chk.passed;
  j["free"] = chk.free;
  j["trace_nonincreasing"] = chk.trace_nonincreasing;
  j["worst_defect"] = chk.worst_defect;
  j["max_contraction"] = chk.max_contraction;
  if (rho) {
    const auto fs = is_superposition_free(*rho, basis, cfg.tol.p_tol);
    j["state"] = Json{{"superposition_free", fs.free},
                      {"weights", fs.decomposition.weights},
                      {"residual", fs.decomposition.residual}};
  }
  if (k) {
    const auto kc = is_free_kraus(*k, basis, cfg.tol.free_tol);
    j["kraus"] = Json{{"free", kc.free}, {"worst_defect", kc.worst_defect}};
  }
  emit_json(j, cf.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric quantum mechanics toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* classify = app.add_subcommand("classify", "spectral class and canonical block structure");
  auto* canonical = app.add_subcommand("canonical", "PT canonical form Psi, J, K");
  auto* metric = app.add_subcommand("metric", "metric operator eta");
  auto* inner = app.add_subcommand("inner", "eta inner products");
  auto* evolve = app.add_subcommand("evolve", "density-matrix evolution as CSV");
  auto* invariants = app.add_subcommand("invariants", "conserved quantities along the evolution as CSV");
  auto* sweep = app.add_subcommand("bender-sweep", "theta sweep of the 2x2 Bender model as CSV");
  auto* stokes = app.add_subcommand("stokes", "Stokes parameters of a two-component field");
  auto* dilate = app.add_subcommand("dilate", "post-selected unitary dilation check");
  auto* free_check = app.add_subcommand("free-check", "free-operation property of the evolution");

  SystemFlags sf;
  CommonFlags cf;
  for (auto* sub : {classify, canonical, metric, inner, evolve, invariants, dilate, free_check}) sf.attach(sub);
  for (auto* sub : {classify, canonical, sweep, stokes}) cf.attach(sub, false);
  for (auto* sub : {metric, inner, evolve, invariants, dilate, free_check}) cf.attach(sub, true);
  for (auto* sub : {metric, inner, invariants, free_check}) {
    sub->add_option("--signs", cf.signs, "sign characteristic, e.g. 1,-1");
  }

  std::string phi1, phi2;
  inner->add_option("--phi1", phi1, "vector file");
  inner->add_option("--phi2", phi2, "vector file");

  std::string state;
  bool normalize = false;
  evolve->add_option("-s,--state", state, "state file (density matrix or vector)")->required();
  evolve->add_flag("--normalize", normalize, "divide rho(t) by its trace");
  invariants->add_option("-s,--state", state, "state file (density matrix or vector)")->required();
  dilate->add_option("-s,--state", state, "state file (density matrix or vector)")->required();
  free_check->add_option("-s,--state", state, "also test this state for superposition-freeness");

  std::string drift_json;
  invariants->add_option("--drift-json", drift_json, "drift summary path (default: <output>.drift.json)");

  SweepFlags sw;
  sweep->add_option("--r", sw.r);
  sweep->add_option("--s", sw.s);
  sweep->add_option("--theta-min", sw.theta_min);
  sweep->add_option("--theta-max", sw.theta_max);
  sweep->add_option("--steps", sw.steps);
  sweep->add_option("--probe-x", sw.probe_x, "probe component x as re,im");
  sweep->add_option("--probe-y", sw.probe_y, "probe component y as re,im");

  std::string ex, ey;
  std::optional<double> alpha;
  stokes->add_option("--ex", ex, "x component as re,im");
  stokes->add_option("--ey", ey, "y component as re,im");
  stokes->add_option("--state", state, "2-vector file instead of --ex/--ey");
  stokes->add_option("--alpha", alpha, "also expand in the Bender eigenbasis at this alpha");

  std::optional<double> c_flag;
  std::string kraus;
  free_check->add_option("--c", c_flag, "contraction factor (default: uniform bound)");
  free_check->add_option("--kraus", kraus, "also test this Kraus operator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("validation", e.what(), 2);
  }

  try {
    if (*classify) return cmd_classify(sf, cf);
    if (*canonical) return cmd_canonical(sf, cf);
    if (*metric) return cmd_metric(sf, cf);
    if (*inner) return cmd_inner(sf, cf, phi1, phi2);
    if (*evolve) return cmd_evolve(sf, cf, state, normalize);
    if (*invariants) return cmd_invariants(sf, cf, state, drift_json);
    if (*sweep) return cmd_bender_sweep(sw, cf);
    if (*stokes) return cmd_stokes(cf, ex, ey, state, alpha);
    if (*dilate) return cmd_dilate(sf, cf, state);
    if (*free_check) return cmd_free_check(sf, cf, c_flag, state, kraus);
  } catch (const ptsym::Error& e) {
    return report_error(to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const nlohmann::json::exception& e) {
    return report_error("validation", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 4);
  }
  return 0;
}
