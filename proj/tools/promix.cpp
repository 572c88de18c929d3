#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "promix/errors.hpp"
#include "promix/json_io.hpp"
#include "promix/mixtures.hpp"
#include "promix/monotone.hpp"
#include "promix/rng.hpp"
#include "promix/solver.hpp"
#include "promix/verify.hpp"

namespace {

using promix::ojson;
using promix::Vec;

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
  } else {
    promix::write_text_file(output, text);
  }
}

std::string trace_path_for(const std::string& output) {
  const std::string suffix = ".json";
  if (output.size() > suffix.size() &&
      output.compare(output.size() - suffix.size(), suffix.size(), suffix) ==
          0) {
    return output.substr(0, output.size() - suffix.size()) + ".trace.csv";
  }
  return output + ".trace.csv";
}

std::string trace_csv(const promix::SolveTrace& trace) {
  std::string csv = "iter,step_norm\n";
  for (std::size_t i = 0; i < trace.step_norms.size(); ++i) {
    csv += std::to_string(i + 1);
    csv += ",";
    csv += promix::format_number(trace.step_norms[i]);
    csv += "\n";
  }
  return csv;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
  std::optional<double> tol;
  std::optional<long> max_iter;
  std::optional<double> lambda;
  std::optional<double> gamma;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_overrides) {
  cmd->add_option("--input", f.input, "Input config JSON path");
  cmd->add_option("--output", f.output,
                  "Output path (stdout when omitted)");
  cmd->add_option("--seed", f.seed, "Seed recorded in outputs");
  if (with_overrides) {
    cmd->add_option("--tol", f.tol, "Absolute step-norm stopping tolerance");
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap");
    cmd->add_option("--lambda", f.lambda, "Constant relaxation parameter");
    cmd->add_option("--gamma", f.gamma, "Resolvent scaling");
  }
}

ojson stop_to_json(const promix::StopRule& s, double gamma,
                   const std::vector<double>& lambda) {
  return ojson{{"abs_tol", s.abs_tol},
               {"rel_tol", s.rel_tol},
               {"max_iter", s.max_iter},
               {"gamma", gamma},
               {"lambda", lambda}};
}

int cmd_solve(const CommonFlags& flags) {
  if (flags.input.empty()) {
    throw promix::ValidationError("solve needs --input <problem.json>");
  }
  ojson cfg = promix::parse_json_file(flags.input);
  if (flags.tol) cfg["stop"]["abs_tol"] = *flags.tol;
  if (flags.max_iter) cfg["stop"]["max_iter"] = *flags.max_iter;
  if (flags.lambda) cfg["lambda"] = *flags.lambda;
  if (flags.gamma) cfg["gamma"] = *flags.gamma;
  const promix::RelaxedProblem p = promix::problem_from_json(cfg);
  const promix::SolveTrace trace = promix::solve(p);
  const std::vector<double> exact = promix::exactness_check(p, trace.final_x);

  ojson out;
  out["command"] = "solve";
  out["seed"] = flags.seed;
  out["tolerances"] = stop_to_json(p.stop, p.gamma, p.lambda_schedule);
  out["checks"] = ojson::array(
      {"in_v_defect", "normal_defect", "atom_exactness", "step_norm"});
  out["converged"] = trace.converged;
  out["diverged"] = trace.diverged;
  out["iterations"] = trace.iterations;
  out["final_step_norm"] =
      trace.step_norms.empty() ? 0.0 : trace.step_norms.back();
  out["final_x"] = trace.final_x;
  out["in_v_defect"] = trace.in_v_defect;
  out["normal_defect"] = trace.normal_defect;
  out["atom_exactness"] = exact;
  emit(flags.output, promix::dump_json(out));
  if (!flags.output.empty()) {
    promix::write_text_file(trace_path_for(flags.output), trace_csv(trace));
  }
  return trace.converged ? 0 : 2;
}

int cmd_verify(const CommonFlags& flags, int families, bool inject_fault) {
  promix::VerifyOptions vo;
  vo.seed = flags.seed;
  vo.families = families;
  vo.inject_fault = inject_fault;
  const promix::VerifyReport report = promix::run_verify(vo);

  ojson rows = ojson::array();
  for (const promix::IdentityResidual& r : report.rows) {
    rows.push_back(ojson{{"name", r.name},
                         {"max_residual", r.max_residual},
                         {"threshold", r.threshold},
                         {"pass", r.pass}});
  }
  ojson out;
  out["command"] = "verify";
  out["seed"] = report.seed;
  out["options"] = ojson{{"families", vo.families},
                         {"max_dim", vo.max_dim},
                         {"max_atoms", vo.max_atoms},
                         {"sample_points", vo.sample_points},
                         {"collapse_families", vo.collapse_families},
                         {"collapse_points", vo.collapse_points},
                         {"fne_pairs", vo.fne_pairs},
                         {"oracle_inputs", vo.oracle_inputs},
                         {"inject_fault", vo.inject_fault}};
  out["rows"] = rows;
  out["pass"] = report.pass;
  emit(flags.output, promix::dump_json(out));
  // Human-readable table on stderr so stdout and --output files stay clean.
  for (const promix::IdentityResidual& r : report.rows) {
    std::cerr << (r.pass ? "pass  " : "FAIL  ") << r.name << "  "
              << promix::format_number(r.max_residual) << " (threshold "
              << promix::format_number(r.threshold) << ")\n";
  }
  return report.pass ? 0 : 2;
}

// Family of weight-w_k support-function subdifferentials on the standard
// basis; its mixture resolvent is the weighted soft-threshold
// x_k -> w_k (x_k - clamp(x_k, lower_k, upper_k)).
int cmd_demo_softthreshold(const CommonFlags& flags, int inputs) {
  int n = 8;
  Vec weights, lower, upper;
  if (!flags.input.empty()) {
    const ojson cfg = promix::parse_json_file(flags.input);
    if (cfg.contains("n")) {
      if (!cfg["n"].is_number_integer() || cfg["n"].get<long>() < 1) {
        throw promix::ValidationError("field 'n' must be a positive integer");
      }
      n = cfg["n"].get<int>();
    }
    const auto fill = [&](const char* key, Vec& dst) {
      if (!cfg.contains(key)) return;
      const ojson& v = cfg[key];
      if (v.is_number()) {
        dst.assign(static_cast<std::size_t>(n), v.get<double>());
      } else if (v.is_array()) {
        dst.clear();
        for (const auto& e : v) dst.push_back(e.get<double>());
      } else {
        throw promix::ValidationError(std::string("field '") + key +
                                      "' must be a number or array");
      }
    };
    fill("weights", weights);
    fill("lower", lower);
    fill("upper", upper);
  }
  const std::size_t un = static_cast<std::size_t>(n);
  if (weights.empty()) weights.assign(un, 1.0 / n);
  if (upper.empty()) upper.assign(un, 1.0);
  if (lower.empty()) {
    lower = upper;
    for (auto& e : lower) e = -e;
  }
  if (weights.size() != un || lower.size() != un || upper.size() != un) {
    throw promix::ValidationError(
        "weights/lower/upper must have length n");
  }

  std::vector<promix::Atom> atoms;
  for (int k = 0; k < n; ++k) {
    Vec ek(un, 0.0);
    ek[static_cast<std::size_t>(k)] = 1.0;
    promix::Atom a;
    a.weight = weights[static_cast<std::size_t>(k)];
    a.linop = promix::LinOp::single_row(ek);
    a.payload = promix::PayloadSpec{promix::MonotoneOpSpec{
        promix::SubdiffSupportIntervalOp{{lower[static_cast<std::size_t>(k)]},
                                         {upper[static_cast<std::size_t>(k)]}}}};
    atoms.push_back(std::move(a));
  }
  const promix::MixtureFamily family = promix::make_family(n, std::move(atoms));

  const auto closed_form = [&](const Vec& x) {
    Vec y(un);
    for (std::size_t k = 0; k < un; ++k) {
      const double c = std::min(std::max(x[k], lower[k]), upper[k]);
      y[k] = weights[k] * (x[k] - c);
    }
    return y;
  };

  promix::Rng rng(flags.seed);
  std::vector<Vec> samples;
  Vec canonical(un, 0.0);
  canonical[0] = 3.0;
  if (un > 1) canonical[1] = -0.5;
  samples.push_back(canonical);
  for (int i = 1; i < inputs; ++i) {
    samples.push_back(rng.uniform_vec(un, -3.0, 3.0));
  }

  const double threshold = 1e-12;
  double max_residual = 0.0;
  ojson pairs = ojson::array();
  for (const Vec& x : samples) {
    const Vec out = promix::resolvent_mixture(family, x);
    max_residual = std::max(max_residual, promix::dist(out, closed_form(x)));
    if (pairs.size() < 16) {
      pairs.push_back(ojson{{"x", x}, {"output", out}});
    }
  }

  ojson out;
  out["command"] = "demo-softthreshold";
  out["seed"] = flags.seed;
  out["n"] = n;
  out["weights"] = weights;
  out["lower"] = lower;
  out["upper"] = upper;
  out["checks"] = ojson::array({"weighted_soft_threshold_closed_form"});
  out["tolerances"] = ojson{{"closed_form", threshold}};
  out["inputs"] = inputs;
  out["pairs"] = pairs;
  out["max_residual"] = max_residual;
  out["pass"] = max_residual <= threshold;
  emit(flags.output, promix::dump_json(out));
  return max_residual <= threshold ? 0 : 2;
}

int cmd_demo_wiener(const CommonFlags& flags, int atoms, int dim,
                    int subspace_dim, int obs_dim, double clip, double noise) {
  if (atoms < 1 || dim < 1 || subspace_dim < 1 || subspace_dim > dim ||
      obs_dim < 1) {
    throw promix::ValidationError(
        "demo-wiener needs atoms >= 1, dim >= 1, 1 <= subspace-dim <= dim, "
        "obs-dim >= 1");
  }
  promix::Rng rng(flags.seed);
  const std::size_t un = static_cast<std::size_t>(dim);
  const std::size_t um = static_cast<std::size_t>(obs_dim);

  std::vector<Vec> vbasis;
  for (int i = 0; i < subspace_dim; ++i) vbasis.push_back(rng.normal_vec(un));
  const promix::Subspace v = promix::make_subspace(dim, vbasis);
  if (promix::subspace_dim(v) != subspace_dim) {
    throw promix::ValidationError("sampled subspace basis was degenerate");
  }

  Vec truth(un, 0.0);
  for (const Vec& b : v.basis) {
    promix::axpy(rng.uniform(-2.0, 2.0), b, truth);
  }

  // Random observation maps, rescaled so the family mass is at most 1.
  promix::WienerData data;
  std::vector<promix::Atom> probe;
  for (int i = 0; i < atoms; ++i) {
    std::vector<Vec> rows;
    for (int r = 0; r < obs_dim; ++r) {
      Vec row = rng.normal_vec(un);
      for (auto& e : row) e /= std::sqrt(static_cast<double>(dim));
      rows.push_back(std::move(row));
    }
    data.weights.push_back(1.0 / atoms);
    data.linops.push_back(promix::LinOp::from_rows(rows));
    probe.push_back(promix::Atom{data.weights.back(), data.linops.back(),
                                 promix::PayloadSpec{promix::MonotoneOpSpec{
                                     promix::ZeroOp{}}}});
  }
  {
    promix::MixtureFamily raw;
    raw.x_dim = dim;
    raw.atoms = std::move(probe);
    const promix::MixtureFamily scaled_family =
        promix::rescale_to_admissible(raw);
    for (int i = 0; i < atoms; ++i) {
      data.linops[static_cast<std::size_t>(i)] =
          scaled_family.atoms[static_cast<std::size_t>(i)].linop;
    }
  }

  for (int i = 0; i < atoms; ++i) {
    promix::ProjectionSpec t;
    if (clip > 0.0) {
      t = promix::ProjectionSpec{promix::ProjectionSpec::Box{
          Vec(um, -clip), Vec(um, clip)}};
    } else {
      t = promix::ProjectionSpec{promix::ProjectionSpec::Identity{}};
    }
    Vec obs = promix::apply_projection(
        t, promix::apply(data.linops[static_cast<std::size_t>(i)], truth));
    if (noise > 0.0) {
      for (auto& e : obs) e += noise * rng.normal();
    }
    data.t.push_back(std::move(t));
    data.offsets.push_back(std::move(obs));
  }

  promix::StopRule stop;
  stop.abs_tol = flags.tol.value_or(1e-10);
  stop.max_iter = flags.max_iter.value_or(10000);
  const std::vector<double> lambda{flags.lambda.value_or(1.0)};
  const promix::RelaxedProblem p =
      promix::wiener_problem(data, v, lambda, Vec(un, 0.0), stop);
  const promix::SolveTrace trace = promix::solve(p);

  // Residuals T_i(L_i x) - r_i of the fitted point.
  double max_atom_residual = 0.0;
  for (int i = 0; i < atoms; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const Vec fit = promix::apply_projection(
        data.t[ui], promix::apply(data.linops[ui], trace.final_x));
    max_atom_residual =
        std::max(max_atom_residual, promix::dist(fit, data.offsets[ui]));
  }

  ojson out;
  out["command"] = "demo-wiener";
  out["seed"] = flags.seed;
  out["atoms"] = atoms;
  out["dim"] = dim;
  out["subspace_dim"] = subspace_dim;
  out["obs_dim"] = obs_dim;
  out["clip"] = clip;
  out["noise"] = noise;
  out["tolerances"] = stop_to_json(p.stop, p.gamma, p.lambda_schedule);
  out["checks"] =
      ojson::array({"residual_consistency", "relaxed_stationarity_defect"});
  out["converged"] = trace.converged;
  out["iterations"] = trace.iterations;
  out["max_atom_residual"] = max_atom_residual;
  out["in_v_defect"] = trace.in_v_defect;
  out["normal_defect"] = trace.normal_defect;
  out["recovery_distance"] = promix::dist(trace.final_x, truth);
  out["final_x"] = trace.final_x;
  emit(flags.output, promix::dump_json(out));
  return trace.converged ? 0 : 2;
}

int cmd_prox_average(const CommonFlags& flags) {
  std::vector<promix::ConvexFnSpec> fns;
  std::vector<double> weights;
  double lo = -3.0, hi = 3.0;
  int samples = 121;
  if (!flags.input.empty()) {
    const ojson cfg = promix::parse_json_file(flags.input);
    if (!cfg.contains("functions") || !cfg["functions"].is_array() ||
        cfg["functions"].empty()) {
      throw promix::ValidationError(
          "prox-average config needs a nonempty 'functions' array");
    }
    for (const auto& fj : cfg["functions"]) {
      fns.push_back(promix::fn_from_json(fj));
    }
    if (!cfg.contains("weights") || !cfg["weights"].is_array()) {
      throw promix::ValidationError(
          "prox-average config needs a 'weights' array");
    }
    for (const auto& wj : cfg["weights"]) weights.push_back(wj.get<double>());
    if (cfg.contains("range")) {
      const auto& r = cfg["range"];
      if (!r.is_array() || r.size() != 2) {
        throw promix::ValidationError("field 'range' must be [lo, hi]");
      }
      lo = r[0].get<double>();
      hi = r[1].get<double>();
      if (!(lo < hi)) {
        throw promix::ValidationError("field 'range' must satisfy lo < hi");
      }
    }
    if (cfg.contains("samples")) {
      samples = cfg["samples"].get<int>();
      if (samples < 2) {
        throw promix::ValidationError("field 'samples' must be at least 2");
      }
    }
  } else {
    fns.push_back(promix::ConvexFnSpec{promix::AbsSumFn{{1.0}}});
    fns.push_back(promix::conjugate_wrap(fns[0]));
    weights = {0.5, 0.5};
  }
  if (fns.size() != weights.size()) {
    throw promix::ValidationError("functions and weights differ in length");
  }
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw promix::ValidationError(
        "prox-average weights must be a probability vector (sum 1)");
  }

  std::vector<promix::Atom> atoms;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    atoms.push_back(promix::Atom{weights[i], promix::LinOp::identity(1),
                                 promix::PayloadSpec{fns[i]}});
  }
  const promix::MixtureFamily family = promix::make_family(1, std::move(atoms));
  const promix::MixtureFamily conj = promix::conjugate_payload_family(family);

  const double pair_tol = 1e-12;
  double max_pair_residual = 0.0;
  std::string csv;
  csv += "# command prox-average seed " + std::to_string(flags.seed) + "\n";
  csv += "# checks moreau_conjugate_pair tolerance " +
         promix::format_number(pair_tol) + "\n";
  csv += "x,prox,envelope,moreau_pair_residual\n";
  for (int j = 0; j < samples; ++j) {
    const double x =
        lo + (hi - lo) * static_cast<double>(j) / (samples - 1);
    const Vec xv{x};
    const double px = promix::proximal_expectation_prox(family, xv)[0];
    const double ex = promix::envelope_mixture(family, xv);
    const double pc = promix::proximal_expectation_prox(conj, xv)[0];
    const double pair = std::abs(px + pc - x);
    max_pair_residual = std::max(max_pair_residual, pair);
    csv += promix::format_number(x) + "," + promix::format_number(px) + "," +
           promix::format_number(ex) + "," + promix::format_number(pair) +
           "\n";
  }
  emit(flags.output, csv);
  return max_pair_residual <= pair_tol ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "promix: resolvent/proximal mixtures of finite operator families"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve a relaxed inclusion problem");
  add_common(solve_cmd, solve_flags, true);

  CommonFlags verify_flags;
  int verify_families = 50;
  bool inject_fault = false;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Run the seeded identity-verification suite");
  add_common(verify_cmd, verify_flags, false);
  verify_cmd->add_option("--families", verify_families,
                         "Random families per identity block");
  verify_cmd->add_flag("--inject-fault", inject_fault,
                       "Corrupt the mixture resolvent (test hook)");

  CommonFlags soft_flags;
  int soft_inputs = 16;
  CLI::App* soft_cmd = app.add_subcommand(
      "demo-softthreshold", "Weighted soft-threshold family demo");
  add_common(soft_cmd, soft_flags, false);
  soft_cmd->add_option("--inputs", soft_inputs, "Random sample count");

  CommonFlags wiener_flags;
  int w_atoms = 20, w_dim = 10, w_subspace = 4, w_obs = 10;
  double w_clip = 1.0, w_noise = 0.0;
  CLI::App* wiener_cmd = app.add_subcommand(
      "demo-wiener", "Constrained signal recovery from clipped observations");
  add_common(wiener_cmd, wiener_flags, true);
  wiener_cmd->add_option("--atoms", w_atoms, "Observation atom count");
  wiener_cmd->add_option("--dim", w_dim, "Ambient dimension");
  wiener_cmd->add_option("--subspace-dim", w_subspace,
                         "Constraint subspace dimension");
  wiener_cmd->add_option("--obs-dim", w_obs, "Observation dimension per atom");
  wiener_cmd->add_option("--clip", w_clip,
                         "Clip bound for the sensors (0 = identity)");
  wiener_cmd->add_option("--noise", w_noise, "Observation noise level");

  CommonFlags pa_flags;
  CLI::App* pa_cmd = app.add_subcommand(
      "prox-average", "Sample the proximal average of 1-D functions");
  add_common(pa_cmd, pa_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_flags);
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_flags, verify_families, inject_fault);
    }
    if (soft_cmd->parsed()) {
      return cmd_demo_softthreshold(soft_flags, soft_inputs);
    }
    if (wiener_cmd->parsed()) {
      return cmd_demo_wiener(wiener_flags, w_atoms, w_dim, w_subspace, w_obs,
                             w_clip, w_noise);
    }
    if (pa_cmd->parsed()) return cmd_prox_average(pa_flags);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}
