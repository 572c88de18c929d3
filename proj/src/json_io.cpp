#include "promix/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "promix/errors.hpp"

namespace promix {

namespace {

const ojson& require(const ojson& j, const char* key) {
  if (!j.is_object()) {
    throw ValidationError("expected an object holding field '" +
                          std::string(key) + "'");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError("missing field '" + std::string(key) + "'");
  }
  return *it;
}

double number_from(const ojson& j, const char* field) {
  if (!j.is_number()) {
    throw ValidationError("field '" + std::string(field) +
                          "' must be a number");
  }
  return j.get<double>();
}

Vec vec_from(const ojson& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError("field '" + std::string(field) +
                          "' must be an array of numbers");
  }
  Vec out;
  out.reserve(j.size());
  for (const auto& e : j) {
    out.push_back(number_from(e, field));
  }
  return out;
}

// Infinite bounds travel as JSON null (lower -> -inf, upper -> +inf).
ojson bounds_to(const Vec& v) {
  ojson arr = ojson::array();
  for (double b : v) {
    if (std::isinf(b)) {
      arr.push_back(nullptr);
    } else {
      arr.push_back(b);
    }
  }
  return arr;
}

Vec bounds_from(const ojson& j, double inf_value, const char* field) {
  if (!j.is_array()) {
    throw ValidationError("field '" + std::string(field) +
                          "' must be an array");
  }
  Vec out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (e.is_null()) {
      out.push_back(inf_value);
    } else {
      out.push_back(number_from(e, field));
    }
  }
  return out;
}

std::vector<Vec> rows_from(const ojson& j, const char* field) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError("field '" + std::string(field) +
                          "' must be a nonempty array of rows");
  }
  std::vector<Vec> rows;
  rows.reserve(j.size());
  for (const auto& r : j) {
    rows.push_back(vec_from(r, field));
    if (rows.back().size() != rows.front().size()) {
      throw ValidationError("field '" + std::string(field) +
                            "' has rows of unequal length");
    }
  }
  return rows;
}

std::string type_of(const ojson& j) {
  const ojson& t = require(j, "type");
  if (!t.is_string()) {
    throw ValidationError("field 'type' must be a string");
  }
  return t.get<std::string>();
}

ojson projection_to_json(const ProjectionSpec& t) {
  if (std::holds_alternative<ProjectionSpec::Identity>(t.v)) {
    return ojson{{"type", "identity"}};
  }
  if (const auto* box = std::get_if<ProjectionSpec::Box>(&t.v)) {
    return ojson{{"type", "box"},
                 {"lower", bounds_to(box->lower)},
                 {"upper", bounds_to(box->upper)}};
  }
  const auto& ball = std::get<ProjectionSpec::Ball>(t.v);
  return ojson{
      {"type", "ball"}, {"center", ball.center}, {"radius", ball.radius}};
}

ProjectionSpec projection_from_json(const ojson& j) {
  const std::string type = type_of(j);
  if (type == "identity") {
    return ProjectionSpec{ProjectionSpec::Identity{}};
  }
  if (type == "box") {
    return ProjectionSpec{
        ProjectionSpec::Box{bounds_from(require(j, "lower"), -kInf, "lower"),
                            bounds_from(require(j, "upper"), kInf, "upper")}};
  }
  if (type == "ball") {
    return ProjectionSpec{
        ProjectionSpec::Ball{vec_from(require(j, "center"), "center"),
                             number_from(require(j, "radius"), "radius")}};
  }
  throw ValidationError("unknown projection type '" + type + "'");
}

struct FnWriter {
  ojson operator()(const QuadraticFn& f) const {
    return ojson{
        {"type", "quadratic"}, {"alpha", f.alpha}, {"center", f.center}};
  }
  ojson operator()(const QuadraticKernelFn&) const {
    return ojson{{"type", "quadratic_kernel"}};
  }
  ojson operator()(const AbsSumFn& f) const {
    return ojson{{"type", "abs_sum"}, {"weights", f.weights}};
  }
  ojson operator()(const IndicatorBoxFn& f) const {
    return ojson{{"type", "indicator_box"},
                 {"lower", bounds_to(f.lower)},
                 {"upper", bounds_to(f.upper)}};
  }
  ojson operator()(const IndicatorBallFn& f) const {
    return ojson{{"type", "indicator_ball"},
                 {"center", f.center},
                 {"radius", f.radius}};
  }
  ojson operator()(const SupportIntervalFn& f) const {
    return ojson{{"type", "support_interval"},
                 {"lower", f.lower},
                 {"upper", f.upper}};
  }
  ojson operator()(const LinearFn& f) const {
    return ojson{{"type", "linear"}, {"slope", f.slope}, {"offset", f.offset}};
  }
  ojson operator()(const ConjugateFn& f) const {
    return ojson{{"type", "conjugate"}, {"inner", fn_to_json(*f.inner)}};
  }
};

struct OpWriter {
  ojson operator()(const ZeroOp&) const { return ojson{{"type", "zero"}}; }
  ojson operator()(const ScaledIdentityOp& a) const {
    return ojson{{"type", "scaled_identity"}, {"alpha", a.alpha}};
  }
  ojson operator()(const NormalConeBoxOp& a) const {
    return ojson{{"type", "normal_cone_box"},
                 {"lower", bounds_to(a.lower)},
                 {"upper", bounds_to(a.upper)}};
  }
  ojson operator()(const NormalConeBallOp& a) const {
    return ojson{{"type", "normal_cone_ball"},
                 {"center", a.center},
                 {"radius", a.radius}};
  }
  ojson operator()(const NormalConeAffineOp& a) const {
    ojson basis = ojson::array();
    for (const auto& b : a.direction.basis) basis.push_back(b);
    return ojson{{"type", "normal_cone_affine"},
                 {"translate", a.translate},
                 {"direction_basis", basis}};
  }
  ojson operator()(const SubdiffSupportIntervalOp& a) const {
    return ojson{{"type", "subdiff_support_interval"},
                 {"lower", a.lower},
                 {"upper", a.upper}};
  }
  ojson operator()(const AffineMonotoneOp& a) const {
    ojson m = ojson::array();
    for (int i = 0; i < a.dim; ++i) {
      ojson row = ojson::array();
      for (int k = 0; k < a.dim; ++k) {
        row.push_back(a.m[static_cast<std::size_t>(i) * a.dim + k]);
      }
      m.push_back(std::move(row));
    }
    return ojson{
        {"type", "affine_monotone"}, {"matrix", m}, {"offset", a.offset}};
  }
  ojson operator()(const Rotation90Op&) const {
    return ojson{{"type", "rotation90"}};
  }
  ojson operator()(const WienerResidualOp& a) const {
    return ojson{{"type", "wiener_residual"},
                 {"projection", projection_to_json(a.t)},
                 {"offset", a.offset}};
  }
  ojson operator()(const InverseOp& a) const {
    return ojson{{"type", "inverse"}, {"inner", op_to_json(*a.inner)}};
  }
  ojson operator()(const SubdiffOp& a) const {
    return ojson{{"type", "subdifferential"}, {"fn", fn_to_json(*a.fn)}};
  }
  ojson operator()(const ScaledOp& a) const {
    return ojson{{"type", "scaled"},
                 {"factor", a.factor},
                 {"inner", op_to_json(*a.inner)}};
  }
};

bool is_fn_type(const std::string& type) {
  return type == "quadratic" || type == "quadratic_kernel" ||
         type == "abs_sum" || type == "indicator_box" ||
         type == "indicator_ball" || type == "support_interval" ||
         type == "linear" || type == "conjugate";
}

}  // namespace

ojson linop_to_json(const LinOp& l) {
  ojson rows = ojson::array();
  for (int i = 0; i < l.rows; ++i) {
    ojson row = ojson::array();
    for (int k = 0; k < l.cols; ++k) row.push_back(l.at(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

LinOp linop_from_json(const ojson& j) {
  return LinOp::from_rows(rows_from(j, "linop"));
}

ojson fn_to_json(const ConvexFnSpec& f) { return std::visit(FnWriter{}, f.v); }

ConvexFnSpec fn_from_json(const ojson& j) {
  const std::string type = type_of(j);
  if (type == "quadratic") {
    return ConvexFnSpec{QuadraticFn{number_from(require(j, "alpha"), "alpha"),
                                    vec_from(require(j, "center"), "center")}};
  }
  if (type == "quadratic_kernel") {
    return ConvexFnSpec{QuadraticKernelFn{}};
  }
  if (type == "abs_sum") {
    return ConvexFnSpec{AbsSumFn{vec_from(require(j, "weights"), "weights")}};
  }
  if (type == "indicator_box") {
    return ConvexFnSpec{
        IndicatorBoxFn{bounds_from(require(j, "lower"), -kInf, "lower"),
                       bounds_from(require(j, "upper"), kInf, "upper")}};
  }
  if (type == "indicator_ball") {
    return ConvexFnSpec{
        IndicatorBallFn{vec_from(require(j, "center"), "center"),
                        number_from(require(j, "radius"), "radius")}};
  }
  if (type == "support_interval") {
    return ConvexFnSpec{
        SupportIntervalFn{vec_from(require(j, "lower"), "lower"),
                          vec_from(require(j, "upper"), "upper")}};
  }
  if (type == "linear") {
    return ConvexFnSpec{LinearFn{vec_from(require(j, "slope"), "slope"),
                                 number_from(require(j, "offset"), "offset")}};
  }
  if (type == "conjugate") {
    return conjugate_wrap(fn_from_json(require(j, "inner")));
  }
  throw ValidationError("unknown convex function type '" + type + "'");
}

ojson op_to_json(const MonotoneOpSpec& a) { return std::visit(OpWriter{}, a.v); }

MonotoneOpSpec op_from_json(const ojson& j) {
  const std::string type = type_of(j);
  if (type == "zero") {
    return MonotoneOpSpec{ZeroOp{}};
  }
  if (type == "scaled_identity") {
    return MonotoneOpSpec{
        ScaledIdentityOp{number_from(require(j, "alpha"), "alpha")}};
  }
  if (type == "normal_cone_box") {
    return MonotoneOpSpec{
        NormalConeBoxOp{bounds_from(require(j, "lower"), -kInf, "lower"),
                        bounds_from(require(j, "upper"), kInf, "upper")}};
  }
  if (type == "normal_cone_ball") {
    return MonotoneOpSpec{
        NormalConeBallOp{vec_from(require(j, "center"), "center"),
                         number_from(require(j, "radius"), "radius")}};
  }
  if (type == "normal_cone_affine") {
    Vec translate = vec_from(require(j, "translate"), "translate");
    const int n = static_cast<int>(translate.size());
    const ojson& basis = require(j, "direction_basis");
    if (!basis.is_array()) {
      throw ValidationError("field 'direction_basis' must be an array");
    }
    Subspace dir;
    if (basis.empty()) {
      dir = zero_space(n);
    } else {
      dir = make_subspace(n, rows_from(basis, "direction_basis"));
    }
    return MonotoneOpSpec{
        NormalConeAffineOp{std::move(translate), std::move(dir)}};
  }
  if (type == "subdiff_support_interval") {
    return MonotoneOpSpec{
        SubdiffSupportIntervalOp{vec_from(require(j, "lower"), "lower"),
                                 vec_from(require(j, "upper"), "upper")}};
  }
  if (type == "affine_monotone") {
    std::vector<Vec> rows = rows_from(require(j, "matrix"), "matrix");
    const int n = static_cast<int>(rows.size());
    if (static_cast<int>(rows.front().size()) != n) {
      throw ValidationError("field 'matrix' must be square");
    }
    AffineMonotoneOp op;
    op.dim = n;
    op.m.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& r : rows) op.m.insert(op.m.end(), r.begin(), r.end());
    op.offset = vec_from(require(j, "offset"), "offset");
    return MonotoneOpSpec{std::move(op)};
  }
  if (type == "rotation90") {
    return MonotoneOpSpec{Rotation90Op{}};
  }
  if (type == "wiener_residual") {
    return MonotoneOpSpec{
        WienerResidualOp{projection_from_json(require(j, "projection")),
                         vec_from(require(j, "offset"), "offset")}};
  }
  if (type == "inverse") {
    return inverse_of(op_from_json(require(j, "inner")));
  }
  if (type == "subdifferential") {
    return subdiff_of(fn_from_json(require(j, "fn")));
  }
  if (type == "scaled") {
    return scaled_op(number_from(require(j, "factor"), "factor"),
                     op_from_json(require(j, "inner")));
  }
  throw ValidationError("unknown monotone operator type '" + type + "'");
}

ojson payload_to_json(const PayloadSpec& p) {
  if (const auto* op = std::get_if<MonotoneOpSpec>(&p)) {
    return op_to_json(*op);
  }
  return fn_to_json(std::get<ConvexFnSpec>(p));
}

PayloadSpec payload_from_json(const ojson& j) {
  if (is_fn_type(type_of(j))) {
    return PayloadSpec{fn_from_json(j)};
  }
  return PayloadSpec{op_from_json(j)};
}

ojson family_to_json(const MixtureFamily& f) {
  ojson atoms = ojson::array();
  for (const auto& atom : f.atoms) {
    atoms.push_back(ojson{{"weight", atom.weight},
                          {"linop", linop_to_json(atom.linop)},
                          {"payload", payload_to_json(atom.payload)}});
  }
  return ojson{{"x_dim", f.x_dim},
               {"atoms", std::move(atoms)},
               {"probability", f.probability},
               {"mass", f.mass}};
}

MixtureFamily family_from_json(const ojson& j) {
  const ojson& xd = require(j, "x_dim");
  if (!xd.is_number_integer() || xd.get<long>() < 1) {
    throw ValidationError("field 'x_dim' must be a positive integer");
  }
  const int x_dim = xd.get<int>();
  const ojson& atoms_json = require(j, "atoms");
  if (!atoms_json.is_array() || atoms_json.empty()) {
    throw ValidationError("field 'atoms' must be a nonempty array");
  }
  std::vector<Atom> atoms;
  atoms.reserve(atoms_json.size());
  for (const auto& a : atoms_json) {
    Atom atom;
    atom.weight = number_from(require(a, "weight"), "weight");
    atom.linop = linop_from_json(require(a, "linop"));
    atom.payload = payload_from_json(require(a, "payload"));
    atoms.push_back(std::move(atom));
  }
  return make_family(x_dim, std::move(atoms));
}

ojson subspace_to_json(const Subspace& v) {
  ojson basis = ojson::array();
  for (const auto& b : v.basis) basis.push_back(b);
  return basis;
}

Subspace subspace_from_json(const ojson& j, int ambient_dim) {
  if (!j.is_array()) {
    throw ValidationError("field 'subspace_basis' must be an array of rows");
  }
  if (j.empty()) {
    return zero_space(ambient_dim);
  }
  return make_subspace(ambient_dim, rows_from(j, "subspace_basis"));
}

ojson problem_to_json(const RelaxedProblem& p) {
  ojson out;
  out["family"] = family_to_json(p.family);
  if (!is_full(p.v)) {
    out["subspace_basis"] = subspace_to_json(p.v);
  }
  out["gamma"] = p.gamma;
  out["lambda"] = p.lambda_schedule;
  out["x0"] = p.x0;
  out["stop"] = ojson{{"abs_tol", p.stop.abs_tol},
                      {"rel_tol", p.stop.rel_tol},
                      {"max_iter", p.stop.max_iter}};
  return out;
}

RelaxedProblem problem_from_json(const ojson& j) {
  MixtureFamily family = family_from_json(require(j, "family"));
  Subspace v = j.contains("subspace_basis")
                   ? subspace_from_json(j["subspace_basis"], family.x_dim)
                   : full_space(family.x_dim);
  double gamma = 1.0;
  if (j.contains("gamma")) {
    gamma = number_from(j["gamma"], "gamma");
  }
  std::vector<double> lambda{1.0};
  if (j.contains("lambda")) {
    const ojson& lj = j["lambda"];
    if (lj.is_number()) {
      lambda = {lj.get<double>()};
    } else {
      lambda = vec_from(lj, "lambda");
    }
  }
  Vec x0 = j.contains("x0") ? vec_from(j["x0"], "x0")
                            : zeros(static_cast<std::size_t>(family.x_dim));
  StopRule stop;
  if (j.contains("stop")) {
    const ojson& sj = j["stop"];
    if (!sj.is_object()) {
      throw ValidationError("field 'stop' must be an object");
    }
    if (sj.contains("abs_tol")) {
      stop.abs_tol = number_from(sj["abs_tol"], "abs_tol");
    }
    if (sj.contains("rel_tol")) {
      stop.rel_tol = number_from(sj["rel_tol"], "rel_tol");
    }
    if (sj.contains("max_iter")) {
      if (!sj["max_iter"].is_number_integer()) {
        throw ValidationError("field 'max_iter' must be an integer");
      }
      stop.max_iter = sj["max_iter"].get<long>();
    }
  }
  return make_relaxed_problem(std::move(family), std::move(v), gamma,
                              std::move(lambda), std::move(x0), stop);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void dump_rec(const ojson& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += ojson(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& e : j) {
        if (e.is_structured()) {
          scalars = false;
          break;
        }
      }
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += scalars ? ", " : ",";
        if (!scalars) out += "\n" + pad_in;
        first = false;
        dump_rec(e, out, depth + 1);
      }
      if (!scalars) out += "\n" + pad;
      out += "]";
      return;
    }
    case ojson::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
      } else {
        out += format_number(x);
      }
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const ojson& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

ojson parse_json_text(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("JSON parse error: ") + e.what());
  }
}

ojson parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open input file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open output file '" + path + "'");
  }
  out << text;
  if (!out) {
    throw ValidationError("failed writing output file '" + path + "'");
  }
}

}  // namespace promix
