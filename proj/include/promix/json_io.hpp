#pragma once

#include <string>

#include <json.hpp>

#include "promix/family.hpp"
#include "promix/solver.hpp"

namespace promix {

// Insertion-ordered JSON keeps output key order deterministic.
using ojson = nlohmann::ordered_json;

ojson linop_to_json(const LinOp& l);
LinOp linop_from_json(const ojson& j);

ojson fn_to_json(const ConvexFnSpec& f);
ConvexFnSpec fn_from_json(const ojson& j);

ojson op_to_json(const MonotoneOpSpec& a);
MonotoneOpSpec op_from_json(const ojson& j);

ojson payload_to_json(const PayloadSpec& p);
PayloadSpec payload_from_json(const ojson& j);

ojson family_to_json(const MixtureFamily& f);
MixtureFamily family_from_json(const ojson& j);

// Subspace serializes as its basis rows; an empty list is the zero subspace.
ojson subspace_to_json(const Subspace& v);
Subspace subspace_from_json(const ojson& j, int ambient_dim);

// Problem schema: family, subspace_basis (omitted = full space), gamma,
// lambda (number or array), x0, stop {abs_tol, rel_tol, max_iter}.
ojson problem_to_json(const RelaxedProblem& p);
RelaxedProblem problem_from_json(const ojson& j);

// Serializer with every floating-point number rendered to 17 significant
// digits, so equal values always print identically across runs.
std::string dump_json(const ojson& j);

// Formats one double to 17 significant digits (used by the CSV writers too).
std::string format_number(double x);

ojson parse_json_text(const std::string& text);   // throws ValidationError
ojson parse_json_file(const std::string& path);   // throws ValidationError

void write_text_file(const std::string& path, const std::string& text);

}  // namespace promix
