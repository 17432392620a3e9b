#pragma once

#include "regent/apps.hpp"
#include "regent/conic.hpp"
#include "regent/estimators.hpp"
#include "regent/linalg.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace regent::io {

using Json = nlohmann::json;

/// {"dim": n, "subsystems": [...], "re": [[...]], "im": [[...]]}, row-major; "im" optional.
HermitianOperator matrix_from_json(const Json& j);
Json matrix_to_json(const HermitianOperator& x);
HermitianOperator load_matrix(const std::string& path);
void save_matrix(const std::string& path, const HermitianOperator& x);

/// Number, with "inf" / "-inf" for infinities and null for NaN.
Json number(double x);
double number_from_json(const Json& j);

/// {"blocks": [{"kind", "n", "fixed_first"?}], "objective": {"c", "offset"},
///  "equalities": {"rows", "b", "entries": [[row, col, value], ...]}}.
Json program_to_json(const conic::ConicProgram& p);
conic::ConicProgram program_from_json(const Json& j);
conic::ConicProgram load_program(const std::string& path);

Json to_json(const SandwichReport& r);
Json to_json(const apps::BoundReport& r);

/// Writes the table as CSV preceded by '#' comment lines. NaN is written as "nan".
void write_csv(std::ostream& out, const apps::Table& t, const std::vector<std::string>& header_comments);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace regent::io
