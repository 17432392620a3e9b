#include "regent/io.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace regent;

TEST_CASE("matrix JSON round trip") {
  const HermitianOperator x = random_hermitian(4, 3, {2, 2});
  const HermitianOperator y = io::matrix_from_json(io::matrix_to_json(x));
  CHECK((x.matrix() - y.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(y.subsystems() == std::vector<int>{2, 2});

  const std::string path = (std::filesystem::temp_directory_path() / "regent_io_roundtrip.json").string();
  io::save_matrix(path, x);
  CHECK((io::load_matrix(path).matrix() - x.matrix()).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("matrix JSON validation") {
  CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(R"({"dim": 2, "re": [[1, 0]]})")), DomainError);
  CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(R"({"re": [[1]]})")), DomainError);
  CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(R"({"dim": 2, "re": [[1, 1], [0, 1]]})")), DomainError);
  const HermitianOperator real = io::matrix_from_json(io::Json::parse(R"({"dim": 2, "re": [[0.5, 0], [0, 0.5]]})"));
  CHECK(real.trace() == doctest::Approx(1.0));
  CHECK_THROWS_AS(io::load_matrix("/nonexistent/state.json"), DomainError);
}

TEST_CASE("program JSON round trip") {
  conic::ProgramBuilder b;
  const int x = b.add_psd(2);
  const int s = b.add_nonneg(1);
  const int r = b.add_row(1.0);
  b.add_term(r, x, hvec::pack(CMatrix::Identity(2, 2)).transpose().sparseView());
  b.add_entry(r, s, 1.0);
  CMatrix c(2, 2);
  c << 1.0, cd(0.3, 0.2), cd(0.3, -0.2), 2.0;
  b.add_objective(x, hvec::pack(c));
  b.add_objective_entry(s, 1.5);
  b.add_offset(0.25);
  const conic::ConicProgram p = b.build();
  const conic::ConicProgram q = io::program_from_json(io::Json::parse(io::program_to_json(p).dump()));
  CHECK((RMatrix(p.E) - RMatrix(q.E)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.c == q.c);
  CHECK(p.b == q.b);
  CHECK(q.offset == 0.25);
  CHECK(conic::solve(q).objective == doctest::Approx(conic::solve(p).objective));
  CHECK_THROWS_AS(io::program_from_json(io::Json::parse(R"({"blocks": []})")), DomainError);
}

TEST_CASE("non-finite numbers are encoded explicitly") {
  CHECK(io::number(INFINITY) == "inf");
  CHECK(io::number(NAN).is_null());
  CHECK(std::isinf(io::number_from_json(io::Json("-inf"))));
  CHECK(io::number_from_json(io::number(0.125)) == 0.125);
}

TEST_CASE("CSV output") {
  apps::Table t{{"a", "b"}, {{1.0, NAN}, {0.5, 2.0}}};
  std::ostringstream out;
  io::write_csv(out, t, {"note"});
  CHECK(out.str() == "# note\na,b\n1,nan\n0.5,2\n");
}
