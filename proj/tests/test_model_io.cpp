#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "oracles.hpp"
#include "ppmor/benchmarks.hpp"
#include "ppmor/model_io.hpp"

using namespace ppmor;

TEST_CASE("M1 document") {
  const ModelFile f = parse_model(R"({"n": 1, "m": 1, "A": [[-1]], "B": [[1]], "C": [[1]], "D": [[1]]})");
  CHECK(f.model.A(0, 0) == -1.0);
  CHECK(f.model.D(0, 0) == 1.0);
  CHECK_FALSE(f.ph.has_value());
}

TEST_CASE("round trip is bit exact") {
  const StateSpaceModel m = oracle::random_strictly_passive(5, 2, 3);
  const ModelFile f = parse_model(dump_model(m));
  CHECK(f.model.A == m.A);
  CHECK(f.model.B == m.B);
  CHECK(f.model.C == m.C);
  CHECK(f.model.D == m.D);

  const PortHamiltonianModel p = random_ph(4, 2, 0.5, 11);
  const ModelFile g = parse_model(dump_model(ph_to_statespace(p), &p));
  REQUIRE(g.ph.has_value());
  CHECK(g.ph->J == p.J);
  CHECK(g.ph->S == p.S);
  CHECK(dump_model(g.model, &*g.ph) == dump_model(ph_to_statespace(p), &p));

  const std::string path = (std::filesystem::temp_directory_path() / "ppmor_io_roundtrip.json").string();
  write_model_file(path, m);
  CHECK(read_model_file(path).model.A == m.A);
  std::filesystem::remove(path);
}

TEST_CASE("key order of written files") {
  const std::string s = dump_model(oracle::m1());
  CHECK(s.find("\"n\"") < s.find("\"m\""));
  CHECK(s.find("\"m\"") < s.find("\"A\""));
  CHECK(s.find("\"C\"") < s.find("\"D\""));
}

TEST_CASE("static model with n = 0") {
  const ModelFile f = parse_model(R"({"n": 0, "m": 2, "A": [], "B": [], "C": [[], []], "D": [[2, 0], [0, 3]]})");
  CHECK(f.model.n() == 0);
  CHECK(f.model.m() == 2);
  CHECK(f.model.D(1, 1) == 3.0);
  CHECK(parse_model(dump_model(f.model)).model.D == f.model.D);
}

TEST_CASE("malformed documents are rejected") {
  const char* bad[] = {
      "not json",
      R"({"n": 1, "m": 1, "A": [[-1]], "B": [[1]], "C": [[1]]})",
      R"({"n": 1, "m": 1, "A": [[-1, 0]], "B": [[1]], "C": [[1]], "D": [[1]]})",
      R"({"n": 2, "m": 1, "A": [[-1]], "B": [[1]], "C": [[1]], "D": [[1]]})",
      R"({"n": -1, "m": 1, "A": [], "B": [], "C": [], "D": [[1]]})",
      R"({"n": 1, "m": 1, "A": [["x"]], "B": [[1]], "C": [[1]], "D": [[1]]})",
      R"({"n": 1, "m": 1, "A": [[NaN]], "B": [[1]], "C": [[1]], "D": [[1]]})",
      R"({"n": 1, "m": 1, "A": [[1e999]], "B": [[1]], "C": [[1]], "D": [[1]]})",
      R"([1, 2, 3])",
  };
  for (const char* doc : bad) {
    CAPTURE(doc);
    CHECK_THROWS_AS(parse_model(doc), InvalidInput);
  }
  CHECK_THROWS_AS(read_model_file("/nonexistent/model.json"), InvalidInput);
}

TEST_CASE("port-Hamiltonian blocks must agree with A, B, C, D") {
  const PortHamiltonianModel p = random_ph(3, 1, 0.5, 2);
  StateSpaceModel m = ph_to_statespace(p);
  m.A(0, 0) += 1e-3;
  CHECK_THROWS_AS(parse_model(dump_model(m, &p)), InvalidInput);
}
