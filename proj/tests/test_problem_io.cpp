#include "abelcs/errors.hpp"
#include "abelcs/evaluator.hpp"
#include "abelcs/problem.hpp"

#include "doctest.h"
#include "support/worked_examples.hpp"

using namespace abelcs;
using nlohmann::json;

namespace {

std::string fixture(const char* name) { return std::string(ABELCS_FIXTURES) + "/" + name; }

std::string input_error(const json& j) {
  try {
    parse_problem(j, "t.json");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("fixture files evaluate to the example values") {
  Problem p1 = load_problem(fixture("ex1.json"));
  auto ex = testdata::example1();
  CHECK(p1.obs.charges == ex.obs.charges);
  CHECK(p1.hint.has_value());
  CHECK(render(evaluate(p1.L, p1.C, p1.obs, {}, p1.hint).value) == "-25 * exp(i*pi*1/3)");
  CHECK(render(evaluate(p1.L, p1.C, p1.obs).value) == "-25 * exp(i*pi*1/3)");

  Problem p2 = load_problem(fixture("ex2.json"));
  CHECK(p2.C == testdata::example2().C);
  CHECK(render(evaluate(p2.L, p2.C, p2.obs).value) == "12 * exp(i*pi*-16/23)");

  Problem s3 = load_problem(fixture("s3.json"));
  CHECK(render(partition_function(s3.L, s3.C)) == "1");
}

TEST_CASE("crossing blocks") {
  Problem h = load_problem(fixture("hopf_crossings.json"));
  CHECK(h.L.L == int_mat({{2, 1}, {1, 2}}));
  json j = json::parse(R"({"surgery": [[0]], "coupling": [[1]], "charges": [[0]],
    "trivial": [{"copy": 0, "charge": 1, "framing": 0}, {"copy": 0, "charge": 2, "framing": 1}],
    "trivial_links": {"crossings": [[0, 1, -1], [0, 1, -1]]}})");
  Problem p = parse_problem(j);
  CHECK(p.obs.trivial_links == int_mat({{0, -1}, {-1, 1}}));
  j["trivial_links"] = json::parse(R"({"crossings": [[0, 1, 1]]})");
  CHECK(input_error(j).find("trivial_links.crossings") != std::string::npos);
}

TEST_CASE("flat ell and even K") {
  json j = json::parse(R"({"surgery": [[2, 0], [0, 3]], "K": [[2, 1], [1, 4]], "ell": [1, 2, 3, 4]})");
  Problem p = parse_problem(j);
  CHECK(p.obs.charges == int_mat({{1, 3}, {2, 4}}));
  CHECK(p.C == int_mat({{1, 1}, {0, 2}}));
  j["K"] = json::parse("[[1, 1], [1, 4]]");
  CHECK(input_error(j).find("K[0][0] = 1 is odd") != std::string::npos);
}

TEST_CASE("input errors name the location") {
  CHECK_THROWS_AS(load_problem(fixture("malformed.json")), InputError);
  CHECK_THROWS_AS(load_problem(fixture("missing.json")), InputError);
  CHECK(input_error(json::parse(R"({"surgery": [[1]]})")).find("coupling") != std::string::npos);
  CHECK(input_error(json::parse(R"({"surgery": [[1]], "coupling": [[1]], "K": [[2]]})")) != "");
  CHECK(input_error(json::parse(R"({"surgery": [[1, 2], [3, 1]], "coupling": [[1]]})")).find("symmetric") !=
        std::string::npos);
  CHECK(input_error(json::parse(R"({"surgery": [[1]], "coupling": [[1]], "charges": [[1, 2]]})"))
            .find("charges") != std::string::npos);
  CHECK(input_error(json::parse(R"({"surgery": [[1]], "coupling": [["x"]]})")).find("coupling[0][0]") !=
        std::string::npos);
  CHECK(input_error(json::parse(R"({"surgery": [[1]], "coupling": [[1]], "bogus": 1})")).find("bogus") !=
        std::string::npos);
  CHECK(input_error(json::parse(R"({"surgery": [[1]], "coupling": [[1]],
    "trivial": [{"copy": 3, "charge": 1}]})")).find("trivial[0].copy") != std::string::npos);
}

TEST_CASE("resolved json round trip") {
  Problem p1 = load_problem(fixture("ex1.json"));
  Problem back = parse_problem(problem_to_json(p1));
  CHECK(back.L.L == p1.L.L);
  CHECK(back.C == p1.C);
  CHECK(back.obs.charges == p1.obs.charges);
  CHECK(back.obs.trivial_links == p1.obs.trivial_links);
  CHECK(render(evaluate(back.L, back.C, back.obs).value) == "-25 * exp(i*pi*1/3)");
  CHECK(parse_problem(json::parse(R"({"surgery": [[9223372036854775807]], "coupling": [["123456789012345678901234567890"]]})"))
            .C(0, 0)
            .get_str() == "123456789012345678901234567890");
}
