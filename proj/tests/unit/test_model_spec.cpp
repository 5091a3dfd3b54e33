#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mg1tail/errors.hpp"
#include "mg1tail/model_spec.hpp"

using namespace mg1tail;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("mg1tail_test_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("parse_model literals") {
  const auto p = parse_model("pareto-it:alpha=3.5");
  REQUIRE(p.as_pareto() != nullptr);
  CHECK(p.as_pareto()->alpha == 3.5);
  const auto e = parse_model("exp:rate=2");
  REQUIRE(e.as_exponential() != nullptr);
  CHECK(e.as_exponential()->rate == 2.0);
  CHECK(parse_model(p.describe()).describe() == p.describe());
}

TEST_CASE("parse_model rejects malformed literals") {
  CHECK_THROWS_AS(parse_model("pareto-it"), ParseError);
  CHECK_THROWS_AS(parse_model("pareto-it:alpha"), ParseError);
  CHECK_THROWS_AS(parse_model("pareto-it:alpha=abc"), ParseError);
  CHECK_THROWS_AS(parse_model("pareto-it:alpha=3.5x"), ParseError);
  CHECK_THROWS_AS(parse_model("pareto-it:beta=3.5"), ParseError);
  CHECK_THROWS_AS(parse_model("pareto-it:alpha=3.5,rate=1"), ParseError);
  CHECK_THROWS_AS(parse_model("weibull:shape=0.5"), ParseError);
  CHECK_THROWS_AS(parse_model("lattice:path=x"), ParseError);
  CHECK_THROWS_AS(parse_model("pareto-it:alpha=1.5"), DomainError);
  CHECK_THROWS_AS(parse_model("exp:rate=-1"), DomainError);
}

TEST_CASE("lattice files") {
  const auto path = write_temp("two_point.txt", "# two-point law\n1 0.5\n2 0.5  # upper point\n\n");
  const auto m = parse_model("lattice:file=" + path.string());
  REQUIRE(m.as_lattice() != nullptr);
  CHECK(m.as_lattice()->spacing() == 1.0);
  CHECK(tail_prob(m, 1.5) == 0.5);
  CHECK(mean_integrated(m) == doctest::Approx(1.5));

  const auto frac = write_temp("frac.txt", "0.25 0.5\n0.75 0.25\n1.0 0.25\n");
  const auto f = load_lattice_file(frac);
  CHECK(f.as_lattice()->spacing() == doctest::Approx(0.25));
  CHECK(tail_prob(f, 0.5) == doctest::Approx(0.5));

  CHECK_THROWS_AS(load_lattice_file(fs::temp_directory_path() / "mg1tail_test_missing.txt"), IoError);
  CHECK_THROWS_AS(load_lattice_file(write_temp("bad.txt", "1 0.5 7\n")), ParseError);
  CHECK_THROWS_AS(load_lattice_file(write_temp("empty.txt", "# nothing\n")), ParseError);
  CHECK_THROWS_AS(load_lattice_file(write_temp("neg.txt", "-1 1\n")), ParseError);
  CHECK_THROWS_AS(load_lattice_file(write_temp("sum.txt", "1 0.5\n2 0.4\n")), DomainError);
}
