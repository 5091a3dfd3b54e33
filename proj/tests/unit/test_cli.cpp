#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mg1tail/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = mg1tail::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string field(const std::string& text, const std::string& key) {
  const std::string tag = key + ": ";
  const auto pos = text.find(tag);
  if (pos == std::string::npos) return {};
  const auto end = text.find('\n', pos);
  return text.substr(pos + tag.size(), end - pos - tag.size());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("mg1tail_cli_" + name); }

}  // namespace

TEST_CASE("approx") {
  auto r = run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x", "10", "--method", "ht"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "value")) == doctest::Approx(0.3011942).epsilon(1e-6));
  CHECK(field(r.out, "regime").starts_with("heavy-traffic"));
  r = run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x", "10", "--method", "j"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "value")) == doctest::Approx(0.2674981).epsilon(1e-6));
  r = run({"approx", "--dist", "pareto-it:alpha=2.5", "--rho", "0.8", "--x", "10", "--method", "h-clt"});
  CHECK(r.code == 3);
  CHECK(r.err.find("variance") != std::string::npos);
  r = run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x", "0.5", "--method", "tail"});
  CHECK(r.code == 0);
  CHECK(r.out.find("note:") != std::string::npos);
  r = run({"approx", "--dist", "exp:rate=1", "--rho", "0.9", "--x", "0.1", "--method", "corrected-ht"});
  CHECK(std::stod(field(r.out, "value")) == doctest::Approx(0.38674102345450121).epsilon(1e-9));
  CHECK(field(r.out, "regime").starts_with("n/a"));
  r = run({"approx", "--dist", "pareto-it:alpha=4", "--rho", "0.9", "--x", "10", "--method", "geom"});
  CHECK(std::stod(field(r.out, "value")) == doctest::Approx(0.4969623266831026).epsilon(1e-9));
  CHECK(run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.5", "--x", "1", "--method", "cl"}).code == 3);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x", "10"}).code == 2);
  CHECK(run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x", "10", "--method", "zz"}).code == 2);
  CHECK(run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "1.5", "--x", "10", "--method", "ht"}).code == 2);
  CHECK(run({"approx", "--dist", "nonsense", "--rho", "0.5", "--x", "10", "--method", "ht"}).code == 2);
  CHECK(run({"approx", "--dist", "pareto-it:alpha=3.5", "--rho", "0.5", "--x", "-1", "--method", "ht"}).code == 2);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("threshold") {
  auto r = run({"threshold", "--dist", "pareto-it:alpha=3.1", "--rho", "0.95"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "threshold_x")) == doctest::Approx(125.8208).epsilon(1e-6));
  CHECK(std::stod(field(r.out, "kappa")) == doctest::Approx(2.1));
  r = run({"threshold", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x", "100"});
  CHECK(std::stod(field(r.out, "crossing_point")) == doctest::Approx(79.647864062709171).epsilon(1e-9));
  CHECK(std::stod(field(r.out, "rho_hat")) == doctest::Approx(0.8848707).epsilon(1e-6));
  CHECK(run({"threshold", "--dist", "exp:rate=1", "--rho", "0.8"}).code == 3);
}

TEST_CASE("simulate") {
  auto r = run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--seed", "7"});
  CHECK(r.code == 0);
  const double est = std::stod(field(r.out, "estimate"));
  const double hw = std::stod(field(r.out, "half_width"));
  CHECK(std::abs(est - 0.18394) <= hw + 1e-5);
  CHECK(std::stod(field(r.out, "rel_err")) <= 0.05);
  CHECK(field(r.out, "seed") == "7");
  CHECK(!field(r.out, "n_samples").empty());
  CHECK(run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--seed", "7"}).out == r.out);
  r = run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--seed", "7", "--method", "crude", "--samples", "1000"});
  CHECK(r.code == 0);
  CHECK(field(r.out, "method") == "crude");
  CHECK(field(r.out, "n_samples") == "1000");
}

TEST_CASE("MG1_SEED and config precedence") {
  ::setenv("MG1_SEED", "123", 1);
  auto r = run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--method", "crude", "--samples", "1000"});
  CHECK(field(r.out, "seed") == "123");
  const fs::path cfg = temp("config.txt");
  std::ofstream(cfg) << "# defaults\nseed = 55\nmethod = crude\nsamples = 2000\n";
  r = run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(field(r.out, "seed") == "55");
  CHECK(field(r.out, "n_samples") == "2000");
  r = run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--config", cfg.string(), "--seed", "9"});
  CHECK(field(r.out, "seed") == "9");
  ::unsetenv("MG1_SEED");
  CHECK(run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--config", temp("missing").string()}).code == 4);
  std::ofstream(temp("bad_config.txt")) << "no equals sign\n";
  CHECK(run({"simulate", "--dist", "exp:rate=1", "--rho", "0.5", "--x", "2", "--config", temp("bad_config.txt").string()}).code == 2);
}

TEST_CASE("sweep writes byte-identical files") {
  const fs::path a = temp("a.csv");
  const fs::path b = temp("b.csv");
  const std::vector<std::string> base = {"sweep", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x-min", "1", "--x-max",
                                         "100", "--points", "5", "--log-grid", "--simulate", "--rel-err", "0.2", "--seed", "42"};
  auto args = base;
  args.insert(args.end(), {"--out", a.string()});
  CHECK(run(args).code == 0);
  args = base;
  args.insert(args.end(), {"--out", b.string()});
  CHECK(run(args).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("# threshold_x=") != std::string::npos);

  const fs::path j = temp("c.json");
  CHECK(run({"sweep", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x-min", "1", "--x-max", "10", "--points", "1",
             "--format", "json", "--out", j.string()})
            .code == 0);
  CHECK(slurp(j).find("\"rows\"") != std::string::npos);
  CHECK(run({"sweep", "--dist", "pareto-it:alpha=3.5", "--rho", "0.8", "--x-min", "1", "--x-max", "10", "--points", "3",
             "--out", "/nonexistent-dir/x.csv"})
            .code == 4);
}

TEST_CASE("geom and compare") {
  auto r = run({"geom", "--betaY", "2.5", "--p", "0.05", "--x", "149.787"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "threshold")) == doctest::Approx(149.787).epsilon(1e-5));
  CHECK(field(r.out, "regime").starts_with("transition"));
  r = run({"geom", "--betaY", "3", "--p", "0.1", "--x", "10", "--samples", "10000", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(!field(r.out, "mc_estimate").empty());
  CHECK(run({"geom", "--betaY", "2", "--p", "0.1"}).code == 2);
  r = run({"compare", "--dist", "exp:rate=1", "--rho", "0.5", "--x-min", "1", "--x-max", "4", "--points", "2", "--rel-err",
           "0.2", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ht/mc") != std::string::npos);
}
