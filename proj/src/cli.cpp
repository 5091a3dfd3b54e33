#include "mg1tail/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "mg1tail/approximations.hpp"
#include "mg1tail/errors.hpp"
#include "mg1tail/geom_sums.hpp"
#include "mg1tail/light_tails.hpp"
#include "mg1tail/mc_oracle.hpp"
#include "mg1tail/model_spec.hpp"
#include "mg1tail/sweep.hpp"
#include "mg1tail/transition.hpp"

#ifndef MG1TAIL_VERSION
#define MG1TAIL_VERSION "0.0.0"
#endif

namespace mg1tail::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Flags (no value) that may appear in a config file as `name = true`.
const std::set<std::string, std::less<>> kBooleanFlags = {"log-grid", "simulate"};
const std::set<std::string, std::less<>> kSeededCommands = {"sweep", "simulate", "compare", "geom"};

bool has_option(const std::vector<std::string>& args, std::string_view name) {
  const std::string flag = "--" + std::string(name);
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// Appends settings from --config (key = value lines) and MG1_SEED for options not given on the
// command line, so the precedence is flags > file > environment > defaults.
std::vector<std::string> expand_defaults(std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a path");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  std::vector<std::string> extra;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw IoError("cannot open config file '" + *config_path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw UsageError(*config_path + ":" + std::to_string(lineno) + ": expected 'key = value'");
      }
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (has_option(args, key)) continue;
      if (kBooleanFlags.contains(key)) {
        if (value == "true" || value == "1") extra.push_back("--" + key);
      } else {
        extra.push_back("--" + key);
        extra.push_back(value);
      }
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  if (!args.empty() && kSeededCommands.contains(args.front()) && !has_option(args, "seed")) {
    if (const char* env = std::getenv("MG1_SEED"); env != nullptr && *env != '\0') {
      args.push_back("--seed");
      args.push_back(env);
    }
  }
  return args;
}

struct QueueArgs {
  std::string dist;
  double rho = 0.0;
};

void add_queue_options(CLI::App* cmd, QueueArgs& q) {
  cmd->add_option("--dist", q.dist, "model literal: pareto-it:alpha=A | exp:rate=R | lattice:file=PATH")->required();
  cmd->add_option("--rho", q.rho, "traffic intensity in (0,1)")->required();
}

QueueModel make_queue(const QueueArgs& a) { return QueueModel(parse_model(a.dist), a.rho); }

std::string regime_line(const QueueModel& q, double x) {
  if (!tail_index(q.model())) return "regime: n/a (model has no tail index)";
  const RegimeReport r = regime_classify(q, x);
  return "regime: " + std::string(to_string(r.regime)) + " (c=" + fmt(r.c_value) + ", threshold_x=" + fmt(r.threshold_x) +
         ")";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << content;
  f.flush();
  if (!f) throw IoError("error writing '" + path + "'");
}

void print_estimate(std::ostream& out, const SimulationEstimate& e) {
  out << "method: " << to_string(e.method) << '\n'
      << "estimate: " << format_number(e.estimate) << '\n'
      << "half_width: " << format_number(e.half_width) << '\n'
      << "rel_err: " << format_number(e.rel_err) << '\n'
      << "confidence: " << fmt(e.confidence) << '\n'
      << "n_samples: " << e.n_samples << '\n'
      << "seed: " << e.seed << '\n'
      << "converged: " << (e.converged ? "true" : "false") << '\n';
}

}  // namespace

std::string version() { return MG1TAIL_VERSION; }

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tail probabilities of the M/G/1 waiting time: approximations and Monte Carlo checks", "mg1tail"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  // approx
  QueueArgs approx_q;
  double approx_x = 0.0;
  std::string approx_method;
  std::optional<double> approx_p;
  auto* approx = app.add_subcommand("approx", "evaluate one approximation at (rho, x)");
  add_queue_options(approx, approx_q);
  approx->add_option("--x", approx_x, "tail level (x_scaled for corrected-ht)")->required()->check(CLI::NonNegativeNumber);
  approx->add_option("--method", approx_method, "ht | tail | h | j | h-clt | cl | corrected-ht | geom")
      ->required()
      ->check(CLI::IsMember({"ht", "tail", "h", "j", "h-clt", "cl", "corrected-ht", "geom"}));
  approx->add_option("--p", approx_p, "geometric parameter for --method geom (default 1 - rho)");

  // sweep
  QueueArgs sweep_q;
  SweepSpec sweep_spec;
  std::string sweep_out;
  std::string sweep_format = "csv";
  bool sweep_simulate = false;
  SimulationSettings sweep_sim;
  auto* sweep = app.add_subcommand("sweep", "tabulate every approximation over an x grid");
  add_queue_options(sweep, sweep_q);
  sweep->add_option("--x-min", sweep_spec.x_min)->required();
  sweep->add_option("--x-max", sweep_spec.x_max)->required();
  sweep->add_option("--points", sweep_spec.points)->required()->check(CLI::PositiveNumber);
  sweep->add_flag("--log-grid", sweep_spec.log_grid, "space x geometrically");
  sweep->add_option("--out", sweep_out, "output path")->required();
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--simulate", sweep_simulate, "add conditional Monte Carlo estimates");
  sweep->add_option("--rel-err", sweep_sim.rel_err)->check(CLI::PositiveNumber);
  sweep->add_option("--confidence", sweep_sim.confidence)->check(CLI::Range(0.5, 0.999999));
  sweep->add_option("--seed", sweep_sim.seed);
  sweep->add_option("--max-samples", sweep_sim.max_samples)->check(CLI::PositiveNumber);
  sweep->add_option("--threads", sweep_sim.threads)->check(CLI::PositiveNumber);

  // threshold
  QueueArgs thr_q;
  double thr_c = 1.0;
  std::optional<double> thr_x;
  auto* threshold = app.add_subcommand("threshold", "transition threshold, kappa and crossing point");
  add_queue_options(threshold, thr_q);
  threshold->add_option("--c", thr_c, "threshold constant")->check(CLI::PositiveNumber);
  threshold->add_option("--x", thr_x, "also report rho_hat(x) and the regime at x");

  // simulate
  QueueArgs sim_q;
  double sim_x = 0.0;
  std::string sim_method = "ak";
  std::uint64_t sim_samples = 1'000'000;
  SimulationSettings sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of P(W > x)");
  add_queue_options(simulate, sim_q);
  simulate->add_option("--x", sim_x)->required()->check(CLI::NonNegativeNumber);
  simulate->add_option("--method", sim_method)->check(CLI::IsMember({"ak", "crude"}));
  simulate->add_option("--samples", sim_samples, "replications for --method crude")->check(CLI::Range(100ULL, 1ULL << 62));
  simulate->add_option("--rel-err", sim.rel_err)->check(CLI::PositiveNumber);
  simulate->add_option("--confidence", sim.confidence)->check(CLI::Range(0.5, 0.999999));
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--max-samples", sim.max_samples)->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim.threads)->check(CLI::PositiveNumber);

  // compare
  QueueArgs cmp_q;
  SweepSpec cmp_spec;
  SimulationSettings cmp_sim;
  std::string cmp_out;
  auto* compare = app.add_subcommand("compare", "all approximations against Monte Carlo, with ratio columns");
  add_queue_options(compare, cmp_q);
  compare->add_option("--x-min", cmp_spec.x_min)->required();
  compare->add_option("--x-max", cmp_spec.x_max)->required();
  compare->add_option("--points", cmp_spec.points)->check(CLI::PositiveNumber);
  compare->add_flag("--log-grid", cmp_spec.log_grid);
  compare->add_option("--rel-err", cmp_sim.rel_err)->check(CLI::PositiveNumber);
  compare->add_option("--confidence", cmp_sim.confidence)->check(CLI::Range(0.5, 0.999999));
  compare->add_option("--seed", cmp_sim.seed);
  compare->add_option("--max-samples", cmp_sim.max_samples)->check(CLI::PositiveNumber);
  compare->add_option("--threads", cmp_sim.threads)->check(CLI::PositiveNumber);
  compare->add_option("--out", cmp_out, "also write the sweep table as CSV");
  cmp_spec.points = 10;

  // geom
  double geom_beta = 0.0;
  double geom_p = 0.0;
  std::optional<double> geom_x;
  double geom_c = 1.0;
  std::optional<std::uint64_t> geom_samples;
  std::uint64_t geom_seed = 0;
  auto* geom = app.add_subcommand("geom", "geometric random sum approximation and threshold");
  geom->add_option("--betaY", geom_beta, "summand tail index (standard Pareto, > 2)")->required();
  geom->add_option("--p", geom_p, "geometric parameter in (0,1)")->required();
  geom->add_option("--x", geom_x)->check(CLI::NonNegativeNumber);
  geom->add_option("--c", geom_c)->check(CLI::PositiveNumber);
  geom->add_option("--samples", geom_samples, "crude Monte Carlo replications at --x")->check(CLI::Range(100ULL, 1ULL << 62));
  geom->add_option("--seed", geom_seed);

  try {
    std::vector<std::string> args = expand_defaults(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (approx->parsed()) {
      const QueueModel q = make_queue(approx_q);
      const double x = approx_x;
      double value = 0.0;
      if (approx_method == "ht") {
        value = heavy_traffic(q, x);
      } else if (approx_method == "tail") {
        value = heavy_tail(q, x);
      } else if (approx_method == "h") {
        value = h_approx(q, x);
      } else if (approx_method == "j") {
        value = j_approx(q, x);
      } else if (approx_method == "h-clt") {
        value = h_clt(q, x);
      } else if (approx_method == "cl") {
        value = cramer_lundberg_tail(q.model(), q.rho(), x);
      } else if (approx_method == "corrected-ht") {
        value = corrected_heavy_traffic(q.model(), q.rho(), x);
      } else {
        value = geom_tail_approx(GeomModel(q.model(), approx_p.value_or(1.0 - q.rho())), x);
      }
      out << "model: " << q.model().describe() << '\n'
          << "rho: " << fmt(q.rho()) << '\n'
          << "x: " << fmt(x) << '\n'
          << "method: " << approx_method << '\n'
          << "value: " << fmt(value) << '\n';
      if (approx_method == "tail" && value > 1.0) {
        out << "note: heavy-tail asymptotic exceeds 1; x is far below its range of validity\n";
      }
      out << regime_line(q, approx_method == "corrected-ht" ? x / ((1.0 - q.rho()) * (1.0 - q.rho())) : x) << '\n';
    } else if (sweep->parsed()) {
      const QueueModel q = make_queue(sweep_q);
      std::optional<SimulationSettings> s;
      if (sweep_simulate) s = sweep_sim;
      const SweepTable t = build_sweep(q, sweep_spec, s, version());
      write_file(sweep_out, sweep_format == "json" ? to_json(t) : to_csv(t));
      out << "wrote " << t.rows.size() << " rows to " << sweep_out << '\n';
      if (t.metadata.threshold_x) out << "threshold_x: " << fmt(*t.metadata.threshold_x) << '\n';
    } else if (threshold->parsed()) {
      const QueueModel q = make_queue(thr_q);
      out << "model: " << q.model().describe() << '\n'
          << "rho: " << fmt(q.rho()) << '\n'
          << "kappa: " << fmt(kappa(q.model())) << '\n'
          << "c: " << fmt(thr_c) << '\n'
          << "threshold_x: " << fmt(threshold_x(q, thr_c)) << '\n';
      try {
        out << "crossing_point: " << fmt(crossing_point(q)) << '\n';
      } catch (const NoCrossingError&) {
        out << "crossing_point: none\n";
      }
      if (thr_x) {
        const ThresholdRho r = threshold_rho(q.model(), *thr_x, thr_c);
        out << "rho_hat: " << fmt(r.value) << (r.in_range ? "" : " (out of range)") << '\n';
        out << regime_line(q, *thr_x) << '\n';
      }
    } else if (simulate->parsed()) {
      const QueueModel q = make_queue(sim_q);
      out << "model: " << q.model().describe() << '\n' << "rho: " << fmt(q.rho()) << '\n' << "x: " << fmt(sim_x) << '\n';
      if (sim_method == "crude") {
        McOptions o;
        o.confidence = sim.confidence;
        o.threads = sim.threads;
        print_estimate(out, crude_mc(q, sim_x, sim_samples, sim.seed, o));
      } else {
        AkOptions o;
        o.target_rel_err = sim.rel_err;
        o.confidence = sim.confidence;
        o.seed = sim.seed;
        o.max_samples = sim.max_samples;
        o.threads = sim.threads;
        print_estimate(out, ak_estimate(q, sim_x, o));
      }
    } else if (compare->parsed()) {
      const QueueModel q = make_queue(cmp_q);
      const SweepTable t = build_sweep(q, cmp_spec, cmp_sim, version());
      auto ratio = [](double a, double b) { return b > 0.0 ? a / b : std::numeric_limits<double>::quiet_NaN(); };
      out << "model: " << t.metadata.model << "  rho: " << fmt(t.metadata.rho) << "  seed: " << cmp_sim.seed << '\n';
      if (t.metadata.threshold_x) out << "threshold_x: " << fmt(*t.metadata.threshold_x) << '\n';
      out << std::setw(12) << "x" << std::setw(13) << "mc" << std::setw(9) << "rel_err" << std::setw(9) << "ht/mc"
          << std::setw(10) << "tail/mc" << std::setw(9) << "h/mc" << std::setw(9) << "j/mc";
      if (t.has_h_clt) out << std::setw(10) << "hclt/mc";
      out << "  regime\n";
      for (const auto& r : t.rows) {
        const double mc = r.mc_estimate.value();
        out << std::setw(12) << fmt(r.x) << std::setw(13) << std::setprecision(5) << mc << std::setw(9) << std::setprecision(3)
            << r.mc_rel_err.value() << std::setw(9) << std::setprecision(4) << ratio(r.heavy_traffic, mc) << std::setw(10)
            << ratio(r.heavy_tail, mc) << std::setw(9) << ratio(r.h, mc) << std::setw(9) << ratio(r.j, mc);
        if (t.has_h_clt) out << std::setw(10) << ratio(r.h_clt.value(), mc);
        out << "  " << r.regime << (r.mc_converged.value() ? "" : " (mc not converged)") << '\n';
      }
      if (!cmp_out.empty()) write_file(cmp_out, to_csv(t));
    } else if (geom->parsed()) {
      const GeomModel g = GeomModel::pareto(geom_beta, geom_p);
      out << "betaY: " << fmt(g.beta_y()) << '\n'
          << "p: " << fmt(g.p()) << '\n'
          << "mu: " << fmt(g.mu()) << '\n'
          << "tau: " << fmt(g.tau()) << '\n'
          << "threshold: " << fmt(geom_threshold(g, geom_c)) << '\n';
      if (geom_x) {
        const double x = *geom_x;
        const RegimeReport r = geom_classify(g, x);
        out << "x: " << fmt(x) << '\n'
            << "gamma: " << fmt(geom_gamma(g, x)) << '\n'
            << "approx: " << fmt(geom_tail_approx(g, x)) << '\n'
            << "light_approx: " << fmt(geom_light_approx(g, x)) << '\n'
            << "heavy_approx: " << fmt(geom_heavy_approx(g, x)) << '\n'
            << "regime: " << to_string(r.regime) << " (c=" << fmt(r.c_value) << ")\n";
        if (geom_samples) {
          const SimulationEstimate e = crude_mc(g.to_queue_model(), x, *geom_samples, geom_seed);
          out << "mc_estimate: " << format_number(e.estimate) << '\n'
              << "mc_half_width: " << format_number(e.half_width) << '\n'
              << "mc_samples: " << e.n_samples << '\n'
              << "mc_seed: " << e.seed << '\n';
        }
      }
    }
    return kOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace mg1tail::cli
