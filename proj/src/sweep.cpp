#include "mg1tail/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mg1tail/approximations.hpp"
#include "mg1tail/errors.hpp"
#include "mg1tail/mc_oracle.hpp"
#include "mg1tail/model_spec.hpp"
#include "mg1tail/transition.hpp"

namespace mg1tail {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180 record splitting; `pos` advances past the record terminator.
std::vector<std::string> next_record(std::string_view text, std::size_t& pos) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  while (pos < text.size()) {
    const char c = text[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          fields.back() += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> header_for(const SweepTable& t) {
  std::vector<std::string> h = {"x", "heavy_traffic", "heavy_tail", "h", "j"};
  if (t.has_h_clt) h.emplace_back("h_clt");
  if (t.has_mc) {
    h.emplace_back("mc_estimate");
    h.emplace_back("mc_rel_err");
    h.emplace_back("mc_converged");
  }
  h.emplace_back("regime");
  return h;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> make_grid(const SweepSpec& spec) {
  if (spec.points == 0) throw DomainError("sweep needs at least one point");
  if (!(spec.x_min >= 0.0) || !std::isfinite(spec.x_max)) throw DomainError("sweep range must be finite and nonnegative");
  if (spec.points == 1) return {spec.x_min};
  if (!(spec.x_max > spec.x_min)) throw DomainError("sweep needs x_max > x_min");
  if (spec.log_grid && !(spec.x_min > 0.0)) throw DomainError("log grid needs x_min > 0");
  std::vector<double> xs(spec.points);
  const auto last = static_cast<double>(spec.points - 1);
  for (std::size_t i = 0; i < spec.points; ++i) {
    const double f = static_cast<double>(i) / last;
    xs[i] = spec.log_grid ? spec.x_min * std::pow(spec.x_max / spec.x_min, f) : spec.x_min + (spec.x_max - spec.x_min) * f;
  }
  xs.back() = spec.x_max;
  return xs;
}

SweepTable build_sweep(const QueueModel& q, const SweepSpec& spec, const std::optional<SimulationSettings>& simulation,
                       std::string version) {
  SweepTable t;
  t.metadata.model = q.model().describe();
  t.metadata.rho = q.rho();
  t.metadata.version = std::move(version);
  const bool has_index = tail_index(q.model()).has_value();
  if (has_index) {
    t.metadata.threshold_x = threshold_x(q, 1.0);
    try {
      t.metadata.crossing_point = crossing_point(q);
    } catch (const NoCrossingError&) {
    }
  }
  t.has_h_clt = std::isfinite(variance_integrated(q.model()));
  t.has_mc = simulation.has_value();
  if (simulation) t.metadata.seed = simulation->seed;

  for (double x : make_grid(spec)) {
    const ApproximationPoint p = evaluate_point(q, x);
    SweepRow row;
    row.x = x;
    row.heavy_traffic = p.heavy_traffic;
    row.heavy_tail = p.heavy_tail;
    row.h = p.h;
    row.j = p.j;
    row.h_clt = p.h_clt;
    row.regime = has_index ? std::string(to_string(regime_classify(q, x).regime)) : "n/a";
    if (simulation) {
      AkOptions o;
      o.target_rel_err = simulation->rel_err;
      o.confidence = simulation->confidence;
      o.seed = simulation->seed;
      o.max_samples = simulation->max_samples;
      o.threads = simulation->threads;
      const SimulationEstimate e = ak_estimate(q, x, o);
      row.mc_estimate = e.estimate;
      row.mc_rel_err = e.rel_err;
      row.mc_converged = e.converged;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string to_csv(const SweepTable& t) {
  std::ostringstream os;
  os << "# model=" << t.metadata.model << '\n';
  os << "# rho=" << format_number(t.metadata.rho) << '\n';
  if (t.metadata.seed) os << "# seed=" << *t.metadata.seed << '\n';
  if (t.metadata.threshold_x) os << "# threshold_x=" << format_number(*t.metadata.threshold_x) << '\n';
  if (t.metadata.crossing_point) os << "# crossing_point=" << format_number(*t.metadata.crossing_point) << '\n';
  os << "# version=" << t.metadata.version << '\n';

  const auto header = header_for(t);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : t.rows) {
    os << format_number(r.x) << ',' << format_number(r.heavy_traffic) << ',' << format_number(r.heavy_tail) << ','
       << format_number(r.h) << ',' << format_number(r.j);
    if (t.has_h_clt) os << ',' << format_number(r.h_clt.value());
    if (t.has_mc) {
      os << ',' << format_number(r.mc_estimate.value()) << ',' << format_number(r.mc_rel_err.value()) << ','
         << (r.mc_converged.value() ? "true" : "false");
    }
    os << ',' << csv_field(r.regime) << '\n';
  }
  return os.str();
}

SweepTable parse_csv(std::string_view text) {
  SweepTable t;
  std::size_t pos = 0;
  // metadata comment lines
  while (pos < text.size() && text[pos] == '#') {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line.remove_prefix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(line.substr(0, eq));
    const std::string value(line.substr(eq + 1));
    if (key == "model") {
      t.metadata.model = value;
    } else if (key == "rho") {
      t.metadata.rho = parse_double(value);
    } else if (key == "seed") {
      t.metadata.seed = std::stoull(value);
    } else if (key == "threshold_x") {
      t.metadata.threshold_x = parse_double(value);
    } else if (key == "crossing_point") {
      t.metadata.crossing_point = parse_double(value);
    } else if (key == "version") {
      t.metadata.version = value;
    }
  }
  if (pos >= text.size()) throw ParseError("CSV has no header row");
  const auto header = next_record(text, pos);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"x", "heavy_traffic", "heavy_tail", "h", "j", "regime"}) {
    if (!col.contains(required)) throw ParseError(std::string("CSV header lacks column ") + required);
  }
  t.has_h_clt = col.contains("h_clt");
  t.has_mc = col.contains("mc_estimate");
  while (pos < text.size()) {
    const auto f = next_record(text, pos);
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != header.size()) throw ParseError("CSV row has " + std::to_string(f.size()) + " fields, expected " +
                                                    std::to_string(header.size()));
    SweepRow r;
    r.x = parse_double(f[col["x"]]);
    r.heavy_traffic = parse_double(f[col["heavy_traffic"]]);
    r.heavy_tail = parse_double(f[col["heavy_tail"]]);
    r.h = parse_double(f[col["h"]]);
    r.j = parse_double(f[col["j"]]);
    if (t.has_h_clt) r.h_clt = parse_double(f[col["h_clt"]]);
    if (t.has_mc) {
      r.mc_estimate = parse_double(f[col["mc_estimate"]]);
      r.mc_rel_err = parse_double(f[col["mc_rel_err"]]);
      r.mc_converged = f[col["mc_converged"]] == "true";
    }
    r.regime = f[col["regime"]];
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string to_json(const SweepTable& t) {
  nlohmann::ordered_json meta;
  meta["model"] = t.metadata.model;
  meta["rho"] = t.metadata.rho;
  meta["seed"] = t.metadata.seed ? nlohmann::ordered_json(*t.metadata.seed) : nlohmann::ordered_json(nullptr);
  meta["threshold_x"] = t.metadata.threshold_x ? nlohmann::ordered_json(*t.metadata.threshold_x) : nlohmann::ordered_json(nullptr);
  meta["crossing_point"] =
      t.metadata.crossing_point ? nlohmann::ordered_json(*t.metadata.crossing_point) : nlohmann::ordered_json(nullptr);
  meta["version"] = t.metadata.version;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row;
    row["x"] = r.x;
    row["heavy_traffic"] = r.heavy_traffic;
    row["heavy_tail"] = r.heavy_tail;
    row["h"] = r.h;
    row["j"] = r.j;
    if (t.has_h_clt) row["h_clt"] = r.h_clt.value();
    if (t.has_mc) {
      row["mc_estimate"] = r.mc_estimate.value();
      row["mc_rel_err"] = number_or_null(r.mc_rel_err.value());
      row["mc_converged"] = r.mc_converged.value();
    }
    row["regime"] = r.regime;
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

SweepTable parse_json(std::string_view text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    SweepTable t;
    const auto& meta = doc.at("metadata");
    t.metadata.model = meta.at("model").get<std::string>();
    t.metadata.rho = meta.at("rho").get<double>();
    if (!meta.at("seed").is_null()) t.metadata.seed = meta.at("seed").get<std::uint64_t>();
    if (!meta.at("threshold_x").is_null()) t.metadata.threshold_x = meta.at("threshold_x").get<double>();
    if (!meta.at("crossing_point").is_null()) t.metadata.crossing_point = meta.at("crossing_point").get<double>();
    t.metadata.version = meta.at("version").get<std::string>();
    const auto& rows = doc.at("rows");
    if (!rows.empty()) {
      t.has_h_clt = rows.front().contains("h_clt");
      t.has_mc = rows.front().contains("mc_estimate");
    }
    for (const auto& jr : rows) {
      SweepRow r;
      r.x = jr.at("x").get<double>();
      r.heavy_traffic = jr.at("heavy_traffic").get<double>();
      r.heavy_tail = jr.at("heavy_tail").get<double>();
      r.h = jr.at("h").get<double>();
      r.j = jr.at("j").get<double>();
      if (t.has_h_clt) r.h_clt = jr.at("h_clt").get<double>();
      if (t.has_mc) {
        r.mc_estimate = jr.at("mc_estimate").get<double>();
        r.mc_rel_err = number_from(jr.at("mc_rel_err"));
        r.mc_converged = jr.at("mc_converged").get<bool>();
      }
      r.regime = jr.at("regime").get<std::string>();
      t.rows.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid sweep JSON: ") + e.what());
  }
}

}  // namespace mg1tail
