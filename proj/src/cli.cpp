#include "entroact/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "entroact/errors.hpp"
#include "entroact/rng.hpp"

namespace entroact::cli {

using nlohmann::json;
using spaces::format_float;

namespace {

std::vector<double> decreasing_schedule(const json& j, const std::string& key,
                                        std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  if (out.empty()) throw DomainError("config." + key + ": must be nonempty");
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (!(out[i] > out[i + 1]))
      throw DomainError("config." + key + ": must be strictly decreasing");
  return out;
}

}  // namespace

std::string config_hash(const json& j) {
  // Execution-only fields do not change what is computed; identical science
  // configs must hash identically across worker counts and output paths.
  json canon = j;
  canon.erase("workers");
  canon.erase("output_dir");
  const std::string dump = canon.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  c.raw = j;
  if (!j.contains("system"))
    throw DomainError("config.system: required (builtin name or spec)");
  c.system = catalog::spec_from_json(j.at("system"));
  if (!j.contains("command"))
    throw DomainError("config.command: required");
  c.command = j.at("command").get<std::string>();

  c.resolution = j.value("resolution", c.resolution);
  if (c.resolution < 2)
    throw DomainError("config.resolution: must be >= 2");
  c.eps_schedule =
      decreasing_schedule(j, "epsilon_schedule", c.eps_schedule);
  if (j.contains("n_range")) {
    const auto& r = j.at("n_range");
    if (!r.is_array() || r.size() != 2)
      throw DomainError("config.n_range: expected [n_min, n_max]");
    c.n_min = r[0].get<int>();
    c.n_max = r[1].get<int>();
    if (c.n_min < 1 || c.n_max < c.n_min)
      throw DomainError("config.n_range: need 1 <= n_min <= n_max");
  }
  c.word_budget = j.value("word_budget", c.word_budget);
  c.mc_words = j.value("M", c.mc_words);
  if (j.contains("seed")) {
    c.seed = j.at("seed").get<uint64_t>();
    c.has_seed = true;
  }
  c.tau = j.value("tau", c.tau);
  c.delta_schedule = decreasing_schedule(j, "delta_schedule", c.delta_schedule);
  c.radii = decreasing_schedule(j, "radii", c.radii);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.workers = j.value("workers", c.workers);
  if (c.workers < 1) throw DomainError("config.workers: must be >= 1");
  c.mode = j.value("mode", c.mode);
  entropy::parse_mode(c.mode);  // validates

  c.tol = j.value("tol", c.tol);
  c.cylinder = j.value("cylinder", c.cylinder);
  c.shift_base = j.value("shift_base", c.shift_base);
  if (c.shift_base <= 0.0 || c.shift_base >= 1.0)
    throw DomainError("config.shift_base: must lie in (0,1)");
  c.suffix_budget = j.value("suffix_budget", c.suffix_budget);
  c.suffix_samples = j.value("suffix_samples", c.suffix_samples);
  if (j.contains("point"))
    c.point = j.at("point").get<std::vector<double>>();
  c.m_max = j.value("m_max", c.m_max);
  c.n_max_levels = j.value("n_max_levels", c.n_max_levels);
  c.candidates = j.value("candidates", c.candidates);
  c.orbit_length = j.value("orbit_length", c.orbit_length);
  c.samples = j.value("samples", c.samples);
  c.depth = j.value("depth", c.depth);
  c.instances = j.value("instances", c.instances);
  c.cloud_max = j.value("cloud_max", c.cloud_max);
  if (c.cloud_max < 2 || c.cloud_max > 24)
    throw DomainError("config.cloud_max: must lie in [2, 24]");
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  json j;
  in >> j;
  RunConfig c = parse_config(j);
  if (const char* env = std::getenv("ENTROACT_SEED")) {
    c.seed = std::strtoull(env, nullptr, 10);
    c.has_seed = true;
    c.seed_source = "env";
  }
  return c;
}

namespace {

using entropy::GrowthSeries;
using semigroup::GeneratorSet;

entropy::GrowthParams growth_params(const RunConfig& c) {
  entropy::GrowthParams p;
  p.n_min = c.n_min;
  p.n_max = c.n_max;
  p.word_budget = c.word_budget;
  p.mc_words = c.mc_words;
  p.seed = c.seed;
  p.has_seed = c.has_seed;
  p.mode = entropy::parse_mode(c.mode);
  p.workers = c.workers;
  return p;
}

entropy::EvalParams eval_params(const RunConfig& c) {
  entropy::EvalParams ev;
  ev.eps_schedule = c.eps_schedule;
  ev.radii = c.radii;
  ev.resolution = c.resolution;
  ev.growth = growth_params(c);
  return ev;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << body;
}

std::string series_csv(const std::vector<GrowthSeries>& series) {
  // Canonical row order: epsilon descending, then n ascending; one block
  // per series in schedule order already satisfies it, but sort anyway so
  // concatenated series from several clouds stay canonical.
  struct Row {
    std::string system, cloud, mode;
    double eps;
    int n;
    double log_avg;
    std::optional<double> se;
    bool saturated;
  };
  std::vector<Row> rows;
  for (const auto& s : series)
    for (const auto& r : s.rows)
      rows.push_back(Row{s.system_name, s.cloud_label,
                         entropy::mode_name(s.mode), s.epsilon, r.n,
                         r.log_avg, r.stderr_log, r.saturated});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.eps != b.eps) return a.eps > b.eps;
    if (a.n != b.n) return a.n < b.n;
    if (a.cloud != b.cloud) return a.cloud < b.cloud;
    return a.system < b.system;
  });
  std::ostringstream out;
  out << "system,cloud,mode,epsilon,n,log_avg,stderr,saturated\n";
  for (const auto& r : rows) {
    out << r.system << "," << r.cloud << "," << r.mode << ","
        << format_float(r.eps) << "," << r.n << "," << format_float(r.log_avg)
        << "," << (r.se ? format_float(*r.se) : "") << ","
        << (r.saturated ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string plot_csv(const std::vector<GrowthSeries>& series) {
  struct Row {
    double eps;
    int n;
    double log_avg;
    std::optional<double> se;
    std::string mode;
  };
  std::vector<Row> rows;
  for (const auto& s : series)
    for (const auto& r : s.rows)
      rows.push_back(
          Row{s.epsilon, r.n, r.log_avg, r.stderr_log,
              entropy::mode_name(s.mode)});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.eps != b.eps) return a.eps > b.eps;
    return a.n < b.n;
  });
  std::ostringstream out;
  out << "epsilon,n,log_avg,stderr,mode\n";
  for (const auto& r : rows)
    out << format_float(r.eps) << "," << r.n << "," << format_float(r.log_avg)
        << "," << (r.se ? format_float(*r.se) : "") << "," << r.mode << "\n";
  return out.str();
}

json estimate_json(const entropy::EntropyEstimate& est) {
  json per = json::array();
  for (const auto& s : est.per_epsilon) {
    per.push_back({{"epsilon", s.epsilon},
                   {"slope", s.slope},
                   {"residual", s.residual},
                   {"window", {s.window_lo, s.window_hi}},
                   {"usable", s.usable}});
  }
  return json{{"value", est.value},
              {"per_epsilon", per},
              {"n_window", {est.n_window_lo, est.n_window_hi}},
              {"feasibility",
               {{"mesh", est.mesh},
                {"lambda", est.lambda},
                {"mesh_guard_flag", est.mesh_guard_flag},
                {"saturated_rows", est.saturated_rows}}}};
}

json point_json(const spaces::Point& p) {
  return json{{"branch", p.branch}, {"coords", p.coords}};
}

spaces::Point config_point(const RunConfig& c, const GeneratorSet& g) {
  spaces::Point x;
  if (c.point.empty()) {
    const int d =
        g.space().is_union() ? g.space().branch_dim(0) : g.space().dim();
    x.coords.assign(d, 0.0);
  } else {
    x.coords = c.point;
  }
  return spaces::canonicalize(g.space(), x);
}

struct Artifacts {
  json result;
  std::vector<GrowthSeries> series;
  int exit_code = 0;
};

Artifacts run_entropy(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  auto cloud = spaces::sample_grid(g.space(), c.resolution);
  art.series =
      entropy::growth_series_multi(g, cloud, c.eps_schedule, growth_params(c));
  auto est = entropy::estimate_entropy(art.series);
  art.result["estimate"] = estimate_json(est);
  art.result["cloud"] = {{"label", cloud.label()},
                         {"size", cloud.size()},
                         {"mesh", cloud.mesh()}};
  return art;
}

Artifacts run_entropy_function(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  auto x = config_point(c, g);
  auto sample = entropy::entropy_function_at(g, x, eval_params(c));
  art.series = sample.series;
  json radii = json::array();
  for (const auto& r : sample.per_radius) {
    json slopes = json::array();
    for (const auto& s : r.slopes)
      slopes.push_back({{"epsilon", s.epsilon},
                        {"slope", s.slope},
                        {"usable", s.usable}});
    radii.push_back({{"radius", r.radius},
                     {"cloud_size", r.cloud_size},
                     {"slopes", slopes}});
  }
  json h_eps = json::array();
  for (std::size_t e = 0; e < c.eps_schedule.size(); ++e)
    h_eps.push_back({{"epsilon", c.eps_schedule[e]},
                     {"h", sample.h_at_eps[e]
                               ? json(*sample.h_at_eps[e])
                               : json()}});
  art.result["x"] = point_json(x);
  art.result["h_of_x"] = sample.h_of_x;
  art.result["per_radius"] = radii;
  art.result["h_at_eps"] = h_eps;
  return art;
}

Artifacts run_entropy_points(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  auto grid = spaces::sample_grid(g.space(), c.resolution);
  art.series =
      entropy::growth_series_multi(g, grid, c.eps_schedule, growth_params(c));
  const double global = entropy::estimate_entropy(art.series).value;

  auto candidates = spaces::sample_grid(g.space(), c.candidates);
  auto labels = entropy::classify_entropy_points(g, candidates, c.tau, global,
                                                 eval_params(c));
  json pts = json::array();
  std::size_t full = 0, entro = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (labels[i] == entropy::PointLabel::full_entropy) ++full;
    if (labels[i] != entropy::PointLabel::non_entropy) ++entro;
    pts.push_back({{"point", point_json(candidates.points()[i])},
                   {"label", entropy::label_name(labels[i])}});
  }
  art.result["global_estimate"] = global;
  art.result["tau"] = c.tau;
  art.result["points"] = pts;
  art.result["counts"] = {{"total", candidates.size()},
                          {"entropy_or_full", entro},
                          {"full_entropy", full}};
  return art;
}

Artifacts run_skew_check(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  auto cloud = spaces::sample_grid(g.space(), c.resolution);
  skew::Cylinder cyl;
  if (!c.cylinder.empty())
    cyl.prefix = semigroup::parse_word_literal(c.cylinder, g.p()).indices;
  skew::SkewGrowthParams params;
  params.growth = growth_params(c);
  params.metric.shift_base = c.shift_base;
  params.suffix_budget = c.suffix_budget;
  params.suffix_samples = c.suffix_samples;
  auto rep = skew::verify_product_formula(g, cyl, cloud, c.eps_schedule,
                                          c.tol, params);
  art.result["h_skew"] = rep.h_skew;
  art.result["h_base"] = rep.h_base;
  art.result["log_p"] = rep.log_p;
  art.result["gap"] = rep.gap;
  art.result["tol"] = rep.tol;
  art.result["pass"] = rep.pass;
  art.result["cylinder"] = rep.cylinder;
  art.result["params"] = {{"shift_base", rep.shift_base},
                          {"suffix_budget", c.suffix_budget}};
  art.result["entropy_point_fraction"] = rep.entropy_point_fraction;
  art.series = rep.skew_series;
  for (const auto& s : rep.base_series) art.series.push_back(s);
  art.exit_code = rep.pass ? 0 : 2;
  return art;
}

Artifacts run_katok(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  auto cloud = spaces::sample_grid(g.space(), c.resolution);
  entropy::KatokParams params;
  params.delta_schedule = c.delta_schedule;
  params.eps_schedule = c.eps_schedule;
  auto res = entropy::katok_entropy(g, cloud, params, growth_params(c));
  json table = json::array();
  for (const auto& cell : res.table) {
    table.push_back({{"epsilon", cell.eps},
                     {"delta", cell.delta},
                     {"slope", cell.slope.slope},
                     {"usable", cell.slope.usable},
                     {"mean_counts", cell.mean_counts}});
    art.series.push_back(cell.series);
  }
  art.result["value"] = res.value;
  art.result["table"] = table;
  return art;
}

Artifacts run_countable_set(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  auto x0 = config_point(c, g);
  entropy::CountableParams params;
  params.m_max = c.m_max;
  params.n_max = c.n_max_levels;
  params.eval = eval_params(c);
  auto artifact = entropy::countable_full_entropy_set(g, x0, params);
  json levels = json::array();
  for (const auto& level : artifact.levels) {
    json pts = json::array();
    for (const auto& p : level.points) pts.push_back(point_json(p));
    levels.push_back({{"m", level.m},
                      {"n", level.n},
                      {"eps_m", level.eps_m},
                      {"word", semigroup::word_literal(level.word)},
                      {"points", pts}});
  }
  json audit = json::array();
  for (const auto& a : artifact.audit)
    audit.push_back({{"radius", a.radius}, {"outside", a.outside}});
  json limits = json::array();
  for (const auto& p : artifact.limit_points) limits.push_back(point_json(p));
  art.result["x0"] = point_json(artifact.x0);
  art.result["h_x0"] = artifact.h_x0;
  art.result["levels"] = levels;
  art.result["truncation_size"] = artifact.truncation.size();
  art.result["limit_points"] = limits;
  art.result["audit"] = audit;
  art.result["reestimate"] = artifact.reestimate;
  art.series = artifact.reestimate_series;
  return art;
}

Artifacts run_sandwich_audit(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  if (!c.has_seed)
    throw DomainError("config.seed: required for sandwich-audit sampling");
  auto stream = rng::stream(c.seed, rng::tags::kTest, 0x5157);
  std::ostringstream csv;
  csv << "word,epsilon,b_exact,s_exact,b_half_exact,greedy_sep,greedy_span,"
         "method\n";
  json failures = json::array();
  int violations = 0;
  for (int t = 0; t < c.instances; ++t) {
    // Random micro cloud over a coarse lattice, random short word, random
    // eps.
    const std::size_t m =
        2 + stream.at(10 * t) % static_cast<std::size_t>(c.cloud_max - 1);
    std::vector<spaces::Point> pts;
    for (std::size_t i = 0; pts.size() < m && i < 8 * m + 64; ++i) {
      spaces::Point p;
      const int d =
          g.space().is_union() ? g.space().branch_dim(0) : g.space().dim();
      for (int a = 0; a < d; ++a)
        p.coords.push_back(
            std::floor(stream.unit(100 * t + 7 * i + a) * 64.0) / 64.0);
      if (g.space().is_union()) p.branch = stream.at(100 * t + 7 * i + 6) & 1;
      p = spaces::canonicalize(g.space(), p);
      bool dup = false;
      for (const auto& q : pts) dup = dup || q == p;
      if (!dup) pts.push_back(p);
    }
    spaces::SampleCloud cloud(g.space(), pts, 1.0 / 128, "micro");
    semigroup::Word w;
    const int n = 1 + stream.at(10 * t + 1) % 4;
    for (int k = 0; k < n; ++k)
      w.indices.push_back(static_cast<uint8_t>(
          1 + stream.bounded(10 * t + 2 + k, static_cast<uint32_t>(g.p()))));
    const double eps = 0.02 + 0.45 * stream.unit(10 * t + 9);
    try {
      auto rep = counting::sandwich_audit(cloud, g, w, eps);
      csv << semigroup::word_literal(w) << "," << format_float(eps) << ","
          << rep.b_exact << "," << rep.s_exact << "," << rep.b_half_exact
          << "," << rep.greedy_sep << "," << rep.greedy_span << ",exact\n";
    } catch (const InvariantViolation& e) {
      ++violations;
      failures.push_back({{"word", semigroup::word_literal(w)},
                          {"epsilon", eps},
                          {"error", e.what()}});
    }
  }
  art.result["instances"] = c.instances;
  art.result["violations"] = violations;
  art.result["failures"] = failures;
  art.result["audit_csv"] = "audit.csv";
  art.exit_code = violations == 0 ? 0 : 2;
  write_file(std::filesystem::path(c.output_dir) / "audit.csv", csv.str());
  return art;
}

Artifacts run_support_check(const RunConfig& c, const GeneratorSet& g) {
  Artifacts art;
  if (!c.has_seed)
    throw DomainError("config.seed: required for support-check sampling");
  auto rep = entropy::verify_support_in_entropy_points(
      g, c.seed, c.orbit_length, c.samples, c.tau, eval_params(c));
  art.result["applicable"] = rep.applicable;
  art.result["global_estimate"] = rep.global_estimate;
  art.result["fraction_entropy"] = rep.fraction_entropy;
  art.result["samples"] = rep.samples;
  json labels = json::array();
  for (std::size_t i = 0; i < rep.labels.size(); ++i)
    labels.push_back({{"point", point_json(rep.points[i])},
                      {"label", entropy::label_name(rep.labels[i])}});
  art.result["points"] = labels;
  art.exit_code = !rep.applicable || rep.fraction_entropy == 1.0 ? 0 : 2;
  return art;
}

}  // namespace

int run(const RunConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  auto g = catalog::build_system(config.system);

  Artifacts art;
  if (config.command == "entropy") {
    art = run_entropy(config, g);
  } else if (config.command == "entropy-function") {
    art = run_entropy_function(config, g);
  } else if (config.command == "entropy-points") {
    art = run_entropy_points(config, g);
  } else if (config.command == "skew-check") {
    art = run_skew_check(config, g);
  } else if (config.command == "katok") {
    art = run_katok(config, g);
  } else if (config.command == "countable-set") {
    art = run_countable_set(config, g);
  } else if (config.command == "sandwich-audit") {
    art = run_sandwich_audit(config, g);
  } else if (config.command == "support-check") {
    art = run_support_check(config, g);
  } else {
    throw DomainError("config.command: unknown command " + config.command);
  }

  art.result["system"] = config.system.name;
  art.result["command"] = config.command;
  art.result["seed"] = config.has_seed ? json(config.seed) : json();
  art.result["seed_source"] = config.seed_source;
  art.result["config_hash"] = config_hash(config.raw);
  art.result["exit_code"] = art.exit_code;

  const std::filesystem::path dir(config.output_dir);
  write_file(dir / "result.json", art.result.dump(2) + "\n");
  write_file(dir / "series.csv", series_csv(art.series));
  write_file(dir / "plot.csv", plot_csv(art.series));
  return art.exit_code;
}

}  // namespace entroact::cli
