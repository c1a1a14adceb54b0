#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dsm/contour_kernel.hpp"
#include "dsm/critical.hpp"
#include "dsm/edge.hpp"
#include "dsm/errors.hpp"
#include "dsm/io.hpp"
#include "dsm/limit_shape.hpp"
#include "dsm/sampler.hpp"

namespace fs = std::filesystem;
using dsm::Json;

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// flag beats config file beats built-in default
double resolve_d(const CLI::Option* opt, double flag_value, const Json& raw,
                 const char* key, double dflt) {
  if (opt->count() > 0) return flag_value;
  if (raw.is_object() && raw.contains(key) && raw[key].is_number())
    return raw[key].get<double>();
  return dflt;
}

long long resolve_i(const CLI::Option* opt, long long flag_value,
                    const Json& raw, const char* key, long long dflt) {
  if (opt->count() > 0) return flag_value;
  if (raw.is_object() && raw.contains(key) && raw[key].is_number_integer())
    return raw[key].get<long long>();
  return dflt;
}

std::string resolve_s(const CLI::Option* opt, const std::string& flag_value,
                      const Json& raw, const char* key,
                      const std::string& dflt) {
  if (opt->count() > 0) return flag_value;
  if (raw.is_object() && raw.contains(key) && raw[key].is_string())
    return raw[key].get<std::string>();
  return dflt;
}

dsm::Statistic parse_statistic(const std::string& name) {
  if (name == "lambda1") return dsm::Statistic::Lambda1;
  if (name == "size") return dsm::Statistic::Size;
  if (name == "shape") return dsm::Statistic::Shape;
  if (name == "edge-convex") return dsm::Statistic::EdgeConvex;
  if (name == "edge-concave") return dsm::Statistic::EdgeConcave;
  throw dsm::ConfigInvalid("unknown statistic '" + name + "'");
}

void warn_near_critical(const dsm::Model& m) {
  try {
    dsm::CriticalData cd = dsm::critical_residual(m);
    if (std::abs(cd.residual) >= 1e-10 && std::abs(cd.residual) < 1e-3)
      std::cerr << "warning: specialization is near-critical (residual "
                << cd.residual
                << "); neither the Tracy-Widom nor the critical regime "
                   "strictly applies\n";
  } catch (const dsm::Error&) {
    // divergent criticality integral: regime is unambiguous, no warning
  }
}

dsm::ContourConfig contour_from_json(const Json& raw) {
  dsm::ContourConfig cfg;
  if (!raw.is_object() || !raw.contains("contour")) return cfg;
  const Json& c = raw["contour"];
  if (!c.is_object()) throw dsm::ConfigInvalid("'contour' must be an object");
  auto num = [&](const char* key, double dflt) {
    if (!c.contains(key)) return dflt;
    if (!c[key].is_number())
      throw dsm::ConfigInvalid(std::string("contour field '") + key +
                               "' must be numeric");
    return c[key].get<double>();
  };
  cfg.r_z = num("r_z", cfg.r_z);
  cfg.r_w = num("r_w", cfg.r_w);
  cfg.center_z = num("center_z", cfg.center_z);
  cfg.center_w = num("center_w", cfg.center_w);
  cfg.tol = num("tol", cfg.tol);
  cfg.start_nodes = static_cast<int>(num("start_nodes", cfg.start_nodes));
  cfg.max_nodes = static_cast<int>(num("max_nodes", cfg.max_nodes));
  return cfg;
}

std::vector<std::vector<std::string>> histogram_rows(
    const std::vector<double>& values) {
  std::map<long long, long long> hist;
  for (double v : values) ++hist[std::llround(v)];
  std::vector<std::vector<std::string>> rows;
  rows.reserve(hist.size());
  for (const auto& [value, count] : hist)
    rows.push_back({std::to_string(value), std::to_string(count)});
  return rows;
}

struct RunContext {
  fs::path out;
  std::uint64_t seed = 1;
  int workers = 1;
  Json config_echo = Json::object();
  std::map<std::string, double> timings;
  std::vector<std::string> outputs;

  std::string path(const std::string& name) const {
    return (out / name).string();
  }
  void done(const std::string& command) const {
    dsm::write_manifest(path("manifest.json"), command, config_echo, seed,
                        workers, timings, outputs);
  }
};

void cmd_sample(RunContext& ctx, const dsm::Config& cfg, long long samples,
                const std::string& statistic) {
  dsm::Statistic stat = parse_statistic(statistic);
  dsm::XY xy = dsm::discretize(cfg.model, static_cast<int>(cfg.n));
  Timer t;
  dsm::SampleBatch batch = dsm::monte_carlo(xy, static_cast<int>(samples), stat,
                                            ctx.seed, ctx.workers);
  ctx.timings["sample_ms"] = t.ms();

  Timer tw;
  if (stat == dsm::Statistic::Shape) {
    Json j;
    j["n"] = batch.n;
    j["k"] = batch.k;
    j["seed"] = batch.seed;
    j["count"] = batch.count;
    Json arr = Json::array();
    std::vector<double> sizes;
    sizes.reserve(batch.shapes.size());
    for (const dsm::Partition& lam : batch.shapes) {
      arr.push_back(dsm::partition_to_json(lam));
      sizes.push_back(static_cast<double>(lam.weight()));
    }
    j["partitions"] = arr;
    dsm::write_text(ctx.path("partitions.json"), j.dump(2) + "\n");
    dsm::write_csv(ctx.path("histogram.csv"), {"value", "count"},
                   histogram_rows(sizes));
    ctx.outputs = {"partitions.json", "histogram.csv"};
  } else {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(batch.values.size());
    for (std::size_t i = 0; i < batch.values.size(); ++i)
      rows.push_back({std::to_string(i), dsm::format_double(batch.values[i])});
    dsm::write_csv(ctx.path("samples.csv"), {"index", "value"}, rows);
    dsm::write_csv(ctx.path("histogram.csv"), {"value", "count"},
                   histogram_rows(batch.values));
    ctx.outputs = {"samples.csv", "histogram.csv"};
  }
  ctx.timings["write_ms"] = tw.ms();
  ctx.done("sample");
}

void cmd_limit_shape(RunContext& ctx, const dsm::Config& cfg,
                     double grid_step) {
  warn_near_critical(cfg.model);
  Timer t;
  dsm::SupportData sup = dsm::support(cfg.model);
  dsm::LimitShapeCurve curve = dsm::limit_curve(cfg.model, grid_step);
  double sg = dsm::sigma(cfg.model, sup);
  dsm::Branch br = dsm::branch(cfg.model);
  ctx.timings["solve_ms"] = t.ms();

  std::vector<std::vector<std::string>> rows;
  rows.reserve(curve.u.size());
  for (std::size_t i = 0; i < curve.u.size(); ++i)
    rows.push_back({dsm::format_double(curve.u[i]),
                    dsm::format_double(curve.omega[i]),
                    dsm::format_double(curve.rho[i])});
  dsm::write_csv(ctx.path("curve.csv"), {"u", "omega", "rho"}, rows);
  Json j = dsm::support_to_json(sup);
  j["branch"] = dsm::branch_name(br);
  j["sigma"] = std::isfinite(sg) ? Json(sg) : Json(dsm::format_double(sg));
  dsm::write_text(ctx.path("support.json"), j.dump(2) + "\n");
  ctx.outputs = {"curve.csv", "support.json"};
  ctx.done("limit-shape");
}

void cmd_kernel(RunContext& ctx, const dsm::Config& cfg, double t_pos,
                long long max_offset) {
  dsm::XY xy = dsm::discretize(cfg.model, static_cast<int>(cfg.n));
  dsm::ContourConfig ccfg = contour_from_json(cfg.raw);
  std::vector<std::pair<double, double>> pairs;
  if (cfg.raw.contains("positions")) {
    const Json& pos = cfg.raw["positions"];
    if (!pos.is_array() || pos.empty())
      throw dsm::ConfigInvalid("'positions' must be a non-empty array");
    std::vector<double> ps;
    for (const auto& p : pos) {
      if (!p.is_number())
        throw dsm::ConfigInvalid("'positions' entries must be numeric");
      ps.push_back(p.get<double>());
    }
    for (double a : ps)
      for (double b : ps) pairs.emplace_back(a, b);
  } else {
    double center = std::floor(static_cast<double>(cfg.n) * t_pos) + 0.5;
    for (long long d = -max_offset; d <= max_offset; ++d)
      pairs.emplace_back(center + static_cast<double>(d), center);
  }

  Timer t;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    dsm::KernelValue kv = dsm::correlation_kernel(a, b, xy, ccfg);
    rows.push_back({dsm::format_double(a), dsm::format_double(b),
                    dsm::format_double(kv.value), std::to_string(kv.nodes),
                    dsm::format_double(kv.est_error)});
  }
  ctx.timings["kernel_ms"] = t.ms();
  dsm::write_csv(ctx.path("kernel.csv"),
                 {"m", "mprime", "value", "nodes", "est_error"}, rows);
  ctx.outputs = {"kernel.csv"};
  ctx.done("kernel");
}

void cmd_fluctuations(RunContext& ctx, const dsm::Config& cfg,
                      long long samples, double s_min, double s_max,
                      double s_step) {
  if (!(s_step > 0) || !(s_max >= s_min))
    throw dsm::ConfigInvalid("need s_step > 0 and s_max >= s_min");
  warn_near_critical(cfg.model);
  dsm::SupportData sup = dsm::support(cfg.model);
  dsm::EdgeScaling scaling = dsm::edge_scaling(cfg.model, sup);
  if (!std::isfinite(scaling.sigma))
    throw dsm::CriticalRegime(
        "sigma is infinite: use the 'critical' command for this spec");
  dsm::XY xy = dsm::discretize(cfg.model, static_cast<int>(cfg.n));
  dsm::Statistic stat = scaling.branch == dsm::Branch::Concave
                            ? dsm::Statistic::EdgeConcave
                            : dsm::Statistic::EdgeConvex;
  Timer ts;
  dsm::SampleBatch batch = dsm::monte_carlo(xy, static_cast<int>(samples), stat,
                                            ctx.seed, ctx.workers);
  std::vector<double> xi =
      dsm::edge_rescale(batch.values, scaling, static_cast<int>(cfg.n));
  ctx.timings["sample_ms"] = ts.ms();

  Timer tt;
  std::vector<std::vector<std::string>> tw_rows;
  for (double s = s_min; s <= s_max + 1e-12; s += s_step)
    tw_rows.push_back(
        {dsm::format_double(s), dsm::format_double(dsm::tracy_widom_cdf(s))});
  ctx.timings["tw_ms"] = tt.ms();

  Timer tk;
  std::map<double, double> cache;
  auto cdf = [&cache](double s) {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    double v = dsm::tracy_widom_cdf(s);
    cache.emplace(s, v);
    return v;
  };
  double ks = dsm::ks_distance(xi, cdf);
  ctx.timings["ks_ms"] = tk.ms();

  std::vector<std::vector<std::string>> rows;
  rows.reserve(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i)
    rows.push_back({std::to_string(i), dsm::format_double(xi[i])});
  dsm::write_csv(ctx.path("rescaled.csv"), {"index", "xi"}, rows);
  dsm::write_csv(ctx.path("tw_table.csv"), {"s", "F"}, tw_rows);
  Json j;
  j["ks_distance"] = ks;
  j["samples"] = samples;
  j["branch"] = dsm::branch_name(scaling.branch);
  j["x_plus"] = sup.x_plus;
  j["sigma"] = scaling.sigma;
  j["z_plus"] = std::isfinite(sup.z_plus) ? Json(sup.z_plus)
                                          : Json(dsm::format_double(sup.z_plus));
  dsm::write_text(ctx.path("ks.json"), j.dump(2) + "\n");
  ctx.outputs = {"rescaled.csv", "tw_table.csv", "ks.json"};
  ctx.done("fluctuations");
}

void cmd_critical(RunContext& ctx, const dsm::Config& cfg,
                  std::vector<long long> deltas, long long samples) {
  if (deltas.empty()) deltas = {1, 2};
  dsm::CriticalData cd = dsm::critical_residual(cfg.model);
  if (std::abs(cd.residual) >= 1e-10)
    throw dsm::NotCritical("residual " + std::to_string(cd.residual) +
                           " is away from zero; this command needs a critical "
                           "specialization");
  double nc = cfg.model.c * static_cast<double>(cfg.n);
  if (std::abs(nc - static_cast<double>(cfg.k)) > 1e-9)
    throw dsm::ConfigInvalid("c*n must be an integer for gap statistics");

  dsm::XY xy = dsm::discretize(cfg.model, static_cast<int>(cfg.n));
  Timer ts;
  dsm::SampleBatch batch = dsm::monte_carlo(
      xy, static_cast<int>(samples), dsm::Statistic::Lambda1, ctx.seed,
      ctx.workers);
  ctx.timings["sample_ms"] = ts.ms();

  Timer tg;
  std::vector<std::vector<std::string>> rows;
  for (long long delta : deltas) {
    if (delta < 1) throw dsm::ConfigInvalid("deltas must be >= 1");
    double theory = dsm::gap_probability(static_cast<int>(delta));
    long long count = 0;
    for (double v : batch.values)
      if (std::llround(v) <= cfg.k - delta) ++count;
    double emp = static_cast<double>(count) / static_cast<double>(samples);
    double se = std::sqrt(std::max(0.0, emp * (1.0 - emp))) /
                std::sqrt(static_cast<double>(samples));
    rows.push_back({std::to_string(delta), dsm::format_double(theory),
                    dsm::format_double(emp), dsm::format_double(se)});
  }
  ctx.timings["gap_ms"] = tg.ms();
  dsm::write_csv(ctx.path("gaps.csv"), {"delta", "theory", "empirical", "stderr"},
                 rows);
  ctx.outputs = {"gaps.csv"};
  ctx.done("critical");
}

void cmd_tw_table(RunContext& ctx, double s_min, double s_max, double s_step) {
  if (!(s_step > 0) || !(s_max >= s_min))
    throw dsm::ConfigInvalid("need s_step > 0 and s_max >= s_min");
  Timer t;
  std::vector<std::vector<std::string>> rows;
  for (double s = s_min; s <= s_max + 1e-12; s += s_step)
    rows.push_back(
        {dsm::format_double(s), dsm::format_double(dsm::tracy_widom_cdf(s))});
  ctx.timings["tw_ms"] = t.ms();
  dsm::write_csv(ctx.path("tw_table.csv"), {"s", "F"}, rows);
  ctx.outputs = {"tw_table.csv"};
  ctx.done("tw-table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for dual Schur measures on partitions "
               "in an n x k box"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 1;
  int workers = 1;
  app.add_option("--config", config_path, "path to a JSON config or manifest");
  app.add_option("--seed", seed, "master seed for reproducible sampling");
  app.add_option("--workers", workers, "worker threads for Monte Carlo")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (created if missing)");

  auto* c_sample = app.add_subcommand("sample", "draw partitions or statistics");
  long long f_samples = 0;
  std::string f_statistic;
  const CLI::Option* o_samples =
      c_sample->add_option("--samples", f_samples, "sample count");
  const CLI::Option* o_statistic = c_sample->add_option(
      "--statistic", f_statistic, "lambda1|size|shape|edge-convex|edge-concave");

  auto* c_limit = app.add_subcommand("limit-shape", "support and Omega curve");
  double f_grid = 0;
  const CLI::Option* o_grid =
      c_limit->add_option("--grid-step", f_grid, "u grid step");

  auto* c_kernel = app.add_subcommand("kernel", "finite correlation kernel");
  double f_t = 0;
  long long f_maxoff = 0;
  const CLI::Option* o_t =
      c_kernel->add_option("--t", f_t, "bulk position t in (-1, c)");
  const CLI::Option* o_maxoff =
      c_kernel->add_option("--max-offset", f_maxoff, "offsets around n t");

  auto* c_fluct =
      app.add_subcommand("fluctuations", "edge rescaling vs Tracy-Widom");
  long long f_fsamples = 0;
  double f_smin = 0, f_smax = 0, f_sstep = 0;
  const CLI::Option* o_fsamples =
      c_fluct->add_option("--samples", f_fsamples, "sample count");
  const CLI::Option* o_fsmin = c_fluct->add_option("--s-min", f_smin, "grid lo");
  const CLI::Option* o_fsmax = c_fluct->add_option("--s-max", f_smax, "grid hi");
  const CLI::Option* o_fsstep =
      c_fluct->add_option("--s-step", f_sstep, "grid step");

  auto* c_crit = app.add_subcommand("critical", "gap probabilities at x+ = c");
  std::vector<long long> f_deltas;
  long long f_csamples = 0;
  const CLI::Option* o_deltas =
      c_crit->add_option("--delta", f_deltas, "gap sizes (repeatable)");
  const CLI::Option* o_csamples =
      c_crit->add_option("--samples", f_csamples, "sample count");

  auto* c_tw = app.add_subcommand("tw-table", "Tracy-Widom CDF grid");
  double f_tsmin = 0, f_tsmax = 0, f_tsstep = 0;
  const CLI::Option* o_tsmin = c_tw->add_option("--s-min", f_tsmin, "grid lo");
  const CLI::Option* o_tsmax = c_tw->add_option("--s-max", f_tsmax, "grid hi");
  const CLI::Option* o_tsstep =
      c_tw->add_option("--s-step", f_tsstep, "grid step");

  for (CLI::App* sub : {c_sample, c_limit, c_kernel, c_fluct, c_crit, c_tw})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunContext ctx;
    ctx.out = out_dir;
    ctx.seed = seed;
    ctx.workers = workers;
    fs::create_directories(ctx.out);

    dsm::Config cfg;
    bool have_cfg = !config_path.empty();
    if (have_cfg) {
      cfg = dsm::load_config(config_path);
      ctx.config_echo = cfg.raw;
    }
    auto need_cfg = [&]() {
      if (!have_cfg)
        throw dsm::ConfigInvalid("--config is required for this command");
    };
    const Json& raw = ctx.config_echo;

    if (c_sample->parsed()) {
      need_cfg();
      cmd_sample(ctx, cfg, resolve_i(o_samples, f_samples, raw, "samples", 1000),
                 resolve_s(o_statistic, f_statistic, raw, "statistic",
                           "lambda1"));
    } else if (c_limit->parsed()) {
      need_cfg();
      cmd_limit_shape(ctx, cfg,
                      resolve_d(o_grid, f_grid, raw, "grid_step", 0.01));
    } else if (c_kernel->parsed()) {
      need_cfg();
      cmd_kernel(ctx, cfg, resolve_d(o_t, f_t, raw, "t", 0.0),
                 resolve_i(o_maxoff, f_maxoff, raw, "max_offset", 3));
    } else if (c_fluct->parsed()) {
      need_cfg();
      cmd_fluctuations(ctx, cfg,
                       resolve_i(o_fsamples, f_fsamples, raw, "samples", 1000),
                       resolve_d(o_fsmin, f_smin, raw, "s_min", -5.0),
                       resolve_d(o_fsmax, f_smax, raw, "s_max", 2.0),
                       resolve_d(o_fsstep, f_sstep, raw, "s_step", 0.1));
    } else if (c_crit->parsed()) {
      need_cfg();
      std::vector<long long> deltas = f_deltas;
      if (o_deltas->count() == 0 && raw.is_object() && raw.contains("deltas")) {
        deltas.clear();
        for (const auto& d : raw["deltas"]) {
          if (!d.is_number_integer())
            throw dsm::ConfigInvalid("'deltas' entries must be integers");
          deltas.push_back(d.get<long long>());
        }
      }
      cmd_critical(ctx, cfg, deltas,
                   resolve_i(o_csamples, f_csamples, raw, "samples", 10000));
    } else if (c_tw->parsed()) {
      cmd_tw_table(ctx, resolve_d(o_tsmin, f_tsmin, raw, "s_min", -5.0),
                   resolve_d(o_tsmax, f_tsmax, raw, "s_max", 2.0),
                   resolve_d(o_tsstep, f_tsstep, raw, "s_step", 0.1));
    }
    return 0;
  } catch (const dsm::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const dsm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
