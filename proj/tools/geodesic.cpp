/* Copyright 2026 The geodesic authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// geodesic: command-line front end over libgeodesic's C interface.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "geodesic/geodesic.h"

using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kInfeasible = 3, kRuntime = 4 };

struct Failure {
  geo_status status;
  std::string what;
};

void check(geo_status s) {
  if (s != GEO_OK) throw Failure{s, geo_last_error()};
}

int exit_code(geo_status s) {
  switch (s) {
    case GEO_E_INVALID:
    case GEO_E_NULL: return kUsage;
    case GEO_E_BUDGET:
    case GEO_E_TOLERANCE: return kInfeasible;
    default: return kRuntime;
  }
}

// 15 significant digits, stored back as a double so json and csv agree
double sig15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

ordered_json num(double x) { return sig15(x); }

std::string take(char* s) {
  std::string out = s ? s : "";
  geo_string_free(s);
  return out;
}

struct ContextHandle {
  geo_context* h = nullptr;
  ~ContextHandle() { geo_context_free(h); }
};

struct StrategyHandle {
  geo_lstrategy* h = nullptr;
  ~StrategyHandle() { geo_lstrategy_free(h); }
};

struct CacheHandle {
  geo_cache* h = nullptr;
  ~CacheHandle() {
    if (h) geo_cache_save(h);
    geo_cache_free(h);
  }
};

struct ContextArgs {
  std::optional<std::int64_t> level;
  std::optional<std::int64_t> quaternion;

  void attach(CLI::App* app) {
    auto* l = app->add_option("--level", level, "congruence level Q (odd, squarefree)");
    auto* q = app->add_option("--quaternion", quaternion, "reduced discriminant dB of the quaternion algebra");
    l->excludes(q);
  }

  void open(ContextHandle& out) const {
    if (quaternion) {
      check(geo_context_quaternion(*quaternion, &out.h));
    } else {
      check(geo_context_congruence(level.value_or(1), &out.h));
    }
  }

  std::string tag(const ContextHandle& c) const {
    char* s = nullptr;
    check(geo_context_tag(c.h, &s));
    return take(s);
  }
};

std::string strategy_tag(const geo_lstrategy* s) {
  char* t = nullptr;
  check(geo_lstrategy_tag(s, &t));
  return take(t);
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v.get<double>());
    return buf;
  }
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

void flatten(const ordered_json& v, const std::string& prefix, ordered_json& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out[prefix.empty() ? "value" : prefix] = v;
  }
}

void emit_csv(const ordered_json& result, const std::string& rows_key) {
  std::vector<ordered_json> rows;
  if (!rows_key.empty() && result.contains(rows_key)) {
    for (const auto& r : result[rows_key]) {
      ordered_json flat = ordered_json::object();
      flatten(r, "", flat);
      rows.push_back(flat);
    }
  } else {
    ordered_json flat = ordered_json::object();
    flatten(result, "", flat);
    rows.push_back(flat);
  }
  if (rows.empty()) return;
  std::string header;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) header += (header.empty() ? "" : ",") + it.key();
  std::cout << header << "\n";
  for (const auto& r : rows) {
    std::string line;
    bool first = true;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
      line += (first ? "" : ",") + (r.contains(it.key()) ? csv_cell(r[it.key()]) : std::string());
      first = false;
    }
    std::cout << line << "\n";
  }
}

struct Output {
  std::string format = "json";
  std::uint64_t seed = 0;

  void emit(const std::string& command, const ordered_json& inputs, const ordered_json& result,
            ordered_json provenance, const std::string& rows_key = "") const {
    if (format == "csv") {
      emit_csv(result, rows_key);
      return;
    }
    provenance["seed"] = seed;
    ordered_json env;
    env["command"] = command;
    env["inputs"] = inputs;
    env["result"] = result;
    env["provenance"] = provenance;
    env["version"] = geo_version();
    std::cout << env.dump(2) << "\n";
  }
};

void sweep_progress(const geo_checkpoint* cp, void*) {
  std::fprintf(stderr, "N=%lld mean=%.6f mean_square=%.6f t=%.1fs\n", static_cast<long long>(cp->N), cp->mean,
               cp->mean_square, cp->wall_seconds);
}

void check_progress(const geo_check* c, void*) { std::fprintf(stderr, "%s\n", c->line); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic: multiplicities of closed geodesics, their Fourier data and mean squares"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(geo_version()));

  Output out;
  std::uint64_t seed = geo_seed();
  app.add_option("--format", out.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--seed", seed, "seed for the factorization splitting walk")->capture_default_str();

  // beta
  auto* beta_cmd = app.add_subcommand("beta", "weighted multiplicity beta(t)");
  std::int64_t t = 0;
  std::string beta_strategy = "classnumber";
  ContextArgs beta_ctx;
  beta_cmd->add_option("--t", t, "trace")->required();
  beta_ctx.attach(beta_cmd);
  beta_cmd->add_option("--strategy", beta_strategy, "L(1) strategy")->capture_default_str();

  // lvalue
  auto* lv_cmd = app.add_subcommand("lvalue", "L(1, chi_D)");
  std::int64_t disc = 0;
  std::string lv_strategy = "classnumber";
  lv_cmd->add_option("--disc", disc, "discriminant D > 0")->required();
  lv_cmd->add_option("--strategy", lv_strategy, "classnumber | logsin | smoothed[:N[:cutoff]] | euler[:P]")
      ->capture_default_str();

  // coeff
  auto* co_cmd = app.add_subcommand("coeff", "local Fourier coefficient at a / p^c");
  std::int64_t co_p = 0, co_a = 0;
  int co_c = 0;
  std::optional<int> co_b;
  std::string co_method = "series";
  double co_tol = 1e-12;
  ContextArgs co_ctx;
  co_cmd->add_option("--p", co_p, "prime")->required();
  co_cmd->add_option("--c", co_c, "exponent of the denominator")->required();
  co_cmd->add_option("--a", co_a, "numerator")->required();
  co_cmd->add_option("--b", co_b, "single summand f_b instead of the full local function");
  co_cmd->add_option("--method", co_method)->check(CLI::IsMember({"closed", "dft", "series"}))->capture_default_str();
  co_cmd->add_option("--tol", co_tol)->capture_default_str();
  co_ctx.attach(co_cmd);

  // avalue
  auto* av_cmd = app.add_subcommand("avalue", "A(p^c) and the local Euler factor");
  std::int64_t av_p = 0;
  int av_c = 0;
  std::string av_method = "closed";
  ContextArgs av_ctx;
  av_cmd->add_option("--p", av_p, "prime")->required();
  av_cmd->add_option("--c", av_c, "exponent")->required();
  av_cmd->add_option("--method", av_method)->check(CLI::IsMember({"closed", "numeric"}))->capture_default_str();
  av_ctx.attach(av_cmd);

  // kappa
  auto* ka_cmd = app.add_subcommand("kappa", "limiting mean square kappa (C1 at level 1)");
  std::int64_t ka_bound = 100000;
  double ka_tol = 1e-5;
  ContextArgs ka_ctx;
  ka_ctx.attach(ka_cmd);
  ka_cmd->add_option("--prime-bound", ka_bound)->capture_default_str();
  ka_cmd->add_option("--tol", ka_tol)->capture_default_str();

  // empirical
  auto* em_cmd = app.add_subcommand("empirical", "running mean and mean square of beta");
  std::int64_t n_max = 0, stride = 0, exact_below = 2000;
  std::string em_strategy = "smoothed";
  std::optional<std::string> resume_file, checkpoint_file;
  int workers = 1;
  bool reproducible = true, exact = false;
  double budget = 0;
  ContextArgs em_ctx;
  em_cmd->add_option("--n-max", n_max)->required();
  em_cmd->add_option("--stride", stride, "checkpoint spacing")->required();
  em_ctx.attach(em_cmd);
  em_cmd->add_option("--strategy", em_strategy)->capture_default_str();
  em_cmd->add_flag("--exact", exact, "class numbers for small traces");
  em_cmd->add_option("--exact-below", exact_below, "trace bound for --exact")->capture_default_str();
  auto* ck = em_cmd->add_option("--checkpoint", checkpoint_file, "append-only checkpoint CSV (new file)");
  em_cmd->add_option("--resume", resume_file, "continue the sweep recorded in this checkpoint CSV")->excludes(ck);
  em_cmd->add_option("--workers", workers)->check(CLI::Range(1, 1024))->capture_default_str();
  em_cmd->add_flag("--reproducible,!--no-reproducible", reproducible, "no shared factorization cache")
      ->capture_default_str();
  em_cmd->add_option("--budget", budget, "wall-clock budget in seconds, 0 = none")->capture_default_str();

  // verify
  auto* ve_cmd = app.add_subcommand("verify", "run the acceptance suites");
  std::optional<std::string> suite;
  geo_verify_options vopts;
  geo_verify_options_init(&vopts);
  std::optional<std::string> sweep_csv;
  std::string suites_help = "one of:";
  for (std::size_t i = 0; i < geo_verify_suite_count(); ++i) suites_help += std::string(" ") + geo_verify_suite_name(i);
  ve_cmd->add_option("--suite", suite, suites_help + " (or its number)");
  ve_cmd->add_option("--workers", vopts.workers)->check(CLI::Range(1, 1024))->capture_default_str();
  ve_cmd->add_option("--sweep-n", vopts.sweep_n_max, "N for the empirical suite")->capture_default_str();
  ve_cmd->add_option("--sweep-csv", sweep_csv, "where the empirical suite writes its convergence CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  geo_set_seed(seed);
  out.seed = seed;

  CacheHandle cache;
  if (const char* dir = std::getenv("GEODESIC_CACHE_DIR"); dir && *dir) {
    if (geo_cache_open(dir, &cache.h) != GEO_OK) {
      std::fprintf(stderr, "warning: factorization cache disabled: %s\n", geo_last_error());
      cache.h = nullptr;
    }
  }

  try {
    if (*beta_cmd) {
      ContextHandle ctx;
      beta_ctx.open(ctx);
      StrategyHandle s;
      check(geo_lstrategy_parse(beta_strategy.c_str(), &s.h));
      double b = 0;
      int exists = 0;
      check(geo_beta(t, ctx.h, s.h, cache.h, &b));
      check(geo_trace_exists(t, ctx.h, &exists));
      out.emit("beta", {{"t", t}, {"context", beta_ctx.tag(ctx)}}, {{"beta", num(b)}, {"trace_exists", exists != 0}},
               {{"strategy", strategy_tag(s.h)}});
    } else if (*lv_cmd) {
      StrategyHandle s;
      check(geo_lstrategy_parse(lv_strategy.c_str(), &s.h));
      double L = 0;
      check(geo_l_one(disc, s.h, &L));
      out.emit("lvalue", {{"disc", disc}}, {{"L", num(L)}}, {{"strategy", strategy_tag(s.h)}});
    } else if (*co_cmd) {
      ContextHandle ctx;
      co_ctx.open(ctx);
      const geo_coeff_method m =
          co_method == "closed" ? GEO_COEFF_CLOSED : (co_method == "dft" ? GEO_COEFF_DFT : GEO_COEFF_SERIES);
      geo_coefficient_value v{};
      ordered_json inputs = {{"p", co_p}, {"c", co_c}, {"a", co_a}, {"context", co_ctx.tag(ctx)}};
      ordered_json prov = {{"method", co_method}};
      if (co_b) {
        check(geo_coefficient_b(co_p, *co_b, co_c, co_a, ctx.h, m, &v));
        inputs["b"] = *co_b;
      } else {
        check(geo_coefficient(co_p, co_c, co_a, ctx.h, m, co_tol, &v));
        if (m != GEO_COEFF_CLOSED) {
          prov["tol"] = co_tol;
          prov["b_max"] = v.b_max;
        }
      }
      ordered_json result = {{"re", num(v.re)}, {"im", num(v.im)}, {"abs", num(std::hypot(v.re, v.im))}};
      if (!co_b && m != GEO_COEFF_CLOSED) result["tail_bound"] = num(v.tail_bound);
      out.emit("coeff", inputs, result, prov);
    } else if (*av_cmd) {
      ContextHandle ctx;
      av_ctx.open(ctx);
      double a = 0, M = 0;
      char* a_exact = nullptr;
      char* m_exact = nullptr;
      const bool closed = av_method == "closed";
      check(geo_a_value(av_p, av_c, ctx.h, closed ? GEO_A_CLOSED : GEO_A_NUMERIC, &a, closed ? &a_exact : nullptr));
      const std::string ae = take(a_exact);
      check(geo_local_euler_factor(av_p, ctx.h, &M, &m_exact));
      ordered_json result = {{"A", num(a)}};
      if (closed) result["A_exact"] = ae;
      result["euler_factor"] = num(M);
      result["euler_factor_exact"] = take(m_exact);
      out.emit("avalue", {{"p", av_p}, {"c", av_c}, {"context", av_ctx.tag(ctx)}}, result, {{"method", av_method}});
    } else if (*ka_cmd) {
      ContextHandle ctx;
      ka_ctx.open(ctx);
      geo_euler_product r{};
      check(geo_kappa(ctx.h, ka_bound, ka_tol, &r));
      out.emit("kappa", {{"context", ka_ctx.tag(ctx)}},
               {{"kappa", num(r.value)},
                {"tail_bound", num(r.tail_bound)},
                {"log_tail_bound", num(r.log_tail_bound)},
                {"cross_check", num(r.cross_check)}},
               {{"prime_bound", r.prime_bound}, {"tol", ka_tol}});
    } else if (*em_cmd) {
      ContextHandle ctx;
      em_ctx.open(ctx);
      StrategyHandle s;
      check(geo_lstrategy_parse(em_strategy.c_str(), &s.h));
      geo_sweep_options so;
      geo_sweep_options_init(&so);
      so.workers = workers;
      so.reproducible = reproducible;
      so.budget_seconds = budget;
      so.exact_below = exact ? exact_below : 0;
      const std::optional<std::string>& file = resume_file ? resume_file : checkpoint_file;
      if (file) so.checkpoint_file = file->c_str();
      so.resume = resume_file.has_value();
      so.cache = cache.h;
      so.on_checkpoint = sweep_progress;
      geo_sweep* sw = nullptr;
      check(geo_sweep_run(ctx.h, n_max, stride, s.h, &so, &sw));
      std::unique_ptr<geo_sweep, void (*)(geo_sweep*)> guard(sw, geo_sweep_free);
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < geo_sweep_count(sw); ++i) {
        geo_checkpoint cp{};
        check(geo_sweep_checkpoint(sw, i, &cp));
        rows.push_back({{"N", cp.N},
                        {"mean", num(cp.mean)},
                        {"mean_square", num(cp.mean_square)},
                        {"wall_seconds", num(cp.wall_seconds)}});
      }
      const bool partial = geo_sweep_partial(sw) != 0;
      ordered_json inputs = {{"n_max", n_max}, {"stride", stride}, {"context", em_ctx.tag(ctx)}};
      ordered_json prov = {{"strategy", std::string(geo_sweep_strategy_tag(sw))},
                           {"workers", workers},
                           {"reproducible", reproducible},
                           {"resumed_from", geo_sweep_resumed_from(sw)}};
      if (file) prov["checkpoint_file"] = *file;
      out.emit("empirical", inputs, {{"checkpoints", rows}, {"partial", partial}}, prov, "checkpoints");
      if (partial) {
        std::fprintf(stderr, "budget exhausted: partial series\n");
        return kInfeasible;
      }
    } else if (*ve_cmd) {
      if (sweep_csv) vopts.sweep_csv = sweep_csv->c_str();
      vopts.on_check = check_progress;
      geo_report* rep = nullptr;
      check(geo_verify_run(suite ? suite->c_str() : nullptr, &vopts, &rep));
      std::unique_ptr<geo_report, void (*)(geo_report*)> guard(rep, geo_report_free);
      ordered_json checks = ordered_json::array();
      for (std::size_t i = 0; i < geo_report_count(rep); ++i) {
        geo_check c{};
        check(geo_report_check(rep, i, &c));
        ordered_json row = {{"criterion", c.criterion},
                            {"suite", c.suite},
                            {"passed", c.passed != 0},
                            {"warning", c.warning != 0},
                            {"seconds", num(c.seconds)},
                            {"detail", c.detail}};
        if (*c.attachment) row["attachment"] = c.attachment;
        checks.push_back(row);
      }
      const bool ok = geo_report_ok(rep) != 0;
      out.emit("verify", {{"suite", suite ? ordered_json(*suite) : ordered_json(nullptr)}},
               {{"checks", checks}, {"ok", ok}}, {{"workers", vopts.workers}, {"sweep_n_max", vopts.sweep_n_max}},
               "checks");
      return ok ? kOk : kVerifyFailed;
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error (%s): %s\n", geo_status_name(f.status), f.what.c_str());
    return exit_code(f.status);
  }
  return kOk;
}
