#include "corrwalk_cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrwalk/errors.hpp"
#include "corrwalk/estimators.hpp"
#include "corrwalk/gauss_oracle.hpp"
#include "corrwalk_cli/validation.hpp"

namespace corrwalk::cli {

using Json = nlohmann::ordered_json;

ParseError::ParseError(std::int64_t line, const std::string& what)
    : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}

HurstModel model_from_flag(double hurst) {
  if (hurst == 0.5) return HurstModel::brownian();
  if (!(hurst > 0.5 && hurst < 1.0)) {
    throw ConfigError("--hurst must be 0.5 or lie in the open interval (0.5, 1); got " +
                      format_value(hurst));
  }
  return HurstModel(hurst);
}

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", t);
  return buf;
}

std::string format_value(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_path_csv(std::ostream& out, const std::vector<double>& times,
                    const std::vector<double>& values) {
  out << "t,value\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    out << format_time(times[k]) << ',' << format_value(values[k]) << '\n';
  }
}

namespace {

void write_raw_csv(std::ostream& out, const std::vector<double>& k,
                   const std::vector<double>& values) {
  out << "k,level\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_time(k[i]) << ',' << format_value(values[i]) << '\n';
  }
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& field, std::int64_t line, const char* column) {
  const std::string text = trim(field);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError(line, std::string("cannot parse ") + column + " column entry '" + text + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line, std::string("non-finite ") + column + " value");
  return v;
}

}  // namespace

PathTable read_path_csv(std::istream& in) {
  PathTable table;
  std::string line;
  std::int64_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "t,value" && line != "k,level") {
        throw ParseError(number, "expected header 't,value', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(number, "expected exactly two comma-separated fields");
    }
    table.first.push_back(parse_number(line.substr(0, comma), number, "t"));
    table.values.push_back(parse_number(line.substr(comma + 1), number, "value"));
  }
  if (!header_seen) throw ParseError(number + 1, "missing header 't,value'");
  return table;
}

GeneratedPath generate(const RunConfig& config) {
  const HurstModel model = model_from_flag(config.hurst);
  GeneratedPath result;
  const auto start = std::chrono::steady_clock::now();
  double normalization = 1.0;  // values -> raw levels
  if (config.mode == "gaussian-oracle") {
    if (config.steps < 1 || config.steps > kMaxOracleSteps) {
      throw ConfigError("--steps must lie in [1, " + std::to_string(kMaxOracleSteps) +
                        "] for the gaussian-oracle mode");
    }
    result.values = cholesky_fbm(model.hurst(), config.steps, config.seed);
    normalization = std::pow(static_cast<double>(config.steps), model.hurst());
  } else {
    const auto mode = parse_walk_mode(config.mode);
    if (!mode) throw ConfigError("unknown --mode '" + config.mode + "'");
    GenerateOptions options{.model = model,
                            .steps = config.steps,
                            .paths = config.paths,
                            .mode = *mode,
                            .policy = config.infeasible,
                            .seed = config.seed,
                            .workers = config.workers,
                            .shared_p = config.shared_p};
    AggregatedPath path = generate_fbm(options);
    result.values = std::move(path.values);
    result.stats = path.meta.stats;
    normalization = std::pow(static_cast<double>(config.steps), model.hurst()) / model.scale();
  }
  result.first.resize(result.values.size());
  const double n = static_cast<double>(config.steps);
  for (std::size_t k = 0; k < result.values.size(); ++k) {
    result.first[k] = config.raw_levels ? static_cast<double>(k) : static_cast<double>(k) / n;
    if (config.raw_levels) result.values[k] *= normalization;
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::json:
      return "json";
    case OutputFormat::text:
      return "text";
  }
  return "csv";
}

void check_common(const RunConfig& c) {
  if (c.steps < 2) throw ConfigError("--steps must be >= 2");
  if (c.paths < 1) throw ConfigError("--paths must be >= 1");
  if (c.workers < 1) throw ConfigError("--workers must be >= 1");
  (void)model_from_flag(c.hurst);
}

Json stats_json(const RunStats& s) {
  return Json{{"total_resamples", s.total_resamples}, {"max_resamples", s.max_resamples},
              {"clamped", s.clamped},                 {"at_floor", s.at_floor},
              {"p_mean", s.p_mean},                   {"p_min", s.p_min},
              {"p_max", s.p_max},                     {"rho_mean", s.rho_mean},
              {"sigma_max", s.sigma_max},             {"u_max", s.u_max}};
}

std::string reproduce_line(const RunConfig& c) {
  std::ostringstream os;
  os << "corrwalk generate --hurst " << format_value(c.hurst) << " --steps " << c.steps
     << " --paths " << c.paths << " --seed " << c.seed << " --mode " << c.mode
     << " --infeasible " << to_string(c.infeasible) << " --format " << to_string(c.format);
  if (c.shared_p) os << " --shared-p";
  if (c.raw_levels) os << " --raw-levels";
  os << " --out " << c.out;
  return os.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  return f;
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
  check_common(config);
  if (config.mode != "gaussian-oracle" && !parse_walk_mode(config.mode)) {
    throw ConfigError("unknown --mode '" + config.mode + "'");
  }
  if (config.format != OutputFormat::csv && config.format != OutputFormat::json) {
    throw ConfigError("--format must be csv or json for generate");
  }
  const GeneratedPath path = generate(config);

  auto emit = [&](std::ostream& os) {
    if (config.format == OutputFormat::csv) {
      if (config.raw_levels) {
        write_raw_csv(os, path.first, path.values);
      } else {
        write_path_csv(os, path.first, path.values);
      }
    } else {
      Json doc;
      doc[config.raw_levels ? "k" : "t"] = path.first;
      doc[config.raw_levels ? "level" : "value"] = path.values;
      os << doc.dump() << '\n';
    }
  };

  if (config.out.empty() || config.out == "-") {
    emit(out);
    return kExitOk;
  }
  {
    std::ofstream f = open_output(config.out);
    emit(f);
    if (!f) throw ConfigError("write to '" + config.out + "' failed");
  }

  Json meta;
  meta["command"] = "generate";
  meta["hurst"] = config.hurst;
  meta["steps"] = config.steps;
  meta["paths"] = config.paths;
  meta["seed"] = config.seed;
  meta["mode"] = config.mode;
  meta["infeasible"] = to_string(config.infeasible);
  meta["shared_p"] = config.shared_p;
  meta["workers"] = config.workers;
  meta["format"] = to_string(config.format);
  meta["raw_levels"] = config.raw_levels;
  meta["out"] = config.out;
  meta["rows"] = path.values.size();
  meta["stats"] = path.stats ? stats_json(*path.stats) : Json(nullptr);
  meta["wall_clock_seconds"] = path.seconds;
  const double increments = config.mode == "gaussian-oracle"
                                ? static_cast<double>(config.steps)
                                : static_cast<double>(config.steps) *
                                      static_cast<double>(config.paths);
  meta["increments_per_second"] = path.seconds > 0.0 ? increments / path.seconds : 0.0;
  meta["reproduce"] = reproduce_line(config);
  std::ofstream f = open_output(config.out + ".meta.json");
  f << meta.dump(2) << '\n';
  return kExitOk;
}

int cmd_estimate(const std::string& input, OutputFormat format, std::int64_t max_lag,
                 std::ostream& out) {
  if (max_lag < 1) throw ConfigError("--max-lag must be >= 1");
  PathTable table;
  if (input == "-") {
    table = read_path_csv(std::cin);
  } else {
    std::ifstream f(input);
    if (!f) throw ConfigError("cannot open '" + input + "'");
    table = read_path_csv(f);
  }
  const EstimateReport r = estimate_report(table.values, max_lag);
  if (format == OutputFormat::json) {
    Json doc;
    doc["input"] = input;
    doc["n_used"] = r.n_used;
    doc["h_dsod"] = r.h_dsod;
    doc["h_aggvar"] = r.h_aggvar ? Json(*r.h_aggvar) : Json(nullptr);
    doc["acf"] = r.acf;
    doc["notes"] = r.notes;
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  auto row = [&](const std::string& key, const std::string& value) {
    out << std::left << std::setw(12) << key << value << '\n';
  };
  row("input", input);
  row("n_used", std::to_string(r.n_used));
  row("h_dsod", format_value(r.h_dsod));
  row("h_aggvar", r.h_aggvar ? format_value(*r.h_aggvar) : "n/a");
  for (std::size_t i = 0; i < r.acf.size(); ++i) {
    row("acf[" + std::to_string(i + 1) + "]", format_value(r.acf[i]));
  }
  for (const auto& note : r.notes) row("note", note);
  return kExitOk;
}

int cmd_validate(const RunConfig& config, const ValidationOptions& base, std::ostream& out) {
  check_common(config);
  const auto mode = parse_walk_mode(config.mode);
  if (!mode) throw ConfigError("--mode must be paper, matched or enriquez for validate");
  ValidationOptions options = base;
  options.model = model_from_flag(config.hurst);
  options.mode = *mode;
  options.policy = config.infeasible;
  options.seed = config.seed;
  options.workers = config.workers;
  options.steps = config.steps;
  options.paths = config.paths;
  if (options.runs < 8 || options.chain_steps < 1000 || options.draws < 100 ||
      options.oracle_steps < 16 || options.oracle_steps > kMaxOracleSteps ||
      options.oracle_paths < 8) {
    throw ConfigError("validation scale flags out of range");
  }
  const ValidationReport report = run_validation(options);
  auto emit = [&](std::ostream& os) {
    if (config.format == OutputFormat::json) {
      print_report_json(os, report);
    } else {
      print_report_text(os, report);
    }
  };
  if (config.out.empty() || config.out == "-") {
    emit(out);
  } else {
    std::ofstream f = open_output(config.out);
    emit(f);
  }
  return report.passed() ? kExitOk : kExitValidation;
}

void report_error(std::ostream& err, const char* kind, int code, const std::string& message,
                  const Json& extra = Json::object()) {
  Json line{{"error", kind}, {"exit_code", code}, {"message", message}};
  for (const auto& [k, v] : extra.items()) line[k] = v;
  err << line.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional Brownian motion from aggregated correlated random walks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "corrwalk 0.1.0");

  RunConfig gen_config;
  RunConfig val_config;
  val_config.paths = 64;
  std::string format = "csv";
  std::string estimate_format = "text";
  std::string validate_format = "text";
  std::string input;
  std::int64_t max_lag = 10;
  ValidationOptions vopts;

  auto add_run_flags = [&](CLI::App* sub, RunConfig& config, bool generate_only) {
    sub->add_option("--hurst", config.hurst, "Hurst exponent: 0.5 or in (0.5, 1)")
        ->capture_default_str();
    sub->add_option("--steps", config.steps, "Steps per trajectory N")->capture_default_str();
    sub->add_option("--paths", config.paths, "Trajectories per path M")->capture_default_str();
    sub->add_option("--seed", config.seed, "Master seed")->capture_default_str();
    sub->add_option_function<std::string>(
           "--infeasible",
           [&config](const std::string& s) { config.infeasible = *parse_infeasible_policy(s); },
           "Policy for infeasible uniforms: resample, clamp or error")
        ->check(CLI::IsMember({"resample", "clamp", "clamp-to-half", "error"}));
    sub->add_option("--workers", config.workers, "Worker threads (output does not depend on it)")
        ->capture_default_str();
    sub->add_option("--out", config.out, generate_only ? "Output path ('-' for stdout)"
                                                       : "Report path (default stdout)");
    if (generate_only) {
      sub->add_option("--mode", config.mode)
          ->check(CLI::IsMember({"paper", "matched", "enriquez", "gaussian-oracle"}))
          ->capture_default_str();
      sub->add_flag("--shared-p", config.shared_p, "One p for all trajectories");
      sub->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))
          ->capture_default_str();
      sub->add_flag("--raw-levels", config.raw_levels,
                    "Emit k,level without the a_H / N^H time scaling");
    } else {
      sub->add_option("--mode", config.mode)
          ->check(CLI::IsMember({"paper", "matched", "enriquez"}))
          ->capture_default_str();
    }
  };

  CLI::App* gen = app.add_subcommand("generate", "Generate one approximate fBm path");
  add_run_flags(gen, gen_config, true);
  gen->get_option("--out")->required();

  CLI::App* est = app.add_subcommand("estimate", "Estimate the Hurst exponent of a path file");
  est->add_option("input", input, "CSV in the generate schema ('-' for stdin)")->required();
  est->add_option("--format", estimate_format)->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  est->add_option("--max-lag", max_lag)->capture_default_str();

  CLI::App* val = app.add_subcommand("validate", "Run the statistical property suites");
  add_run_flags(val, val_config, false);
  val->add_option("--format", validate_format)->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  val->add_option("--runs", vopts.runs, "Independent aggregate runs")->capture_default_str();
  val->add_option("--chain-steps", vopts.chain_steps)->capture_default_str();
  val->add_option("--draws", vopts.draws, "p draws for the distribution check")
      ->capture_default_str();
  val->add_option("--oracle-steps", vopts.oracle_steps)->capture_default_str();
  val->add_option("--oracle-paths", vopts.oracle_paths)->capture_default_str();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::Success& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }
    if (gen->parsed()) {
      gen_config.command = "generate";
      gen_config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
      return cmd_generate(gen_config, out);
    }
    if (est->parsed()) {
      return cmd_estimate(input, estimate_format == "json" ? OutputFormat::json
                                                           : OutputFormat::text,
                          max_lag, out);
    }
    val_config.command = "validate";
    val_config.format = validate_format == "json" ? OutputFormat::json : OutputFormat::text;
    return cmd_validate(val_config, vopts, out);
  } catch (const ParseError& e) {
    report_error(err, "parse", kExitConfig, e.what(), Json{{"line", e.line()}});
    return kExitConfig;
  } catch (const ConfigError& e) {
    report_error(err, "config", kExitConfig, e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    report_error(err, "config", kExitConfig, e.what());
    return kExitConfig;
  } catch (const InfeasibleUniformError& e) {
    report_error(err, "infeasible", kExitNumeric, e.what(),
                 Json{{"u", e.u()}, {"sigma_max", e.sigma_max()}});
    return kExitNumeric;
  } catch (const InfeasibleTargetError& e) {
    report_error(err, "infeasible", kExitNumeric, e.what(),
                 Json{{"target", e.target()}, {"sigma_max", e.sigma_max()}});
    return kExitNumeric;
  } catch (const InsufficientDataError& e) {
    report_error(err, "insufficient-data", kExitNumeric, e.what());
    return kExitNumeric;
  } catch (const NumericError& e) {
    report_error(err, "numeric", kExitNumeric, e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    report_error(err, "internal", kExitNumeric, e.what());
    return kExitNumeric;
  }
}

}  // namespace corrwalk::cli
