#include "asympair/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "asympair/delay.hpp"
#include "asympair/expression.hpp"
#include "asympair/format.hpp"
#include "asympair/pairs.hpp"
#include "asympair/remainder.hpp"
#include "asympair/sequence.hpp"
#include "asympair/solution.hpp"
#include "asympair/space_spec.hpp"
#include "asympair/space_tests.hpp"

namespace asympair {

namespace {

Json optional_json(const std::optional<std::string>& value) { return value ? Json(*value) : Json(nullptr); }
Json optional_json(const std::optional<double>& value) { return value ? json_number(*value) : Json(nullptr); }

Index resolved_N(const RunConfig& c) { return c.N.value_or(default_N(c.command)); }
std::optional<double> resolved_tol(const RunConfig& c) { return c.tol ? c.tol : default_tol(c.command); }

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (c.m < 1 || c.m > 8) fail("--m must be in [1, 8]");
  if (c.p < 1) fail("--p must be >= 1");
  if (resolved_N(c) < 16) fail("--N must be >= 16");
  if (!(c.band > 0.0 && c.band < 0.5)) fail("--band must be in (0, 0.5)");
  if (auto tol = resolved_tol(c); tol && !(*tol > 0.0)) fail("--tol must be positive");
  if (c.max_iter < 1) fail("--max-iter must be >= 1");
  if (c.jobs < 1) fail("--jobs must be >= 1");
  if (c.oracle_terms < 1024) fail("--oracle-terms must be >= 1024");
  if (c.M && !(*c.M > 0.0)) fail("--M must be positive");
  if (!c.seq_files.empty() && !c.tail) fail("--seq-file needs an explicit --tail declaration");
}

TestOptions test_options(const RunConfig& c, Index samples) {
  TestOptions options;
  options.band = c.band;
  options.samples = samples;
  options.oracle_max_terms = c.oracle_terms;
  return options;
}

EquationSpec equation(const RunConfig& c) {
  return {c.m, parse_sequence_spec(c.a), parse_sequence_spec(c.b), parse_function_spec(c.f),
          parse_delay_spec(c.sigma)};
}

std::string equation_label(const RunConfig& c) {
  return "m=" + std::to_string(c.m) + " a=" + c.a + " b=" + c.b + " f=" + c.f + " sigma=" + c.sigma;
}

PairParams pair_params(const RunConfig& c) {
  PairParams params;
  params.s = c.s;
  params.t = c.t;
  params.lambda = c.lambda;
  params.big_o = c.big_o;
  return params;
}

// Z for construct and verify: a catalog pair's Z, an explicit space, or o(1).
SpaceSpec target_space(const RunConfig& c, Json& metrics) {
  if (c.pair) {
    const PairSpec pair = lookup_pair(*c.pair, c.m, pair_params(c));
    metrics["pair"] = to_string(pair);
    return pair.Z;
  }
  return c.space ? parse_space_spec(*c.space) : SpaceSpec::o_one();
}

int exit_code_for(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const ParseError&) {
    return kExitUsage;
  } catch (const RefusedError&) {
    return kExitRefused;
  } catch (const ConvergenceError&) {
    return kExitNoConvergence;
  } catch (const Error&) {
    return kExitNumeric;
  } catch (const std::invalid_argument&) {
    return kExitUsage;
  } catch (const CLI::Error&) {
    return kExitUsage;
  } catch (...) {
    return kExitNumeric;
  }
}

std::string message_of(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

// Runs body(0..count-1) on up to `jobs` threads. Results go into slots the
// caller indexes by input position, so the order never depends on timing.
template <class Body>
void parallel_for(std::size_t count, int jobs, const Body& body) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
  };
  std::vector<std::thread> pool;
  const std::size_t extra = std::min<std::size_t>(count, static_cast<std::size_t>(jobs));
  for (std::size_t j = 1; j < extra; ++j) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();
}

struct Input {
  std::string label;
  Sequence sequence;
};

std::vector<Input> classify_inputs(const RunConfig& c) {
  std::vector<Input> inputs;
  for (const auto& text : c.seqs) inputs.push_back({text, parse_sequence_spec(text)});
  TailModel tail = UnknownTail{};
  if (!c.seq_files.empty()) {
    try {
      tail = parse_tail_model(*c.tail);
    } catch (const RefusedError& e) {
      throw std::invalid_argument(std::string("--tail: ") + e.what());
    }
  }
  for (const auto& path : c.seq_files) inputs.push_back({path, Sequence::table(read_csv_column(path), tail, path)});
  if (inputs.empty()) throw std::invalid_argument("classify needs --seq or --seq-file");
  return inputs;
}

Verdict run_named_test(const std::string& name, const Sequence& a, double t, const RunConfig& c,
                       const TestOptions& options) {
  if (name == "log") return log_test(a, t, options);
  if (name == "raabe") return raabe_test(a, t, options);
  if (name == "schlomilch") return schlomilch_test(a, t, options);
  if (name == "gauss") return gauss_test(a, t, options);
  if (name == "bertrand") return bertrand_test(a, t, options);
  if (name == "oracle") return direct_sum_oracle(a, t, options.oracle_max_terms, options.band);
  if (name == "kummer") {
    if (!c.kummer_c) throw std::invalid_argument("--test kummer needs --kummer-c");
    return kummer_test(a, parse_sequence_spec(*c.kummer_c), t, options);
  }
  throw std::invalid_argument("unknown test '" + name + "'");
}

ReportItem classify_one(const Input& input, const SpaceSpec& space, const RunConfig& c) {
  const TestOptions options = test_options(c, resolved_N(c));
  ReportItem item;
  item.label = input.label;
  item.metrics["space"] = to_string(space);
  Verdict decision;
  if (c.tests.empty()) {
    Classification result = classify_space(input.sequence, space, options);
    item.verdicts = std::move(result.trace);
    decision = result.decision;
  } else {
    if (space.kind != SpaceKind::A) throw std::invalid_argument("--test applies to A(t) spaces only");
    for (const auto& name : c.tests) {
      item.verdicts.push_back(run_named_test(name, input.sequence, space.parameter, c, options));
      if (!decision.decisive() && item.verdicts.back().decisive()) decision = item.verdicts.back();
    }
    if (!decision.decisive()) {
      decision = item.verdicts.back();
      decision.test = "requested tests";
    }
  }
  item.metrics["decision"] = to_string(decision.outcome);
  item.metrics["decided_by"] = decision.test;
  return item;
}

Json trajectory_metrics(const Trajectory& traj) {
  Json m;
  m["start"] = traj.start;
  m["end"] = traj.end();
  m["kind"] = to_string(traj.kind);
  m["x_start"] = json_number(traj.values.front());
  m["x_end"] = json_number(traj.values.back());
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 1; i < traj.values.size(); ++i) {
    increasing = increasing && traj.values[i] >= traj.values[i - 1];
    decreasing = decreasing && traj.values[i] <= traj.values[i - 1];
  }
  m["monotone"] = increasing ? "nondecreasing" : decreasing ? "nonincreasing" : "no";
  return m;
}

struct CsvRow {
  Index n;
  double x;
  std::optional<double> y, diff, R;
};

void write_trajectory_csv(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::invalid_argument("cannot write '" + path + "'");
  const auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  file << "n,x,y,diff,R\n";
  for (const auto& r : rows) {
    file << r.n << "," << format_number(r.x) << "," << cell(r.y) << "," << cell(r.diff) << "," << cell(r.R) << "\n";
  }
  if (!file) throw std::invalid_argument("cannot write '" + path + "'");
}

Sequence table_or_dsl(const std::optional<std::string>& file, const std::optional<std::string>& text,
                      const char* what) {
  if (file) return Sequence::table(read_csv_column(*file), UnknownTail{}, *file);
  if (text) return parse_sequence_spec(*text);
  throw std::invalid_argument(std::string("verify needs --") + what + " or --" + what + "-file");
}

}  // namespace

Index default_N(const std::string& command) {
  if (command == "solve" || command == "construct") return 2048;
  if (command == "pairs") return 200;
  return 10'000;
}

std::optional<double> default_tol(const std::string& command) {
  if (command == "construct") return 1e-10;
  if (command == "pairs") return 1e-8;
  return std::nullopt;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["seq"] = c.seqs;
  j["seq_file"] = c.seq_files;
  j["tail"] = optional_json(c.tail);
  j["space"] = optional_json(c.space);
  j["pair"] = optional_json(c.pair);
  j["test"] = c.tests;
  j["kummer_c"] = optional_json(c.kummer_c);
  j["m"] = c.m;
  j["a"] = c.a;
  j["b"] = c.b;
  j["f"] = c.f;
  j["sigma"] = c.sigma;
  Json init = Json::array();
  for (double v : c.init) init.push_back(json_number(v));
  j["init"] = init;
  j["y"] = optional_json(c.y);
  j["y_file"] = optional_json(c.y_file);
  j["x"] = optional_json(c.x);
  j["x_file"] = optional_json(c.x_file);
  j["check"] = optional_json(c.check);
  j["t"] = optional_json(c.t);
  j["s"] = optional_json(c.s);
  j["lambda"] = optional_json(c.lambda);
  j["big_o"] = c.big_o;
  j["M"] = optional_json(c.M);
  j["p"] = c.p;
  j["N"] = resolved_N(c);
  j["tol"] = optional_json(resolved_tol(c));
  j["band"] = c.band;
  j["max_iter"] = c.max_iter;
  j["oracle_terms"] = c.oracle_terms;
  j["probe"] = c.probes;
  j["jobs"] = c.jobs;
  j["format"] = c.format == OutputFormat::json ? "json" : "human";
  j["out"] = optional_json(c.out);
  j["csv"] = optional_json(c.csv);
  return j;
}

Report cmd_classify(const RunConfig& c) {
  validate(c);
  SpaceSpec space;
  if (c.space) {
    space = parse_space_spec(*c.space);
  } else if (c.t) {
    space = SpaceSpec::A(*c.t);
  } else {
    throw std::invalid_argument("classify needs --space or --t");
  }
  if (space.kind == SpaceKind::A && !(space.parameter >= 1.0)) throw std::invalid_argument("A(t) needs t >= 1");
  const std::vector<Input> inputs = classify_inputs(c);

  Report report;
  report.command = "classify";
  report.items.resize(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  parallel_for(inputs.size(), c.jobs, [&](std::size_t i) {
    try {
      report.items[i] = classify_one(inputs[i], space, c);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (errors[i]) {
      report.items[i].label = inputs[i].label;
      report.items[i].metrics["error"] = message_of(errors[i]);
      if (report.exit_code == kExitOk || report.exit_code == kExitNotInSpace) report.exit_code = exit_code_for(errors[i]);
    } else if (report.exit_code == kExitOk && report.items[i].metrics["decision"] == "NotInSpace") {
      report.exit_code = kExitNotInSpace;
    }
  }
  return report;
}

Report cmd_solve(const RunConfig& c) {
  validate(c);
  const EquationSpec eq = equation(c);
  const Index N = resolved_N(c);
  const Trajectory traj = forward_solve(eq, c.p, c.init, N);

  Report report;
  report.command = "solve";
  ReportItem item;
  item.label = equation_label(c);
  item.metrics = trajectory_metrics(traj);
  item.metrics["residual"] = json_number(residual(eq, traj));
  if (c.csv) {
    std::optional<Sequence> y;
    if (c.y) y = parse_sequence_spec(*c.y);
    std::vector<CsvRow> rows;
    for (Index n = traj.start; n <= traj.end(); ++n) {
      CsvRow row{n, traj.at(n), std::nullopt, std::nullopt, std::nullopt};
      if (y) {
        row.y = (*y)(n);
        row.diff = row.x - *row.y;
      }
      rows.push_back(row);
    }
    write_trajectory_csv(*c.csv, rows);
    item.metrics["csv"] = *c.csv;
  }
  report.items.push_back(std::move(item));
  return report;
}

Report cmd_construct(const RunConfig& c) {
  validate(c);
  if (!c.M) throw std::invalid_argument("construct needs --M");
  const EquationSpec eq = equation(c);
  const Sequence y = parse_sequence_spec(c.y.value_or("0"));
  const Index N = resolved_N(c);
  const double tol = *resolved_tol(c);

  Report report;
  report.command = "construct";
  ReportItem item;
  item.label = equation_label(c) + " y=" + y.label();
  const SpaceSpec Z = target_space(c, item.metrics);
  item.metrics["Z"] = to_string(Z);

  const PreconditionReport pre = check_precondition(eq, y, c.p, *c.M, tol, N);
  item.metrics["precondition_ok"] = pre.ok;
  item.metrics["R_p"] = json_number(pre.R_p);
  item.metrics["precondition_margin"] = json_number(pre.margin);
  if (!pre.ok) {
    item.metrics["note"] = pre.ball.note;
    report.items.push_back(std::move(item));
    report.exit_code = kExitRefused;
    return report;
  }

  ConstructOptions options;
  options.tol = tol;
  options.max_iter = c.max_iter;
  const ConstructReport built = construct_solution(eq, y, c.p, *c.M, N, options);
  item.metrics["status"] = to_string(built.status);
  item.metrics["iterations"] = built.iterations;
  item.metrics["final_sup_change"] = json_number(built.final_sup_change);
  item.metrics["residual_max"] = json_number(built.residual_max);
  item.metrics["bound_check"] = built.bound_check;
  item.metrics["certified_tail"] = built.certified_tail;
  item.metrics["kind"] = to_string(built.trajectory.kind);
  if (!built.note.empty()) item.metrics["note"] = built.note;
  if (!built.converged()) {
    report.items.push_back(std::move(item));
    report.exit_code = kExitNoConvergence;
    return report;
  }

  const Trajectory& traj = built.trajectory;
  const double limit = traj.at(traj.end());
  item.metrics["limit_estimate"] = json_number(limit);
  Json probes = Json::array();
  double gap = 0.0;
  for (Index n : c.probes) {
    if (n < 1 || n > traj.end()) continue;
    probes.push_back(Json{{"n", n}, {"x", json_number(traj.at(n))}});
    gap = std::max(gap, std::abs(traj.at(n) - limit));
  }
  item.metrics["probes"] = probes;
  item.metrics["limit_gap"] = json_number(gap);

  const Verdict equivalence = verify_equivalence(built, Z, test_options(c, N));
  item.verdicts.push_back(equivalence);

  if (c.csv) {
    std::optional<Sequence> R;
    try {
      R = *c.M * remainder_sequence(abs(eq.a), c.m);
    } catch (const RefusedError&) {
    }
    std::vector<CsvRow> rows;
    for (Index n = 1; n <= traj.end(); ++n) {
      const double diff = n < traj.start ? 0.0 : built.deviation[static_cast<std::size_t>(n - traj.start)];
      CsvRow row{n, traj.at(n), y(n), diff, std::nullopt};
      if (R) row.R = (*R)(n);
      rows.push_back(row);
    }
    write_trajectory_csv(*c.csv, rows);
    item.metrics["csv"] = *c.csv;
  }
  report.items.push_back(std::move(item));
  if (equivalence.outcome == Outcome::not_in_space) report.exit_code = kExitNotInSpace;
  return report;
}

Report cmd_verify(const RunConfig& c) {
  validate(c);
  Report report;
  report.command = "verify";
  ReportItem item;

  Trajectory x;
  if (c.x_file) {
    x.values = read_csv_column(*c.x_file);
  } else if (c.x) {
    Index count = resolved_N(c);
    if (c.y_file) count = static_cast<Index>(read_csv_column(*c.y_file).size());
    x.values = sample_prefix(parse_sequence_spec(*c.x), count);
  } else {
    throw std::invalid_argument("verify needs --x or --x-file");
  }
  const Sequence y = table_or_dsl(c.y_file, c.y, "y");
  if (y.horizon() && *y.horizon() != x.end()) {
    throw std::invalid_argument("index ranges differ: x has 1.." + std::to_string(x.end()) + ", y has 1.." +
                                std::to_string(*y.horizon()));
  }
  item.label = (c.x_file ? *c.x_file : *c.x) + " vs " + y.label();
  const SpaceSpec Z = target_space(c, item.metrics);
  item.metrics["Z"] = to_string(Z);
  item.metrics["overlap"] = x.end();
  double max_diff = 0.0;
  for (Index n = 1; n <= x.end(); ++n) max_diff = std::max(max_diff, std::abs(x.at(n) - y(n)));
  item.metrics["max_abs_diff"] = json_number(max_diff);

  const Verdict v = verify_equivalence(x, y, Z, test_options(c, x.end()));
  item.verdicts.push_back(v);
  report.items.push_back(std::move(item));
  if (v.outcome == Outcome::not_in_space) report.exit_code = kExitNotInSpace;
  return report;
}

Report cmd_pairs(const RunConfig& c) {
  validate(c);
  Report report;
  report.command = "pairs";
  ReportItem item;
  if (!c.pair) {
    item.label = "catalog";
    item.metrics["names"] = pair_names();
    report.items.push_back(std::move(item));
    return report;
  }
  const PairSpec pair = lookup_pair(*c.pair, c.m, pair_params(c));
  item.label = to_string(pair);
  item.metrics["name"] = pair.name;
  item.metrics["m"] = pair.m;
  item.metrics["A"] = to_string(pair.A);
  item.metrics["Z"] = to_string(pair.Z);
  item.metrics["evanescent"] = pair.evanescent;
  if (c.check) {
    const PairInstanceReport r =
        check_pair_instance(pair, parse_sequence_spec(*c.check), resolved_N(c), *resolved_tol(c), test_options(c, 10'000));
    item.verdicts = {r.precondition, r.membership};
    item.verdicts[0].test = "A:" + item.verdicts[0].test;
    item.verdicts[1].test = "Z:" + item.verdicts[1].test;
    item.metrics["check"] = *c.check;
    item.metrics["route"] = to_string(r.route);
    item.metrics["max_residual"] = json_number(r.max_residual);
    item.metrics["identity_holds"] = r.identity_holds;
    item.metrics["passed"] = r.passed();
    item.metrics["warnings"] = r.warnings;
    if (!r.passed()) report.exit_code = kExitNotInSpace;
  }
  report.items.push_back(std::move(item));
  return report;
}

Report run_command(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  Report report;
  try {
    if (config.command == "classify") {
      report = cmd_classify(config);
    } else if (config.command == "solve") {
      report = cmd_solve(config);
    } else if (config.command == "construct") {
      report = cmd_construct(config);
    } else if (config.command == "verify") {
      report = cmd_verify(config);
    } else if (config.command == "pairs") {
      report = cmd_pairs(config);
    } else {
      throw std::invalid_argument("unknown command '" + config.command + "'");
    }
  } catch (...) {
    report = Report{};
    report.command = config.command;
    report.error = message_of(std::current_exception());
    report.exit_code = exit_code_for(std::current_exception());
  }
  try {
    report.config = config_json(config);
  } catch (...) {
    report.config = Json::object();
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;
  report.wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  return report;
}

std::vector<double> read_csv_column(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(file, line) || line.rfind("n,", 0) != 0) {
    throw std::invalid_argument(path + ": expected a header starting with \"n,\"");
  }
  std::vector<double> values;
  Index row = 1;
  while (std::getline(file, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string n_text, value_text;
    std::getline(cells, n_text, ',');
    std::getline(cells, value_text, ',');
    const auto where = path + ":" + std::to_string(row);
    Index n = 0;
    double value = 0.0;
    try {
      std::size_t used = 0;
      n = std::stoll(n_text, &used);
      if (used != n_text.size()) throw std::invalid_argument("index");
      // strtod, unlike stod, accepts subnormal values.
      char* end = nullptr;
      value = std::strtod(value_text.c_str(), &end);
      if (value_text.empty() || end != value_text.c_str() + value_text.size()) throw std::invalid_argument("value");
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": malformed row '" + line + "'");
    }
    if (n != static_cast<Index>(values.size()) + 1) {
      throw std::invalid_argument(where + ": expected index " + std::to_string(values.size() + 1) + ", got " +
                                  std::to_string(n));
    }
    if (!std::isfinite(value)) throw std::invalid_argument(where + ": value is not finite");
    values.push_back(value);
  }
  if (values.empty()) throw std::invalid_argument(path + ": no data rows");
  return values;
}

namespace {

template <class T>
void add_optional(CLI::App* app, const std::string& flag, std::optional<T>& target, const std::string& help) {
  app->add_option_function<T>(flag, [&target](const T& value) { target = value; }, help);
}

void add_shared(CLI::App* app, RunConfig& c, std::string& format) {
  add_optional(app, "--N", c.N, "sample size or horizon (default depends on the command)");
  app->add_option("--band", c.band, "guard band around decision thresholds")->capture_default_str();
  app->add_option("--format", format, "human or json")->check(CLI::IsMember({"human", "json"}))->capture_default_str();
  add_optional(app, "--out", c.out, "write the report here instead of stdout");
  app->add_option("--oracle-terms", c.oracle_terms, "N_max of the partial-sum oracle")->capture_default_str();
}

void add_equation(CLI::App* app, RunConfig& c) {
  app->add_option("--m", c.m, "difference order")->capture_default_str();
  app->add_option("--a", c.a, "coefficient sequence a_n")->capture_default_str();
  app->add_option("--b", c.b, "forcing sequence b_n")->capture_default_str();
  app->add_option("--f", c.f, "nonlinearity f(x)")->capture_default_str();
  app->add_option("--sigma", c.sigma, "delay map, affine in n")->capture_default_str();
  app->add_option("--p", c.p, "start index")->capture_default_str();
  add_optional(app, "--csv", c.csv, "trajectory CSV n,x,y,diff,R");
}

void add_pair(CLI::App* app, RunConfig& c) {
  add_optional(app, "--pair,--name", c.pair, "catalog pair");
  add_optional(app, "--s", c.s, "pair parameter s");
  add_optional(app, "--t", c.t, "pair parameter t");
  add_optional(app, "--lambda", c.lambda, "pair parameter lambda");
  app->add_flag("--big-o", c.big_o, "use the O(.) variant of the pair");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymptotic difference pairs: membership tests, solvers and constructions", "asympair"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("asympair ") + kVersion);
  RunConfig c;
  std::string format = "human";

  CLI::App* classify = app.add_subcommand("classify", "membership of sequences in a space");
  add_shared(classify, c, format);
  classify->add_option("--seq", c.seqs, "sequence DSL (repeatable)");
  classify->add_option("--seq-file", c.seq_files, "CSV n,value (repeatable; needs --tail)");
  add_optional(classify, "--tail", c.tail, "tail model of the CSV tables");
  add_optional(classify, "--space", c.space, "space, e.g. A(2), o(1), Fin");
  add_optional(classify, "--t", c.t, "shorthand for --space A(t)");
  classify->add_option("--test", c.tests, "run these tests instead of the cascade")
      ->check(CLI::IsMember({"log", "raabe", "schlomilch", "gauss", "bertrand", "kummer", "oracle"}));
  add_optional(classify, "--kummer-c", c.kummer_c, "auxiliary sequence of the Kummer test");
  classify->add_option("--jobs", c.jobs, "parallel workers")->capture_default_str();

  CLI::App* solve = app.add_subcommand("solve", "forward simulation of the recurrence");
  add_shared(solve, c, format);
  add_equation(solve, c);
  solve->add_option("--init", c.init, "x_p..x_{p+m-1}")->delimiter(',')->required();
  add_optional(solve, "--y", c.y, "reference sequence for the CSV y column");

  CLI::App* construct = app.add_subcommand("construct", "solution asymptotic to a target y");
  add_shared(construct, c, format);
  add_equation(construct, c);
  add_pair(construct, c);
  add_optional(construct, "--space", c.space, "explicit Z (default o(1))");
  add_optional(construct, "--y", c.y, "target y with Δ^m y = b (default 0)");
  add_optional(construct, "--M", c.M, "bound |f| <= M near y");
  add_optional(construct, "--tol", c.tol, "iteration tolerance");
  construct->add_option("--max-iter", c.max_iter, "iteration cap")->capture_default_str();
  construct->add_option("--probe", c.probes, "indices whose values are reported")->delimiter(',');

  CLI::App* verify = app.add_subcommand("verify", "x - y in Z");
  add_shared(verify, c, format);
  add_pair(verify, c);
  verify->add_option("--m", c.m, "difference order of --pair")->capture_default_str();
  add_optional(verify, "--space", c.space, "explicit Z (default o(1))");
  add_optional(verify, "--x", c.x, "sequence DSL");
  add_optional(verify, "--x-file", c.x_file, "CSV whose second column is x");
  add_optional(verify, "--y", c.y, "sequence DSL");
  add_optional(verify, "--y-file", c.y_file, "CSV whose second column is y");

  CLI::App* pairs = app.add_subcommand("pairs", "catalog lookup and instance checks");
  add_shared(pairs, c, format);
  add_pair(pairs, c);
  pairs->add_option("--m", c.m, "difference order")->capture_default_str();
  add_optional(pairs, "--check", c.check, "sequence a to run check_pair_instance on");
  add_optional(pairs, "--tol", c.tol, "identity tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  for (const CLI::App* sub : app.get_subcommands()) c.command = sub->get_name();
  c.format = format == "json" ? OutputFormat::json : OutputFormat::human;

  const Report report = run_command(c);
  const std::string text = c.format == OutputFormat::json ? serialize(report) : render_human(report);
  if (c.out) {
    std::ofstream file(*c.out, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
      err << "asympair: cannot write '" << *c.out << "'\n";
      return kExitUsage;
    }
  } else {
    out << text;
  }
  if (!report.error.empty()) err << "asympair: " << report.error << "\n";
  return report.exit_code;
}

}  // namespace asympair
