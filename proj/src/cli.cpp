#include "solvq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "solvq/blackbox.hpp"
#include "solvq/classical.hpp"
#include "solvq/errors.hpp"
#include "solvq/factorgroup.hpp"
#include "solvq/qsim.hpp"
#include "solvq/reductions.hpp"
#include "solvq/rng.hpp"
#include "solvq/solvable_order.hpp"

namespace solvq::cli {
namespace {

constexpr const char* kSchema = "solvq-record/1";

struct Config {
  std::string command;
  std::string group_path;
  std::optional<std::string> generators;
  std::optional<std::string> subgroup;
  std::optional<std::string> element;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = kDefaultSeed;
  bool record = false;
  bool verify = false;
  std::size_t max_group_size = classical::kDefaultMaxGroupSize;
};

// Ordered key/value report. Record mode prints `key=value` lines; human mode
// prints `key: value` and appends the wall time.
class Report {
 public:
  void add(std::string key, std::string value) { fields_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, std::uint64_t value) { add(std::move(key), std::to_string(value)); }
  void add_bool(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
  void add_real(std::string key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    add(std::move(key), std::string(buf));
  }
  void add_lines(std::string key, const std::string& text) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) add(key, line);
  }

  void print(std::ostream& out, bool record, double seconds) const {
    for (const auto& [key, value] : fields_) out << key << (record ? "=" : ": ") << value << '\n';
    if (!record) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f s", seconds);
      out << "wall_time: " << buf << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string join_u64(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_hex(const GroupOracle& oracle, const std::vector<Encoding>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += oracle.hex(values[i]);
  }
  return out;
}

std::string format_epsilon(double epsilon) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", epsilon);
  return buf;
}

Encoding parse_element(const GroupOracle& oracle, std::string_view token) {
  const Encoding e = oracle.parse(token);
  // Checked here so that a bad literal never reaches the oracle as a query.
  if (!oracle.is_valid(e)) {
    throw InvalidEncoding("'" + std::string(token) + "' is not a valid element of " + oracle.describe());
  }
  return e;
}

// A file of hex literals (comma or whitespace separated, `#` comments), or
// the same list given inline.
std::vector<Encoding> parse_element_list(const GroupOracle& oracle, const std::string& argument) {
  std::string text = argument;
  std::error_code ec;
  if (!argument.empty() && std::filesystem::is_regular_file(argument, ec)) {
    std::ifstream in(argument);
    if (!in) throw BadSpec("cannot read element list '" + argument + "'");
    std::ostringstream buf;
    for (std::string line; std::getline(in, line);) buf << line.substr(0, line.find('#')) << '\n';
    text = buf.str();
  }
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream tokens(text);
  std::vector<Encoding> out;
  for (std::string token; tokens >> token;) out.push_back(parse_element(oracle, token));
  return out;
}

int exit_code_for(const Error& e) {
  const std::string& kind = e.kind();
  if (kind == "NotSolvable") return kNotSolvable;
  if (kind == "SizeLimitExceeded" || kind == "BudgetExhausted" || kind == "NoCoprimeOutcome" ||
      kind == "FactorizationFailed" || kind == "Unverified" || kind == "InsufficientCopies") {
    return kBudget;
  }
  return kUsage;
}

struct Context {
  const Config& config;
  const GroupOracle& oracle;
  std::vector<Encoding> generators;
  Rng rng;
  Report& report;
};

std::vector<Encoding> require_subgroup(Context& ctx) {
  if (!ctx.config.subgroup) throw BadSpec("--subgroup is required for '" + ctx.config.command + "'");
  return parse_element_list(ctx.oracle, *ctx.config.subgroup);
}

void add_decision(Context& ctx, const reductions::DecisionReport& d) {
  ctx.report.add_bool("answer", d.answer);
  ctx.report.add("orders", join_u64(d.orders));
  ctx.report.add_bool("decided_classically", d.decided_classically);
  ctx.report.add_real("failure_probability_bound", d.failure_probability_bound);
}

int cmd_order(Context& ctx, bool superpose) {
  solvable_order::Options options;
  options.verify = ctx.config.verify;
  options.max_group_size = ctx.config.max_group_size;
  const auto result = solvable_order::group_order(ctx.oracle, ctx.generators, ctx.config.epsilon, ctx.rng, options);
  auto& r = ctx.report;
  r.add("order", result.order);
  r.add("factors", join_u64(result.factors));
  r.add("chain", join_hex(ctx.oracle, result.chain));
  r.add("k", result.k);
  r.add("copies_prepared", result.copies_prepared);
  r.add("restarts", result.restarts);
  r.add_real("failure_probability_bound", result.failure_probability_bound);
  r.add("quantum_queries", result.oracle_queries);
  r.add("classical_queries", result.classical_queries);
  if (ctx.config.verify) {
    const auto elements = classical::closure(ctx.oracle, ctx.generators, ctx.config.max_group_size);
    const auto target = qsim::uniform_state(ctx.oracle, elements);
    r.add("closure_order", elements.size());
    r.add_real("trace_distance", qsim::trace_distance(result.final_state, target));
  }
  if (superpose) {
    r.add("support", result.final_state.size());
    r.add_lines("state", qsim::dump_string(result.final_state, true));
  }
  return kOk;
}

int cmd_member(Context& ctx) {
  if (!ctx.config.element) throw BadSpec("--element is required for 'member'");
  const Encoding h = parse_element(ctx.oracle, *ctx.config.element);
  reductions::Options options{ctx.config.max_group_size};
  const auto d = reductions::is_member(ctx.oracle, ctx.generators, h, ctx.config.epsilon, ctx.rng, options);
  ctx.report.add("element", ctx.oracle.hex(h));
  add_decision(ctx, d);
  return d.answer ? kOk : kNegative;
}

int cmd_relation(Context& ctx) {
  const auto h = require_subgroup(ctx);
  ctx.report.add("subgroup", join_hex(ctx.oracle, h));
  reductions::Options options{ctx.config.max_group_size};
  const double eps = ctx.config.epsilon;
  reductions::DecisionReport d;
  if (ctx.config.command == "subgroup") {
    d = reductions::is_subgroup(ctx.oracle, h, ctx.generators, eps, ctx.rng, options);
  } else if (ctx.config.command == "equal") {
    d = reductions::groups_equal(ctx.oracle, h, ctx.generators, eps, ctx.rng, options);
  } else {
    d = reductions::is_normal(ctx.oracle, h, ctx.generators, eps, ctx.rng, options);
  }
  add_decision(ctx, d);
  return d.answer ? kOk : kNegative;
}

int cmd_decompose(Context& ctx) {
  const auto h = require_subgroup(ctx);
  factorgroup::Options options;
  options.verify = ctx.config.verify;
  options.max_group_size = ctx.config.max_group_size;
  const auto result =
      factorgroup::quotient_structure(ctx.oracle, ctx.generators, h, ctx.config.epsilon, ctx.rng, options);
  auto& r = ctx.report;
  r.add("subgroup", join_hex(ctx.oracle, h));
  r.add("prime_powers", join_u64(result.prime_powers));
  r.add("cyclic_factors", join_u64(result.cyclic_factors));
  r.add("quotient_order", result.order());
  r.add("generator_orders", join_u64(result.generator_orders));
  r.add("modulus", result.modulus);
  r.add("samples", result.samples);
  r.add_real("failure_probability_bound", result.failure_probability_bound);
  return kOk;
}

int cmd_chain(Context& ctx) {
  const auto chain = classical::polycyclic_chain(ctx.oracle, ctx.generators, ctx.config.max_group_size);
  std::vector<std::uint64_t> orders;
  std::vector<Encoding> prefix;
  std::uint64_t order = 1;
  for (Encoding g : chain.elements) {
    const auto below = classical::as_set(classical::closure(ctx.oracle, prefix, ctx.config.max_group_size));
    orders.push_back(classical::relative_order(ctx.oracle, g, below));
    order *= orders.back();
    prefix.push_back(g);
  }
  ctx.report.add("length", chain.length());
  ctx.report.add("chain", join_hex(ctx.oracle, chain.elements));
  ctx.report.add("relative_orders", join_u64(orders));
  ctx.report.add("order", order);
  return kOk;
}

int cmd_solvable(Context& ctx) {
  const auto series = classical::derived_series(ctx.oracle, ctx.generators, ctx.config.max_group_size);
  std::vector<std::uint64_t> orders(series.orders.begin(), series.orders.end());
  ctx.report.add_bool("answer", series.solvable);
  ctx.report.add("derived_series_orders", join_u64(orders));
  return series.solvable ? kOk : kNegative;
}

int dispatch(Context& ctx) {
  const std::string& c = ctx.config.command;
  if (c == "order") return cmd_order(ctx, false);
  if (c == "superpose") return cmd_order(ctx, true);
  if (c == "member") return cmd_member(ctx);
  if (c == "subgroup" || c == "equal" || c == "normal") return cmd_relation(ctx);
  if (c == "decompose") return cmd_decompose(ctx);
  if (c == "chain") return cmd_chain(ctx);
  return cmd_solvable(ctx);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config config;
  CLI::App app{"Order, membership and structure of solvable black-box groups"};
  app.name(args.empty() ? "solvq" : args[0]);
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string generators, subgroup, element;
  app.add_option("--group", config.group_path, "group spec file (JSON)")->required();
  app.add_option("--generators", generators, "generators of G: file or comma-separated hex (default: standard)");
  app.add_option("--subgroup", subgroup, "subgroup generators: file or comma-separated hex");
  app.add_option("--element", element, "element as a hex literal");
  app.add_option("--epsilon", config.epsilon, "error bound in (0, 1)")->capture_default_str();
  app.add_option("--seed", config.seed, "random seed")->capture_default_str();
  app.add_flag("--record", config.record, "machine-readable key=value output");
  app.add_flag("--verify", config.verify, "cross-check against classical enumeration");
  app.add_option("--max-group-size", config.max_group_size, "cap on enumerated group sizes")->capture_default_str();

  const std::pair<const char*, const char*> commands[] = {
      {"order", "order of <generators>"},
      {"member", "is --element in <generators>"},
      {"subgroup", "is <subgroup> contained in <generators>"},
      {"equal", "do <subgroup> and <generators> coincide"},
      {"normal", "is <subgroup> normal in <generators>"},
      {"decompose", "abelian structure of <generators>/<subgroup>"},
      {"chain", "polycyclic chain of <generators>"},
      {"solvable", "is <generators> solvable"},
      {"superpose", "prepare the uniform superposition over <generators>"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&config, n = std::string(name)] { config.command = n; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (app.count("--generators")) config.generators = generators;
  if (app.count("--subgroup")) config.subgroup = subgroup;
  if (app.count("--element")) config.element = element;

  Report report;
  report.add("schema", kSchema);
  report.add("command", config.command);
  report.add("epsilon", format_epsilon(config.epsilon));
  report.add("seed", config.seed);
  report.add_bool("verify", config.verify);

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  std::optional<GroupOracle> oracle;
  try {
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw BadSpec("--epsilon must lie in (0, 1)");
    oracle.emplace(make_oracle(load_group_spec(config.group_path)));
    report.add("group", oracle->describe());
    report.add("encoding_length", oracle->encoding_length());
    Context ctx{config, *oracle, {}, Rng(config.seed), report};
    ctx.generators = config.generators ? parse_element_list(*oracle, *config.generators)
                                       : oracle->standard_generators();
    report.add("generators", join_hex(*oracle, ctx.generators));
    code = dispatch(ctx);
    report.add("status", code == kOk ? "ok" : "negative");
  } catch (const Error& e) {
    code = exit_code_for(e);
    report.add("status", "error");
    report.add("error", e.kind());
    report.add("message", e.what());
    err << "error: " << e.kind() << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    code = kUsage;
    report.add("status", "error");
    report.add("error", "Failure");
    report.add("message", e.what());
    err << "error: " << e.what() << '\n';
  }
  if (oracle) report.add("oracle_queries", oracle->query_count());
  report.add("exit_code", static_cast<std::uint64_t>(code));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.print(out, config.record, seconds);
  return code;
}

}  // namespace solvq::cli
