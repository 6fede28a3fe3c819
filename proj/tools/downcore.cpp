#include <charconv>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "downcore/checks.hpp"
#include "downcore/downcore.hpp"

namespace {

using namespace downcore;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitPropertyFailure = 2;
constexpr int kExitUsage = 64;
constexpr int kExitMalformed = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json point_ids(const MeasureSpace& space, const PointSet& s) {
  json out = json::array();
  for (PointIndex u : s) out.push_back(space.id(u));
  return out;
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

std::string read_all(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInstance, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_all(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInstance, path + ": " + e.what());
  }
}

/// "a:b:n" -> n equispaced values from a to b inclusive.
std::vector<double> parse_t_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1) {
    parts.push_back(text.substr(start, pos - start));
  }
  parts.push_back(text.substr(start));
  if (parts.size() != 3) throw UsageError("--t expects a:b:n, got '" + text + "'");
  double a = 0, b = 0;
  long n = 0;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("b");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::logic_error&) {
    throw UsageError("--t expects a:b:n, got '" + text + "'");
  }
  if (n < 1 || (n == 1 && a != b) || (n > 1 && !(b > a))) {
    throw UsageError("--t needs n >= 1 and a < b (or n = 1 and a = b)");
  }
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    ts[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  ts.back() = b;
  return ts;
}

Exponent parse_exponent(const std::string& text) { return Exponent::parse(text); }

oracle::Deadline deadline_from(double seconds) {
  if (seconds <= 0.0) return std::nullopt;
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
}

// Options shared by every command that reads an instance.
struct InstanceArgs {
  std::string path;
  std::string function;
  bool restrict_to_chain = false;

  void attach(CLI::App* cmd, bool with_function = true) {
    cmd->add_option("instance", path, "instance JSON file ('-' for stdin)")->required();
    cmd->add_flag("--restrict", restrict_to_chain, "drop points outside the union of the chain");
    if (with_function) cmd->add_option("--function", function, "function name when several are present");
  }
};

struct Loaded {
  Instance inst;
  CoreAtoms atoms;
};

Loaded load(const InstanceArgs& args) {
  Instance inst = parse_instance(parse_json_file(args.path), args.restrict_to_chain);
  CoreAtoms atoms = validate_core(inst.space, inst.spec);
  return Loaded{std::move(inst), std::move(atoms)};
}

// ---------------------------------------------------------------------------

int cmd_validate(const InstanceArgs& args) {
  const auto [inst, atoms] = load(args);
  json out;
  out["valid"] = true;
  out["points"] = inst.space.size();
  out["atoms"] = atoms.k();
  out["total_mass"] = inst.space.total_mass();
  out["gamma"] = gamma_set(atoms);
  out["functions"] = json::array();
  for (const auto& [name, f] : inst.functions) out["functions"].push_back(name);
  emit(out);
  return kExitOk;
}

int cmd_enrich(const InstanceArgs& args) {
  Instance inst = parse_instance(parse_json_file(args.path), args.restrict_to_chain);
  inst.spec = enrich(inst.space, inst.spec);
  emit(to_json(inst));
  return kExitOk;
}

int cmd_level(const InstanceArgs& args) {
  const auto [inst, atoms] = load(args);
  const auto res = level_function(inst.space, atoms, inst.function(args.function));
  json out;
  out["level"] = res.level.values;
  out["blocks"] = json::array();
  for (const auto& b : res.blocks) {
    PointSet pts;
    for (std::size_t j = b.first; j <= b.last; ++j) {
      const auto& in_atom = atoms.points_in_atom(j);
      pts.insert(pts.end(), in_atom.begin(), in_atom.end());
    }
    const double value = res.hull.slopes[&b - res.blocks.data()];
    out["blocks"].push_back({{"atoms", {b.first, b.last}}, {"points", point_ids(inst.space, pts)}, {"value", value}});
  }
  out["hull"] = {{"mass", res.hull.knot_abscissae}, {"value", res.hull.knot_values}};
  emit(out);
  return kExitOk;
}

int cmd_majorant(const InstanceArgs& args) {
  const auto [inst, atoms] = load(args);
  emit({{"majorant", least_core_decreasing_majorant(inst.space, atoms, inst.function(args.function)).values}});
  return kExitOk;
}

int cmd_decompose(const InstanceArgs& args, double gamma) {
  const auto [inst, atoms] = load(args);
  const auto piece = decompose_D(inst.space, atoms, absolute(inst.function(args.function)), gamma);
  json out;
  out["gamma"] = piece.gamma;
  out["a_gamma"] = piece.a_gamma;
  out["b_gamma"] = nullable(piece.b_gamma);
  out["d"] = piece.d.values;
  out["lower_set"] = point_ids(inst.space, atoms.chain_set(piece.lower_set));
  out["upper_set"] = point_ids(inst.space, atoms.chain_set(piece.upper_set));
  emit(out);
  return kExitOk;
}

int cmd_down_norm(const InstanceArgs& args, const std::string& p_text, const std::string& method,
                  double timeout) {
  const auto [inst, atoms] = load(args);
  const Exponent p = parse_exponent(p_text);
  const auto& f = inst.function(args.function);
  json out;
  out["p"] = p.to_string();
  if (method == "oracle") {
    out["method"] = "oracle";
    out["norm"] = oracle::sup_decreasing_pball(inst.space, atoms, f, p.conjugate(), deadline_from(timeout));
    emit(out);
    return kExitOk;
  }
  const auto res = down_norm_detailed(inst.space, atoms, f, p);
  out["norm"] = res.norm;
  json witness = json::object();
  if (res.chain_set) witness["chain_set"] = point_ids(inst.space, atoms.chain_set(*res.chain_set));
  if (res.level) witness["level"] = res.level->values;
  if (p.is_one()) witness["l1_norm"] = lp_norm(inst.space, f, p);
  out["witness"] = witness;
  emit(out);
  return kExitOk;
}

int cmd_tilde_norm(const InstanceArgs& args, const std::string& p_text) {
  const auto [inst, atoms] = load(args);
  const Exponent p = parse_exponent(p_text);
  const auto g = least_core_decreasing_majorant(inst.space, atoms, inst.function(args.function));
  emit({{"p", p.to_string()}, {"norm", lp_norm(inst.space, g, p)}, {"witness", {{"majorant", g.values}}}});
  return kExitOk;
}

int cmd_transfer(const InstanceArgs& args, const std::string& direction, const std::string& step_path) {
  const auto [inst, atoms] = load(args);
  const auto measure = tailored_measure(atoms);
  if (direction == "r") {
    emit(to_json(measure, r_map(inst.space, atoms, inst.function(args.function))));
    return kExitOk;
  }
  if (step_path.empty()) throw UsageError("transfer q needs --step FILE");
  const StepFunction phi = step_function_from_json(parse_json_file(step_path), measure);
  const FunctionOnU q = q_map(inst.space, atoms, phi);
  json out;
  out["points"] = inst.space.ids();
  out["values"] = q.values;
  emit(out);
  return kExitOk;
}

int cmd_kfunc(const InstanceArgs& args, const std::string& couple_text, const std::string& t_text,
              const std::string& format, const std::string& method, std::size_t grid, double timeout) {
  const auto [inst, atoms] = load(args);
  const Couple couple = parse_couple(couple_text);
  const auto ts = parse_t_grid(t_text);
  const auto& f = inst.function(args.function);

  std::vector<double> values;
  if (method == "fast") {
    values = k_curve(couple, inst.space, atoms, f, ts).values;
  } else if (method == "decomposition") {
    if (couple != Couple::L1Dinf) throw UsageError("--method decomposition applies to l1-dinf only");
    const auto gammas = decomposition_gamma_grid(inst.space, atoms, f);
    for (double t : ts) values.push_back(k_via_decomposition(inst.space, atoms, f, t, gammas));
  } else {
    values = oracle::k_exhaustive_many(inst.space, atoms, f, ts, grid, couple, deadline_from(timeout));
  }

  if (format == "json") {
    json out;
    out["couple"] = std::string(to_string(couple));
    out["method"] = method;
    if (method == "oracle") {
      std::vector<double> res;
      for (double t : ts) res.push_back(oracle::k_exhaustive_resolution(inst.space, f, t, grid));
      out["resolution"] = res;
    }
    out["t"] = ts;
    out["value"] = values;
    emit(out);
  } else {
    std::cout << "t,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::cout << format_double(ts[i]) << ',' << format_double(values[i]) << '\n';
    }
  }
  return kExitOk;
}

int cmd_level_sup(const InstanceArgs& args, const std::string& g_name, double timeout) {
  const auto [inst, atoms] = load(args);
  const auto& f = inst.function(args.function);
  const auto& g = inst.function(g_name);
  const double lp = oracle::level_defining_sup(inst.space, atoms, f, g, deadline_from(timeout));
  const auto level = level_function(inst.space, atoms, f).level;
  double pairing = 0.0;
  for (std::size_t u = 0; u < inst.space.size(); ++u) pairing += level[u] * g[u] * inst.space.weight(u);
  emit({{"method", "oracle"}, {"value", lp}, {"level_pairing", pairing}});
  return kExitOk;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DOWNCORE_SEED")) {
    const std::string text(env);
    std::uint64_t seed = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw UsageError("DOWNCORE_SEED must be an unsigned integer, got '" + text + "'");
    }
    return seed;
  }
  return 1;
}

int cmd_check(const std::string& suite, const std::optional<std::uint64_t>& seed_flag,
              std::optional<std::size_t> cases) {
  static const std::vector<std::string> suites{"transfer", "level", "norms", "kfunc", "all"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
    throw UsageError("unknown suite '" + suite + "'");
  }
  const std::uint64_t seed = resolve_seed(seed_flag);
  std::cout << "seed " << seed << " suite " << suite << '\n';
  bool all_passed = true;
  for (const auto& c : checks::criteria()) {
    if (!checks::in_suite(c, suite)) continue;
    const auto rep = checks::run(c, seed, cases);
    all_passed = all_passed && rep.passed;
    std::cout << (rep.passed ? "PASS" : "FAIL") << "  criterion " << rep.id << ": " << rep.title
              << "  cases=" << rep.cases << " worst=" << format_double(rep.worst_error)
              << " allowed=" << format_double(rep.worst_allowed) << " (" << rep.worst_detail << ")\n";
    if (!rep.passed) {
      std::cout << "  minimal failing instance (" << rep.failing_detail << "):\n"
                << rep.failing_instance->dump(2) << '\n';
    }
  }
  return all_passed ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Down spaces, level functions and K-functionals over finite ordered cores"};
  app.require_subcommand(1);

  InstanceArgs inst_args;
  double gamma = 0.0;
  std::string p_text;
  std::string method = "fast";
  std::string direction;
  std::string step_path;
  std::string couple_text;
  std::string t_text;
  std::string format = "csv";
  std::size_t grid = 32;
  double timeout = 0.0;
  std::string g_name;
  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cases;

  std::function<int()> action;

  auto* validate = app.add_subcommand("validate", "check an instance and print its atoms");
  inst_args.attach(validate, false);
  validate->callback([&] { action = [&] { return cmd_validate(inst_args); }; });

  auto* enrich_cmd = app.add_subcommand("enrich", "print the instance with its canonical chain");
  inst_args.attach(enrich_cmd, false);
  enrich_cmd->callback([&] { action = [&] { return cmd_enrich(inst_args); }; });

  auto* level = app.add_subcommand("level", "level function and its leveling blocks");
  inst_args.attach(level);
  level->callback([&] { action = [&] { return cmd_level(inst_args); }; });

  auto* majorant = app.add_subcommand("majorant", "least core decreasing majorant");
  inst_args.attach(majorant);
  majorant->callback([&] { action = [&] { return cmd_majorant(inst_args); }; });

  auto* decompose = app.add_subcommand("decompose", "the multiplier D(gamma) for |f|");
  inst_args.attach(decompose);
  decompose->add_option("--gamma", gamma, "nonnegative split level")->required();
  decompose->callback([&] { action = [&] { return cmd_decompose(inst_args, gamma); }; });

  auto add_down_norm = [&](CLI::App* parent, bool oracle_only) {
    auto* cmd = parent->add_subcommand("down-norm", "norm in the down space of Lp");
    inst_args.attach(cmd);
    cmd->add_option("--p", p_text, "exponent: number >= 1 or 'inf'")->required();
    if (!oracle_only) {
      cmd->add_option("--method", method, "fast or oracle")->check(CLI::IsMember({"fast", "oracle"}));
    }
    cmd->add_option("--timeout", timeout, "oracle deadline in seconds (0 = none)");
    cmd->callback([&, oracle_only] {
      if (oracle_only) method = "oracle";
      action = [&] { return cmd_down_norm(inst_args, p_text, method, timeout); };
    });
  };
  add_down_norm(&app, false);

  auto* tilde = app.add_subcommand("tilde-norm", "Lp norm of the least core decreasing majorant");
  inst_args.attach(tilde);
  tilde->add_option("--p", p_text, "exponent: number >= 1 or 'inf'")->required();
  tilde->callback([&] { action = [&] { return cmd_tilde_norm(inst_args, p_text); }; });

  auto* transfer = app.add_subcommand("transfer", "R (average over atoms) or Q (extend from atoms)");
  transfer->add_option("direction", direction, "r or q")->required()->check(CLI::IsMember({"r", "q"}));
  inst_args.attach(transfer);
  transfer->add_option("--step", step_path, "step function JSON for q");
  transfer->callback([&] { action = [&] { return cmd_transfer(inst_args, direction, step_path); }; });

  auto add_kfunc = [&](CLI::App* parent, bool oracle_only) {
    auto* cmd = parent->add_subcommand("kfunc", "K-functional curve over a t grid");
    inst_args.attach(cmd);
    cmd->add_option("--couple", couple_text, "l1-linf, l1-dinf or tl1-linf")
        ->required()
        ->check(CLI::IsMember({"l1-linf", "l1-dinf", "tl1-linf"}));
    cmd->add_option("--t", t_text, "t grid a:b:n")->required();
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (!oracle_only) {
      cmd->add_option("--method", method, "fast, decomposition or oracle")
          ->check(CLI::IsMember({"fast", "decomposition", "oracle"}));
    }
    cmd->add_option("--grid", grid, "oracle grid steps per point")->check(CLI::PositiveNumber);
    cmd->add_option("--timeout", timeout, "oracle deadline in seconds (0 = none)");
    cmd->callback([&, oracle_only] {
      if (oracle_only) method = "oracle";
      action = [&] { return cmd_kfunc(inst_args, couple_text, t_text, format, method, grid, timeout); };
    });
  };
  add_kfunc(&app, false);

  auto* oracle_cmd = app.add_subcommand("oracle", "slow reference computations");
  oracle_cmd->require_subcommand(1);
  add_down_norm(oracle_cmd, true);
  add_kfunc(oracle_cmd, true);
  auto* level_sup = oracle_cmd->add_subcommand("level-sup", "LP supremum defining the level function");
  inst_args.attach(level_sup);
  level_sup->add_option("--g", g_name, "name of a core decreasing function in the instance")->required();
  level_sup->add_option("--timeout", timeout, "deadline in seconds (0 = none)");
  level_sup->callback([&] { action = [&] { return cmd_level_sup(inst_args, g_name, timeout); }; });

  auto* check = app.add_subcommand("check", "run the property suites");
  check->add_option("--suite", suite, "transfer, level, norms, kfunc or all");
  check->add_option("--seed", seed, "64-bit seed (default: DOWNCORE_SEED or 1)");
  check->add_option("--cases", cases, "cases per criterion")->check(CLI::PositiveNumber);
  check->callback([&] { action = [&] { return cmd_check(suite, seed, cases); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::MalformedInstance ? kExitMalformed : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
