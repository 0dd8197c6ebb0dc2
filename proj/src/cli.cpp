#include "harmlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "harmlab/builders.hpp"
#include "harmlab/harmonic.hpp"
#include "harmlab/spectral.hpp"
#include "harmlab/transport.hpp"
#include "harmlab/walk.hpp"

namespace harmlab::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_count(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidConfig, std::string("bad value for ") + what + ": '" + text + "'");
  }
}

bool needs_quotes(const std::string& s) { return s.find_first_of(",\"\n\r") != std::string::npos; }

std::string quote(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Runs fn(i) for i < n on up to `jobs` threads. Results must be stored by
// index; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  std::vector<std::thread> workers;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  for (std::size_t t = 0; t < count; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> guard(lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

struct Common {
  std::string out;
  std::string config;
  bool dry_run = false;
  std::uint64_t seed = 1;
  int jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output file (stdout when omitted)");
  app->add_option("--config", c.config, "JSON file mirroring the flags");
  app->add_flag("--dry-run", c.dry_run, "Validate the configuration and exit");
  app->add_option("--seed", c.seed, "Seed for randomized starts")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads for independent parameter points")->capture_default_str()->check(
      CLI::PositiveNumber);
}

// A graph or a Cayley ball. Balls own their graph.
struct Target {
  std::optional<CayleyBall> ball;
  std::optional<OrientedGraph> graph_storage;
  const OrientedGraph& graph() const { return ball ? ball->graph() : *graph_storage; }
};

OrientedGraph load_graph(const std::string& spec) {
  if (is_builtin_graph_spec(spec)) return parse_graph_spec(spec);
  return load_graph_json(spec);
}

CayleyBall load_ball(const std::string& group, int radius, const Budgets& budgets) {
  if (radius < 0) throw Error(ErrorKind::InvalidConfig, "radius must be nonnegative");
  return CayleyBall::build(build_group(parse_group_spec(group)), radius, budgets.ball_cap);
}

// Identity ("e"), a vertex id, or a word in the generators.
VertexId resolve_vertex(const CayleyBall& ball, const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const auto v = parse_count(t, "vertex");
    if (v >= static_cast<std::uint64_t>(ball.size())) throw Error(ErrorKind::InvalidConfig, "vertex out of range");
    return static_cast<VertexId>(v);
  }
  const auto word = parse_word(ball.group(), t);
  VertexId v = ball.identity_vertex();
  for (int s : word) {
    const auto next = ball.step(v, s);
    if (!next) throw Error(ErrorKind::PathExitsBall, "word '" + t + "' leaves the ball");
    v = *next;
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto a = static_cast<int>(parse_count(trim(text.substr(0, dots)), what));
    const auto b = static_cast<int>(parse_count(trim(text.substr(dots + 2)), what));
    if (b < a) throw Error(ErrorKind::InvalidConfig, std::string("empty range for ") + what);
    for (int i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_count(trim(item), what)));
  if (out.empty()) throw Error(ErrorKind::InvalidConfig, std::string("no values for ") + what);
  return out;
}

VertexField read_mass_csv(const std::string& path, VertexId n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  VertexField f(static_cast<std::size_t>(n));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::InvalidConfig, "mass rows are 'vertex,mass': " + line);
    const std::string vs = trim(line.substr(0, comma));
    const std::string ms = trim(line.substr(comma + 1));
    if (first && !vs.empty() && !std::isdigit(static_cast<unsigned char>(vs[0]))) {
      first = false;  // header
      continue;
    }
    first = false;
    const auto v = parse_count(vs, "vertex");
    if (v >= static_cast<std::uint64_t>(n)) throw Error(ErrorKind::InvalidConfig, "vertex out of range in " + path);
    double m = 0.0;
    try {
      m = std::stod(ms);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "bad mass '" + ms + "' in " + path);
    }
    f[static_cast<std::size_t>(v)] += m;
  }
  return f;
}

// Inline JSON array, or a file holding one (or {"vertices": [...]}).
std::vector<VertexId> read_vertex_set(const std::string& path) {
  nlohmann::json j;
  try {
    if (trim(path).rfind('[', 0) == 0) {
      j = nlohmann::json::parse(path);
    } else {
      std::ifstream in(path);
      if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
      in >> j;
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("set file is not JSON: ") + e.what());
  }
  const nlohmann::json& arr = j.is_object() ? j.at("vertices") : j;
  if (!arr.is_array()) throw Error(ErrorKind::InvalidConfig, "set file must hold an array of vertex ids");
  std::vector<VertexId> out;
  for (const auto& v : arr) out.push_back(v.get<VertexId>());
  return out;
}

// The options of one leaf command, as they were resolved.
nlohmann::json effective_config(const CLI::App* leaf, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out" || name == "dry-run") continue;
    if (opt->count() > 0) {
      if (opt->get_type_size() == 0) {
        j[name] = true;
      } else {
        std::string joined;
        for (const auto& r : opt->reduced_results()) joined += (joined.empty() ? "" : ",") + r;
        j[name] = joined;
      }
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

// Expands --config into flags placed before the command-line flags so that
// explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) {
    std::vector<std::string> out{args.empty() ? "harmlab" : args[0]};
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
  std::vector<std::string> words;
  std::size_t k = 0;
  while (k < rest.size() && rest[k].rfind("-", 0) != 0) words.push_back(rest[k++]);
  if (words.empty() && j.contains("command")) {
    std::stringstream ss(j["command"].get<std::string>());
    std::string w;
    while (ss >> w) words.push_back(w);
  }
  std::vector<std::string> out{args[0]};
  out.insert(out.end(), words.begin(), words.end());
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back("--" + key);
      continue;
    }
    out.push_back("--" + key);
    if (value.is_string()) {
      out.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      out.push_back(joined);
    } else {
      out.push_back(value.dump());
    }
  }
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(k), rest.end());
  return out;
}

std::string provenance(const nlohmann::json& config) {
  return std::string("harmlab ") + kVersion + " config=" + config_hash(config);
}

nlohmann::json with_provenance(nlohmann::json doc, const nlohmann::json& config) {
  doc["provenance"] = {{"tool", "harmlab"}, {"version", kVersion}, {"config", config_hash(config)}};
  return doc;
}

}  // namespace

Budgets parse_budgets(std::string_view text, Budgets base) {
  const std::string s = trim(text);
  if (s.empty()) return base;
  if (s.find('=') == std::string::npos) {
    base.ball_cap = parse_count(s, "ball_cap");
    return base;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidConfig, "budget entries are key=value: " + item);
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key == "ball_cap") base.ball_cap = parse_count(value, "ball_cap");
    else if (key == "enum_budget") base.enum_budget = parse_count(value, "enum_budget");
    else if (key == "dense_cap") base.dense_cap = parse_count(value, "dense_cap");
    else throw Error(ErrorKind::InvalidConfig, "unknown budget '" + key + "'");
  }
  return base;
}

Budgets budgets_from_env(Budgets base) {
  const char* env = std::getenv("HARMLAB_BUDGET");
  return env ? parse_budgets(env, base) : base;
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&cell)) return quote(*s);
  const double d = std::get<double>(cell);
  if (std::isnan(d)) throw Error(ErrorKind::NumericalFailure, "NaN in output");
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", d == 0.0 ? 0.0 : d);
  return buf;
}

std::string to_csv(const Table& table, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + quote(table.header[i]);
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw Error(ErrorKind::InvalidArgument, "row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

void emit_csv(const Table& table, const std::string& path, const std::string& comment, std::ostream& fallback) {
  const std::string text = to_csv(table, comment);
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorKind::IoError, "cannot write " + path);
}

void emit_json(const nlohmann::json& doc, const std::string& path, std::ostream& fallback) {
  std::string text;
  try {
    text = doc.dump(2) + "\n";
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::NumericalFailure, e.what());
  }
  // nlohmann writes non-finite numbers as null; treat that as a failure only
  // for NaN, which the report types never produce on purpose.
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorKind::IoError, "cannot write " + path);
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BallTooLarge:
    case ErrorKind::EnumerationBudgetExceeded:
    case ErrorKind::DenseBudgetExceeded:
    case ErrorKind::GraphTooLargeForExact:
      return 3;
    case ErrorKind::NumericalFailure:
    case ErrorKind::EigensolveFailure:
    case ErrorKind::NonConvergence:
    case ErrorKind::SingularSystem:
      return 4;
    default:
      return 2;
  }
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  }

  CLI::App app{"Numerical experiments on harmonic functions, transport and isoperimetry on graphs", "harmlab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Budgets budgets;

  // spectral
  Common c_spec;
  std::string spec_graph;
  std::vector<double> spec_p{1.0, 1.5, 2.0, 3.0, 4.0};
  int exact_limit = 24, frontier_limit = 14, starts = 64;
  double slack = 1.10;
  auto* spectral = app.add_subcommand("spectral", "Gap and conductance chain on a finite regular graph");
  spectral->add_option("--graph", spec_graph, "Graph spec or JSON file")->required();
  spectral->add_option("--p", spec_p, "Exponents")->delimiter(',')->capture_default_str();
  spectral->add_option("--exact-limit", exact_limit, "Subset enumeration up to this many vertices")->capture_default_str();
  spectral->add_option("--frontier-limit", frontier_limit, "Frontier width for the exact cut DP")->capture_default_str();
  spectral->add_option("--starts", starts, "Starts for nonlinear estimates")->capture_default_str();
  spectral->add_option("--slack", slack, "Slack factor for estimated inequalities")->capture_default_str();
  add_common(spectral, c_spec);

  // walk
  auto* walk = app.add_subcommand("walk", "Random walks on Cayley balls");
  walk->require_subcommand(1);
  Common c_wp;
  std::string wp_group = "zd:2";
  int wp_radius = -1, wp_steps = 100;
  double wp_laziness = 0.5;
  auto* wprofile = walk->add_subcommand("profile", "Entropy, speed and gradient profile of P^n");
  wprofile->add_option("--group", wp_group, "Group spec")->capture_default_str();
  wprofile->add_option("--radius", wp_radius, "Ball radius (default steps + 1)");
  wprofile->add_option("--steps", wp_steps, "Number of steps")->capture_default_str();
  wprofile->add_option("--laziness", wp_laziness, "Holding probability")->capture_default_str();
  add_common(wprofile, c_wp);

  Common c_we;
  std::string we_group = "zd:2", we_region = "ball:10", we_from = "e";
  std::vector<std::string> we_to;
  auto* wexit = walk->add_subcommand("exit", "Exit distributions of a ball around the identity");
  wexit->add_option("--group", we_group, "Group spec")->capture_default_str();
  wexit->add_option("--region", we_region, "Region, ball:r")->capture_default_str();
  wexit->add_option("--from", we_from, "Start vertex (id, e or word)")->capture_default_str();
  wexit->add_option("--to", we_to, "Further start vertices")->delimiter(',');
  add_common(wexit, c_we);

  // transport
  auto* transport = app.add_subcommand("transport", "Transport patterns");
  transport->require_subcommand(1);
  Common c_tw;
  std::string tw_graph, tw_src, tw_dst;
  auto* twass = transport->add_subcommand("wasserstein", "l1-optimal transport between two measures");
  twass->add_option("--graph", tw_graph, "Graph spec or JSON file")->required();
  twass->add_option("--src", tw_src, "Source masses, CSV vertex,mass")->required();
  twass->add_option("--dst", tw_dst, "Target masses, CSV vertex,mass")->required();
  add_common(twass, c_tw);

  Common c_tc;
  std::string tc_group = "zd:2", tc_levels = "2,4,6,8", tc_from = "e", tc_to = "s1";
  double tc_p = 2.0;
  bool tc_crosscheck = false;
  auto* tchain = transport->add_subcommand("chain", "Exit-transport chain between adjacent vertices");
  tchain->add_option("--group", tc_group, "Group spec")->capture_default_str();
  tchain->add_option("--p", tc_p, "Exponent for the reported norm")->capture_default_str();
  tchain->add_option("--levels", tc_levels, "Ball radii, list or a..b")->capture_default_str();
  tchain->add_option("--from", tc_from, "Vertex v")->capture_default_str();
  tchain->add_option("--to", tc_to, "Neighbour w")->capture_default_str();
  tchain->add_flag("--crosscheck", tc_crosscheck, "Rebuild chains by summing random steps");
  add_common(tchain, c_tc);

  // iso
  auto* iso = app.add_subcommand("iso", "Isoperimetric profiles");
  iso->require_subcommand(1);
  Common c_ip;
  std::string ip_graph, ip_group;
  int ip_radius = -1, ip_max = 12;
  std::uint64_t ip_budget = 0;
  auto* iprofile = iso->add_subcommand("profile", "Minimal boundary ratio per size over connected sets");
  iprofile->add_option("--graph", ip_graph, "Graph spec or JSON file");
  iprofile->add_option("--group", ip_group, "Group spec (vertex-transitive enumeration)");
  iprofile->add_option("--radius", ip_radius, "Ball radius (default max-size + 2)");
  iprofile->add_option("--max-size", ip_max, "Largest set size")->capture_default_str();
  iprofile->add_option("--budget", ip_budget, "Enumeration budget (sets)");
  add_common(iprofile, c_ip);

  Common c_ir;
  std::string ir_graph, ir_group, ir_set;
  int ir_radius = 10;
  double ir_K = 1.0, ir_k = 1.0;
  auto* iradial = iso->add_subcommand("radial", "Radial isoperimetric inequality for one set");
  iradial->add_option("--graph", ir_graph, "Graph spec or JSON file");
  iradial->add_option("--group", ir_group, "Group spec");
  iradial->add_option("--radius", ir_radius, "Ball radius for --group")->capture_default_str();
  iradial->add_option("--set", ir_set, "JSON array of vertex ids, or a file holding one")->required();
  iradial->add_option("--K", ir_K, "Constant K")->capture_default_str();
  iradial->add_option("--k", ir_k, "Exponent k")->capture_default_str();
  add_common(iradial, c_ir);

  // window
  auto* window = app.add_subcommand("window", "Finite-window cut and cycle spaces");
  window->require_subcommand(1);
  Common c_ws;
  std::string ws_group = "zd:2", ws_label = "s1";
  int ws_square = 5, ws_radius = -1;
  auto* wstats = window->add_subcommand("stats", "Projection experiment on a box window");
  wstats->add_option("--group", ws_group, "Group spec (free abelian)")->capture_default_str();
  wstats->add_option("--square", ws_square, "Box side")->capture_default_str();
  wstats->add_option("--label", ws_label, "Generator name")->capture_default_str();
  wstats->add_option("--radius", ws_radius, "Ball radius (default dim * side + 2)");
  add_common(wstats, c_ws);

  // harmonic
  auto* harmonic = app.add_subcommand("harmonic", "Harmonic-function diagnostics");
  harmonic->require_subcommand(1);
  Common c_hp;
  std::string hp_group = "zd:2", hp_radii = "2..20", hp_from = "e", hp_to = "s1";
  auto* hprobe = harmonic->add_subcommand("probe", "l1 distance of exit distributions of two neighbours");
  hprobe->add_option("--group", hp_group, "Group spec")->capture_default_str();
  hprobe->add_option("--radii", hp_radii, "Radii, list or a..b")->capture_default_str();
  hprobe->add_option("--from", hp_from, "Vertex v")->capture_default_str();
  hprobe->add_option("--to", hp_to, "Vertex w")->capture_default_str();
  add_common(hprobe, c_hp);

  Common c_hd;
  std::string hd_group = "zd:2";
  int hd_K = 2, hd_n = 10;
  auto* hdiv = harmonic->add_subcommand("divergence", "Divergence profile of annuli");
  hdiv->add_option("--group", hd_group, "Group spec")->capture_default_str();
  hdiv->add_option("--K", hd_K, "Annulus factor")->capture_default_str();
  hdiv->add_option("--n", hd_n, "Largest inner radius")->capture_default_str();
  add_common(hdiv, c_hd);

  Common c_hw;
  std::string hw_group = "zd:2", hw_kind = "c0", hw_n = "0,5,10";
  auto* hwit = harmonic->add_subcommand("witness", "Almost-invariant witnesses for the Laplacian");
  hwit->add_option("--group", hw_group, "Group spec")->capture_default_str();
  hwit->add_option("--kind", hw_kind, "c0 or l1")->capture_default_str()->check(CLI::IsMember({"c0", "l1"}));
  hwit->add_option("--n", hw_n, "Values of n, list or a..b")->capture_default_str();
  add_common(hwit, c_hw);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  }

  // The selected leaf and its dotted name.
  CLI::App* leaf = &app;
  std::string command;
  while (!leaf->get_subcommands().empty()) {
    leaf = leaf->get_subcommands().front();
    command += (command.empty() ? "" : " ") + leaf->get_name();
  }
  const nlohmann::json config = effective_config(leaf, command);
  const std::string prov = provenance(config);

  try {
    budgets = budgets_from_env(budgets);

    if (leaf == spectral) {
      const OrientedGraph g = load_graph(spec_graph);
      for (double p : spec_p)
        if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "exponents must be at least 1");
      if (c_spec.dry_run) return emit_json(config, "", out), 0;
      GapOptions opts;
      opts.cheeger.exact_limit = exact_limit;
      opts.cheeger.frontier_limit = frontier_limit;
      opts.iteration.starts = starts;
      opts.iteration.seed = c_spec.seed;
      opts.slack = slack;
      const GapReport report = verify_gap_chain(g, spec_p, opts);
      emit_json(with_provenance(to_json(report), config), c_spec.out, out);
      return 0;
    }

    if (leaf == wprofile) {
      const int radius = wp_radius >= 0 ? wp_radius : wp_steps + 1;
      if (wp_steps < 0) throw Error(ErrorKind::InvalidConfig, "steps must be nonnegative");
      parse_group_spec(wp_group);
      if (c_wp.dry_run) return emit_json(config, "", out), 0;
      const CayleyBall ball = load_ball(wp_group, radius, budgets);
      Table t{{"n", "H0", "H1", "H2", "Hinf", "speed", "grad_l1", "return_prob"}, {}};
      for (const auto& r : entropy_profile(ball, wp_steps, wp_laziness))
        t.rows.push_back({std::int64_t{r.n}, r.h0, r.h1, r.h2, r.hinf, r.speed, r.gradient_l1, r.return_probability});
      emit_csv(t, c_wp.out, prov, out);
      return 0;
    }

    if (leaf == wexit) {
      if (we_region.rfind("ball:", 0) != 0) throw Error(ErrorKind::InvalidConfig, "region must be ball:r");
      const int r = static_cast<int>(parse_count(we_region.substr(5), "region radius"));
      parse_group_spec(we_group);
      if (c_we.dry_run) return emit_json(config, "", out), 0;
      const CayleyBall ball = load_ball(we_group, r + 1, budgets);
      const OrientedGraph& g = ball.graph();
      std::vector<std::string> names{we_from};
      names.insert(names.end(), we_to.begin(), we_to.end());
      std::vector<VertexId> origins;
      for (const auto& s : names) origins.push_back(resolve_vertex(ball, s));
      const SubsetView region = harmlab::ball(g, ball.identity_vertex(), r);
      const ExitSolver solver(g, region);
      std::vector<ExitDistribution> exits(origins.size());
      parallel_for(origins.size(), c_we.jobs, [&](std::size_t i) { exits[i] = solver.exit(origins[i]); });
      Table t{{"origin", "vertex", "element", "word_length", "probability"}, {}};
      for (std::size_t i = 0; i < origins.size(); ++i)
        for (VertexId y : region.outer_boundary())
          t.rows.push_back({names[i], std::int64_t{y}, ball.group().format(ball.element(y)),
                            std::int64_t{ball.word_length(y)}, exits[i].distribution[y]});
      emit_csv(t, c_we.out, prov, out);
      return 0;
    }

    if (leaf == twass) {
      const OrientedGraph g = load_graph(tw_graph);
      const VertexField src = read_mass_csv(tw_src, g.num_vertices());
      const VertexField dst = read_mass_csv(tw_dst, g.num_vertices());
      if (c_tw.dry_run) return emit_json(config, "", out), 0;
      const WassersteinResult w = wasserstein1(g, src, dst);
      nlohmann::json summary = {{"cost", w.cost},
                                {"dual_value", w.dual_value},
                                {"certified_optimal", w.certified_optimal},
                                {"residual", w.pattern.residual},
                                {"augmentations", w.augmentations}};
      if (!c_tw.out.empty()) {
        Table t{{"edge", "tail", "head", "flow"}, {}};
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
          const double f = w.pattern.tau[static_cast<std::size_t>(e)];
          if (f != 0.0) t.rows.push_back({std::int64_t{e}, std::int64_t{g.edge(e).tail}, std::int64_t{g.edge(e).head}, f});
        }
        emit_csv(t, c_tw.out, prov, out);
      }
      emit_json(with_provenance(summary, config), "", out);
      return 0;
    }

    if (leaf == tchain) {
      const auto levels = parse_int_list(tc_levels, "levels");
      if (!(tc_p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "p must be at least 1");
      parse_group_spec(tc_group);
      if (c_tc.dry_run) return emit_json(config, "", out), 0;
      const int radius = *std::max_element(levels.begin(), levels.end()) + 1;
      const CayleyBall ball = load_ball(tc_group, radius, budgets);
      const OrientedGraph& g = ball.graph();
      const VertexId v = resolve_vertex(ball, tc_from);
      const VertexId w = resolve_vertex(ball, tc_to);
      std::vector<ChainLevel> rows(levels.size());
      parallel_for(levels.size(), c_tc.jobs, [&](std::size_t i) {
        const std::vector<SubsetView> region{harmlab::ball(g, ball.identity_vertex(), levels[i])};
        rows[i] = exit_transport_chain(g, v, w, region, {levels[i]}, tc_p, tc_crosscheck).front();
      });
      Table t{{"level", "region_size", "tau_p", "tau_inf", "cancelled_p", "cancelled_inf", "exit_diff_l1",
               "exit_diff_inf", "residual", "sup_bound_holds"},
              {}};
      if (tc_crosscheck) t.header.push_back("crosscheck");
      for (const auto& r : rows) {
        std::vector<Cell> row{std::int64_t{r.level}, static_cast<std::int64_t>(r.region_size), r.tau_p, r.tau_inf,
                              r.cancelled_p, r.cancelled_inf, r.exit_diff_l1, r.exit_diff_inf, r.residual,
                              r.sup_bound_holds};
        if (tc_crosscheck) row.push_back(r.chain_crosscheck);
        t.rows.push_back(std::move(row));
      }
      emit_csv(t, c_tc.out, prov, out);
      return 0;
    }

    if (leaf == iprofile) {
      if (ip_graph.empty() == ip_group.empty()) throw Error(ErrorKind::InvalidConfig, "give exactly one of --graph, --group");
      if (!ip_group.empty()) parse_group_spec(ip_group);
      if (c_ip.dry_run) return emit_json(config, "", out), 0;
      ProfileOptions po;
      po.budget = ip_budget ? ip_budget : budgets.enum_budget;
      Target target;
      IsoProfile prof;
      if (!ip_group.empty()) {
        target.ball.emplace(load_ball(ip_group, ip_radius >= 0 ? ip_radius : ip_max + 2, budgets));
        prof = iso_profile(*target.ball, ip_max, po);
      } else {
        target.graph_storage.emplace(load_graph(ip_graph));
        prof = iso_profile(*target.graph_storage, ip_max, po);
      }
      prof.require_complete();
      Table t{{"size", "min_boundary", "ratio", "envelope", "witness"}, {}};
      for (int s = 1; s <= prof.max_size; ++s) {
        const auto& wit = prof.witness[static_cast<std::size_t>(s)];
        if (wit.empty()) continue;
        std::string ids;
        for (VertexId x : wit) ids += (ids.empty() ? "" : " ") + std::to_string(x);
        t.rows.push_back({std::int64_t{s}, std::int64_t{prof.min_boundary[static_cast<std::size_t>(s)]}, prof.at(s),
                          prof.envelope_at(s), ids});
      }
      emit_csv(t, c_ip.out, prov + (prof.truncated_ball ? " truncated_ball=true" : ""), out);
      return 0;
    }

    if (leaf == iradial) {
      if (ir_graph.empty() == ir_group.empty()) throw Error(ErrorKind::InvalidConfig, "give exactly one of --graph, --group");
      const auto members = read_vertex_set(ir_set);
      if (c_ir.dry_run) return emit_json(config, "", out), 0;
      Target target;
      if (!ir_group.empty()) target.ball.emplace(load_ball(ir_group, ir_radius, budgets));
      else target.graph_storage.emplace(load_graph(ir_graph));
      const OrientedGraph& g = target.graph();
      for (VertexId x : members)
        if (x < 0 || x >= g.num_vertices()) throw Error(ErrorKind::InvalidConfig, "set vertex out of range");
      const SubsetView a(g, members);
      const RadialCheck rc = radial_iso_check(g, a, ir_K, ir_k);
      nlohmann::json doc = {{"boundary", rc.boundary},   {"volume", rc.volume},
                            {"inradius", rc.inradius},   {"diameter", rc.diameter},
                            {"lhs", rc.lhs},             {"rhs", rc.rhs},
                            {"holds", rc.holds},         {"diameter_lhs", rc.diameter_lhs},
                            {"diameter_holds", rc.diameter_holds},
                            {"mean_boundary_distance", mean_boundary_distance(g, a)},
                            {"K", ir_K},                 {"k", ir_k}};
      emit_json(with_provenance(doc, config), c_ir.out, out);
      return 0;
    }

    if (leaf == wstats) {
      const GroupSpec gs = parse_group_spec(ws_group);
      if (ws_square < 1) throw Error(ErrorKind::InvalidConfig, "square side must be positive");
      if (c_ws.dry_run) return emit_json(config, "", out), 0;
      const int radius = ws_radius >= 0 ? ws_radius : gs.rank * ws_square + 2;
      const CayleyBall ball = load_ball(ws_group, radius, budgets);
      const int label = ball.group().generator_index(ws_label);
      const auto f = box_window(ball, ws_square);
      const WindowSpaces spaces = build_window(ball.graph(), f);
      const WindowStats st = window_projection_stats(ball, f, label, budgets.dense_cap);
      nlohmann::json doc = {{"window_size", st.window_size},
                            {"boundary_size", st.boundary_size},
                            {"edge_count", st.edge_count},
                            {"cut_dimension", spaces.cut_dimension},
                            {"cycle_dimension", spaces.cycle_dimension},
                            {"expected_cycle_dimension", spaces.expected_cycle_dimension},
                            {"rank", st.rank},
                            {"codimension", st.codimension},
                            {"expected_codimension", st.expected_codimension},
                            {"labelled_dimension", st.labelled_dimension},
                            {"max_diagonal", st.max_diagonal},
                            {"bound", st.bound},
                            {"bound_holds", st.bound_holds},
                            {"trace", st.trace},
                            {"trace_defect", st.trace_defect},
                            {"proportion_below", st.proportion_below},
                            {"proportion_bound", st.proportion_bound},
                            {"proportion_holds", st.proportion_holds},
                            {"orthogonality_defect", st.orthogonality_defect},
                            {"diagonals", st.diagonals},
                            {"label", ws_label}};
      emit_json(with_provenance(doc, config), c_ws.out, out);
      return 0;
    }

    if (leaf == hprobe) {
      const auto radii = parse_int_list(hp_radii, "radii");
      parse_group_spec(hp_group);
      if (c_hp.dry_run) return emit_json(config, "", out), 0;
      const CayleyBall ball = load_ball(hp_group, *std::max_element(radii.begin(), radii.end()) + 1, budgets);
      const VertexId v = resolve_vertex(ball, hp_from);
      const VertexId w = resolve_vertex(ball, hp_to);
      std::vector<double> values(radii.size());
      parallel_for(radii.size(), c_hp.jobs, [&](std::size_t i) {
        const int r = radii[i];
        values[i] = liouville_probe(ball, v, w, std::span<const int>(&r, 1)).values.front();
      });
      Table t{{"radius", "l1_difference"}, {}};
      for (std::size_t i = 0; i < radii.size(); ++i) t.rows.push_back({std::int64_t{radii[i]}, values[i]});
      emit_csv(t, c_hp.out, prov, out);
      return 0;
    }

    if (leaf == hdiv) {
      if (hd_K < 2 || hd_n < 1) throw Error(ErrorKind::InvalidConfig, "need K >= 2 and n >= 1");
      parse_group_spec(hd_group);
      if (c_hd.dry_run) return emit_json(config, "", out), 0;
      const CayleyBall ball = load_ball(hd_group, hd_K * hd_n + 2, budgets);
      Table t{{"n", "annulus_size", "outer_size", "components", "divergence", "unreachable_pairs", "max_component_diameter"},
              {}};
      for (const auto& r : divergence_profile(ball.graph(), ball.identity_vertex(), hd_K, hd_n)) {
        const std::int64_t diam = r.component_diameters.empty()
                                      ? -1
                                      : *std::max_element(r.component_diameters.begin(), r.component_diameters.end());
        t.rows.push_back({std::int64_t{r.n}, static_cast<std::int64_t>(r.annulus_size),
                          static_cast<std::int64_t>(r.outer_size), std::int64_t{r.components},
                          std::int64_t{r.divergence}, r.unreachable_pairs, diam});
      }
      emit_csv(t, c_hd.out, prov + " approximated=true", out);
      return 0;
    }

    if (leaf == hwit) {
      const auto ns = parse_int_list(hw_n, "n");
      parse_group_spec(hw_group);
      if (c_hw.dry_run) return emit_json(config, "", out), 0;
      const int radius = *std::max_element(ns.begin(), ns.end()) + 2;
      const CayleyBall ball = load_ball(hw_group, radius, budgets);
      const WitnessKind kind = hw_kind == "c0" ? WitnessKind::C0 : WitnessKind::L1;
      std::vector<LaplacianWitness> rows(ns.size());
      parallel_for(ns.size(), c_hw.jobs,
                   [&](std::size_t i) { rows[i] = laplacian_witness(ball.graph(), ball.identity_vertex(), kind, ns[i]); });
      Table t{{"n", "f_norm", "laplacian_norm", "gradient_sup", "ratio", "bound", "holds"}, {}};
      for (const auto& r : rows)
        t.rows.push_back({std::int64_t{r.n}, r.f_norm, r.laplacian_norm, r.gradient_sup, r.ratio, r.bound, r.holds});
      emit_csv(t, c_hw.out, prov, out);
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "InvalidConfig: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    err << "BallTooLarge: out of memory\n";
    return 3;
  }
  err << app.help();
  return 2;
}

}  // namespace harmlab::cli
