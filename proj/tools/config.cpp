#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "tangle/io.hpp"

namespace tangle::cli {

namespace {

struct Entry {
  std::string value;
  std::string where;  // "file:line" or "flag"
};

using KV = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void parse_file_text(const std::string& text, const std::string& name, KV& kv,
                     std::string* command_key) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError(name + ":" + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw ParseError(name + ":" + std::to_string(lineno) + ": empty value for '" +
                       key + "'");
    const std::string where = name + ":" + std::to_string(lineno);
    if (key == "command") {
      if (command_key) *command_key = value;
      continue;
    }
    if (kv.count(key))
      throw ParseError(where + ": duplicate key '" + key + "' (first at " +
                       kv[key].where + ")");
    kv[key] = {value, where};
  }
}

double to_double(const std::string& key, const Entry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ParseError(e.where + ": '" + key + "' expects a number, got '" + e.value + "'");
  }
}

long to_long(const std::string& key, const Entry& e) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ParseError(e.where + ": '" + key + "' expects an integer, got '" + e.value + "'");
  }
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
  std::vector<double> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw ParseError(e.where + ": '" + key + "' expects comma-separated numbers");
    }
  }
  if (out.empty()) throw ParseError(e.where + ": '" + key + "' is an empty list");
  return out;
}

// "i,j:c; i,j:c" -> Poly2
Poly2 to_poly(const std::string& key, const Entry& e) {
  Poly2 p;
  std::istringstream in(e.value);
  std::string term;
  while (std::getline(in, term, ';')) {
    term = trim(term);
    if (term.empty()) continue;
    const auto colon = term.find(':');
    if (colon == std::string::npos)
      throw ParseError(e.where + ": '" + key + "' terms are 'i,j:coeff'");
    const auto comma = term.find(',');
    if (comma == std::string::npos || comma > colon)
      throw ParseError(e.where + ": '" + key + "' terms are 'i,j:coeff'");
    try {
      const int i = std::stoi(trim(term.substr(0, comma)));
      const int j = std::stoi(trim(term.substr(comma + 1, colon - comma - 1)));
      const double c = std::stod(trim(term.substr(colon + 1)));
      if (i < 0 || j < 0) throw std::invalid_argument("");
      p.add(i, j, c);
    } catch (const ParseError&) {
      throw;
    } catch (...) {
      throw ParseError(e.where + ": '" + key + "' terms are 'i,j:coeff'");
    }
  }
  return p;
}

ForcingProfile profile_from(const KV& kv, const char* alias_key, const char* sin_key,
                            const char* cos_key) {
  if (auto it = kv.find(alias_key); it != kv.end()) {
    const std::string& v = it->second.value;
    if (v == "sin") return ForcingProfile::pure_sin();
    if (v == "sin+sin3") return ForcingProfile::sin_plus_sin3();
    throw ParseError(it->second.where + ": unknown profile alias '" + v +
                     "' (known: sin, sin+sin3)");
  }
  std::vector<double> s, c;
  if (auto it = kv.find(sin_key); it != kv.end()) s = to_list(sin_key, it->second);
  if (auto it = kv.find(cos_key); it != kv.end()) c = to_list(cos_key, it->second);
  if (s.empty() && c.empty()) return ForcingProfile::pure_sin();
  return ForcingProfile(s, c);
}

const std::set<std::string> kCommonKeys = {"threads", "seed", "out"};
const std::set<std::string> kMapKeys = {"a",  "b",       "c",       "d",
                                        "gamma", "k",    "escape_floor",
                                        "phi", "phi_sin", "phi_cos"};
const std::set<std::string> kOdeKeys = {
    "system", "alpha", "beta",  "omega",   "rho",     "mu",       "epsilon",
    "q",      "q_sin", "q_cos", "f_poly",  "g_poly",  "a_poly",   "b_poly",
    "shoot_lo", "shoot_hi", "shoot_tol"};

std::set<std::string> allowed_keys(Command c) {
  std::set<std::string> keys = kCommonKeys;
  auto add = [&](std::initializer_list<const char*> more) {
    for (const char* k : more) keys.insert(k);
  };
  auto add_map = [&] { keys.insert(kMapKeys.begin(), kMapKeys.end()); };
  auto add_ode = [&] { keys.insert(kOdeKeys.begin(), kOdeKeys.end()); };
  switch (c) {
    case Command::kEscapeMap:
      add_map();
      add({"n", "theta_res", "z_res", "theta_min", "theta_max", "z_min", "z_max"});
      break;
    case Command::kOrbit:
      add_map();
      add({"n", "theta0", "z0"});
      break;
    case Command::kAttractor:
      add_map();
      add({"burn_in", "keep", "seeds"});
      break;
    case Command::kLyapunov:
      add_map();
      add({"n", "theta0", "z0"});
      break;
    case Command::kFixedPoints:
      add_map();
      add({"m_min", "m_max", "period", "orbit_seeds"});
      break;
    case Command::kCertify:
      add_map();
      add({"cone_h", "cone_v", "samples_theta", "samples_z", "vf_samples"});
      break;
    case Command::kScan:
      add_map();
      add({"a_min", "a_max", "steps", "cone_h", "cone_v", "samples_theta",
           "samples_z", "vf_samples"});
      break;
    case Command::kTangency:
      add_map();
      add({"m", "a_min", "a_max", "seed_radius", "order_n"});
      break;
    case Command::kMelnikov:
      add_ode();
      break;
    case Command::kValidate:
      add_ode();
      add({"samples_theta", "samples_z", "mu_list"});
      break;
  }
  return keys;
}

}  // namespace

std::optional<Command> command_from_name(const std::string& name) {
  static const std::map<std::string, Command> table = {
      {"escape-map", Command::kEscapeMap}, {"orbit", Command::kOrbit},
      {"attractor", Command::kAttractor},  {"lyapunov", Command::kLyapunov},
      {"fixed-points", Command::kFixedPoints}, {"certify", Command::kCertify},
      {"scan", Command::kScan},            {"tangency", Command::kTangency},
      {"melnikov", Command::kMelnikov},    {"validate", Command::kValidate}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::kEscapeMap: return "escape-map";
    case Command::kOrbit: return "orbit";
    case Command::kAttractor: return "attractor";
    case Command::kLyapunov: return "lyapunov";
    case Command::kFixedPoints: return "fixed-points";
    case Command::kCertify: return "certify";
    case Command::kScan: return "scan";
    case Command::kTangency: return "tangency";
    case Command::kMelnikov: return "melnikov";
    case Command::kValidate: return "validate";
  }
  return "?";
}

RunConfig parse_config(const std::string& file_text, const std::string& file_name,
                       const std::vector<std::string>& args) {
  KV file_kv, flag_kv;
  std::string command_str;
  if (!file_text.empty()) parse_file_text(file_text, file_name, file_kv, &command_str);

  // Flags: "key=value" tokens or "--key value" pairs; a bare first token may
  // name the command.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string tok = args[i];
    if (tok.rfind("--", 0) == 0) {
      const std::string key = tok.substr(2);
      if (key.empty()) throw ParseError("flag: empty option name");
      const auto eq = key.find('=');
      if (eq != std::string::npos) {
        flag_kv[trim(key.substr(0, eq))] = {trim(key.substr(eq + 1)), "flag"};
      } else {
        if (i + 1 >= args.size())
          throw ParseError("flag: '--" + key + "' expects a value");
        flag_kv[key] = {trim(args[++i]), "flag"};
      }
    } else if (tok.find('=') != std::string::npos) {
      const auto eq = tok.find('=');
      const std::string key = trim(tok.substr(0, eq));
      if (key == "command") {
        command_str = trim(tok.substr(eq + 1));
      } else {
        flag_kv[key] = {trim(tok.substr(eq + 1)), "flag"};
      }
    } else if (command_from_name(tok)) {
      command_str = tok;
    } else {
      throw ParseError("flag: unexpected token '" + tok + "'");
    }
  }

  if (command_str.empty())
    throw ParseError("no command given (command=<name> or a subcommand argument)");
  const auto cmd = command_from_name(command_str);
  if (!cmd) throw ParseError("unknown command '" + command_str + "'");

  KV kv = file_kv;
  for (const auto& [k, v] : flag_kv) kv[k] = v;  // flags override file values

  const auto allowed = allowed_keys(*cmd);
  for (const auto& [k, v] : kv)
    if (!allowed.count(k))
      throw ParseError(v.where + ": unknown key '" + k + "' for command '" +
                       command_str + "'");

  RunConfig cfg;
  cfg.command = *cmd;

  auto getd = [&](const char* key, double dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : to_double(key, it->second);
  };
  auto geti = [&](const char* key, long dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : to_long(key, it->second);
  };
  auto gets = [&](const char* key, const std::string& dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second.value;
  };
  auto optd = [&](const char* key) -> std::optional<double> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return to_double(key, it->second);
  };

  cfg.threads = unsigned(std::max(1l, geti("threads", 1)));
  cfg.seed = std::uint64_t(geti("seed", 0));
  cfg.out = gets("out", "tangle_out");

  // Map parameters.
  cfg.map.a = getd("a", cfg.map.a);
  cfg.map.b = getd("b", cfg.map.b);
  cfg.map.c = getd("c", cfg.map.c);
  cfg.map.d = getd("d", cfg.map.d);
  cfg.map.gamma = getd("gamma", cfg.map.gamma);
  cfg.map.k = getd("k", cfg.map.k);
  cfg.map.escape_floor = getd("escape_floor", 0.0);
  cfg.map.forcing = profile_from(kv, "phi", "phi_sin", "phi_cos");

  // ODE system.
  const std::string sysname = gets("system", "engineered-loop");
  if (sysname == "engineered-loop") {
    cfg.system = engineered_loop_system(getd("alpha", 1.5), getd("beta", 1.0));
  } else if (sysname == "engineered-shooting") {
    cfg.system = engineered_shooting_system(getd("alpha", 1.5), getd("beta", 1.0));
  } else if (sysname == "custom") {
    cfg.system.alpha = getd("alpha", 1.5);
    cfg.system.beta = getd("beta", 1.0);
    if (auto it = kv.find("f_poly"); it != kv.end()) cfg.system.f = to_poly("f_poly", it->second);
    if (auto it = kv.find("g_poly"); it != kv.end()) cfg.system.g = to_poly("g_poly", it->second);
    if (auto it = kv.find("a_poly"); it != kv.end()) cfg.system.A = to_poly("a_poly", it->second);
    if (auto it = kv.find("b_poly"); it != kv.end()) cfg.system.B = to_poly("b_poly", it->second);
  } else {
    throw ParseError("unknown system '" + sysname +
                     "' (known: engineered-loop, engineered-shooting, custom)");
  }
  if (kv.count("a_poly") && sysname != "custom")
    cfg.system.A = to_poly("a_poly", kv.at("a_poly"));
  if (kv.count("b_poly") && sysname != "custom")
    cfg.system.B = to_poly("b_poly", kv.at("b_poly"));
  cfg.system.omega = getd("omega", cfg.system.omega);
  cfg.system.mu = getd("mu", cfg.system.mu);
  cfg.system.epsilon = getd("epsilon", cfg.system.epsilon);
  cfg.system.q = profile_from(kv, "q", "q_sin", "q_cos");
  if (auto lo = optd("shoot_lo")) {
    const double hi = getd("shoot_hi", *lo + 0.1);
    cfg.system.shoot_bracket = std::make_pair(*lo, hi);
  }
  cfg.shoot_tol = getd("shoot_tol", 1e-9);
  const std::string rho = gets("rho", "auto");
  if (rho == "auto") {
    cfg.rho_auto = true;
  } else {
    cfg.rho_auto = false;
    cfg.system.rho = to_double("rho", kv.at("rho"));
  }

  // Per-command numeric options.
  cfg.n = int(geti("n", cfg.command == Command::kLyapunov ? 100000 : 100));
  cfg.theta_res = int(geti("theta_res", 1000));
  cfg.z_res = int(geti("z_res", 1000));
  cfg.theta_min = optd("theta_min");
  cfg.theta_max = optd("theta_max");
  cfg.z_min = optd("z_min");
  cfg.z_max = optd("z_max");
  cfg.theta0 = getd("theta0", 0.0);
  cfg.z0 = getd("z0", 0.0);
  cfg.burn_in = int(geti("burn_in", 1000));
  cfg.keep = int(geti("keep", 100));
  cfg.seeds = int(geti("seeds", 10000));
  cfg.m_min = int(geti("m_min", 0));
  cfg.m_max = int(geti("m_max", 0));
  cfg.period = int(geti("period", 1));
  cfg.orbit_seeds = int(geti("orbit_seeds", 400));
  cfg.cones.horizontal_bound = getd("cone_h", 0.01);
  cfg.cones.vertical_bound = getd("cone_v", 100.0);
  cfg.sampling.v_theta = int(geti("samples_theta", 2000));
  cfg.sampling.v_z = int(geti("samples_z", 200));
  cfg.sampling.vf_samples = int(geti("vf_samples", 10000));
  cfg.a_min = getd("a_min", 0.0);
  cfg.a_max = getd("a_max", kTwoPi);
  cfg.steps = int(geti("steps", 64));
  cfg.saddle_m = int(geti("m", 0));
  cfg.seed_radius = getd("seed_radius", 1e-4);
  cfg.order_n = int(geti("order_n", 20));
  if (auto it = kv.find("mu_list"); it != kv.end())
    cfg.mu_list = to_list("mu_list", it->second);
  cfg.val_theta_samples = int(geti("samples_theta", 10));
  cfg.val_z_samples = int(geti("samples_z", 5));

  // --- precondition validation (exit 3) ---------------------------------
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw OptionError(msg);
  };
  require(cfg.map.b > 0.0, "b > 0 required");
  require(cfg.map.c > 0.0, "c > 0 required");
  require(cfg.map.d > 0.0, "d > 0 required");
  require(cfg.map.gamma > 1.0, "gamma > 1 required");
  require(cfg.map.k > 0.0 && cfg.map.k <= 1.0, "0 < k <= 1 required");
  require(!cfg.map.forcing.empty(), "forcing profile must be nonzero");
  require(cfg.threads >= 1, "threads >= 1 required");
  switch (cfg.command) {
    case Command::kEscapeMap:
      require(cfg.n >= 1, "n >= 1 required");
      require(cfg.theta_res >= 2 && cfg.z_res >= 2, "resolution >= 2 per axis required");
      break;
    case Command::kOrbit:
      require(cfg.n >= 1, "n >= 1 required");
      break;
    case Command::kAttractor:
      require(cfg.burn_in >= 1 && cfg.keep >= 1 && cfg.seeds >= 1,
              "burn_in, keep, seeds >= 1 required");
      break;
    case Command::kLyapunov:
      require(cfg.n >= 1, "n >= 1 required");
      break;
    case Command::kFixedPoints:
      require(cfg.m_min <= cfg.m_max, "m_min <= m_max required");
      require(cfg.period >= 1 && cfg.period <= 32,
              "period in [1, 32] required (desk-scale cap)");
      break;
    case Command::kCertify:
      require(cfg.cones.valid(), "cone bounds: 0 < cone_h < 1 < cone_v required");
      break;
    case Command::kScan:
      require(cfg.steps >= 2, "steps >= 2 required");
      require(cfg.cones.valid(), "cone bounds: 0 < cone_h < 1 < cone_v required");
      require(cfg.a_max > cfg.a_min, "a_max > a_min required");
      break;
    case Command::kTangency:
      require(cfg.a_max > cfg.a_min, "a_max > a_min required");
      require(cfg.seed_radius > 0.0, "seed_radius > 0 required");
      break;
    case Command::kMelnikov:
    case Command::kValidate:
      if (auto msg = cfg.system.check_hypotheses()) throw OptionError(*msg);
      require(cfg.system.mu > 0.0 && cfg.system.epsilon > 0.0,
              "mu > 0 and epsilon > 0 required");
      break;
  }
  return cfg;
}

std::string RunConfig::echo_text(bool include_execution) const {
  std::ostringstream out;
  out << "command = " << command_name(command) << "\n";
  out << to_config_text(map);
  out << "seed = " << seed << "\n";
  if (include_execution) {
    out << "threads = " << threads << "\n";
    out << "out = " << this->out << "\n";
  }
  switch (command) {
    case Command::kEscapeMap:
      out << "n = " << n << "\ntheta_res = " << theta_res << "\nz_res = " << z_res << "\n";
      break;
    case Command::kOrbit:
    case Command::kLyapunov:
      out << "n = " << n << "\ntheta0 = " << format_double(theta0)
          << "\nz0 = " << format_double(z0) << "\n";
      break;
    case Command::kAttractor:
      out << "burn_in = " << burn_in << "\nkeep = " << keep << "\nseeds = " << seeds
          << "\n";
      break;
    case Command::kFixedPoints:
      out << "m_min = " << m_min << "\nm_max = " << m_max << "\nperiod = " << period
          << "\n";
      break;
    case Command::kCertify:
    case Command::kScan:
      out << "cone_h = " << format_double(cones.horizontal_bound)
          << "\ncone_v = " << format_double(cones.vertical_bound)
          << "\nsamples_theta = " << sampling.v_theta
          << "\nsamples_z = " << sampling.v_z << "\nvf_samples = " << sampling.vf_samples
          << "\na_min = " << format_double(a_min) << "\na_max = " << format_double(a_max)
          << "\nsteps = " << steps << "\n";
      break;
    case Command::kTangency:
      out << "m = " << saddle_m << "\na_min = " << format_double(a_min)
          << "\na_max = " << format_double(a_max)
          << "\nseed_radius = " << format_double(seed_radius)
          << "\norder_n = " << order_n << "\n";
      break;
    case Command::kMelnikov:
    case Command::kValidate:
      out << "alpha = " << format_double(system.alpha)
          << "\nbeta = " << format_double(system.beta)
          << "\nomega = " << format_double(system.omega)
          << "\nrho = " << (rho_auto ? std::string("auto") : format_double(system.rho))
          << "\nmu = " << format_double(system.mu)
          << "\nepsilon = " << format_double(system.epsilon) << "\n";
      break;
  }
  return out.str();
}

}  // namespace tangle::cli
