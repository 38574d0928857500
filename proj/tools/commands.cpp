#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "tangle/errors.hpp"
#include "tangle/io.hpp"
#include "tangle/tangency.hpp"
#include "tangle/validate.hpp"
#include "tangle/version.hpp"

namespace tangle::cli {

namespace {

using nlohmann::json;

struct Emitter {
  std::string base;
  std::uint64_t hash;

  void csv(const std::string& suffix, const std::string& content) const {
    atomic_write(base + suffix, content);
  }
  void js(const std::string& suffix, const json& j) const {
    json wrapped = j;
    wrapped["tool"] = std::string("tangle ") + kVersion;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)hash);
    wrapped["config"] = buf;
    atomic_write(base + suffix, wrapped.dump(2) + "\n");
  }
};

int run_escape_map(const RunConfig& cfg, const Emitter& em) {
  Box range = v_bounding_box(cfg.map);
  if (cfg.theta_min) range.theta_lo = *cfg.theta_min;
  if (cfg.theta_max) range.theta_hi = *cfg.theta_max;
  if (cfg.z_min) range.z_lo = *cfg.z_min;
  if (cfg.z_max) range.z_hi = *cfg.z_max;
  const EscapeGrid g =
      escape_time_grid(cfg.map, cfg.n, cfg.theta_res, cfg.z_res, range, cfg.threads);
  em.csv(".csv", to_csv(g, em.hash));

  RegimeReport regime = classify_regime(cfg.map, cfg.n, std::min(200, cfg.theta_res),
                                        cfg.threads);
  json j = to_json(regime);
  j["params"] = to_json(cfg.map);
  j["n"] = cfg.n;
  j["survivors"] = g.survivor_count();
  j["cells"] = g.escape_iter.size();
  j["artifacts"] = json{{"grid_csv", std::filesystem::path(cfg.out).filename().string() + ".csv"}};
  em.js(".json", j);
  std::cout << "regime: " << regime_name(regime.regime)
            << "  survivors: " << g.survivor_count() << "/" << g.escape_iter.size()
            << "\n";
  return kExitOk;
}

int run_orbit(const RunConfig& cfg, const Emitter& em) {
  OrbitTrace t = orbit_trace(cfg.map, PhasePoint(cfg.theta0, cfg.z0), cfg.n);
  if (!t.escaped_at) {
    try {
      t.lyapunov = lyapunov_exponent(cfg.map, PhasePoint(cfg.theta0, cfg.z0),
                                     std::min(cfg.n, 20000));
    } catch (const OrbitEscapedError&) {
    }
  }
  em.csv(".csv", to_csv(t, em.hash));
  json j{{"points", t.points.size()}};
  if (t.escaped_at) j["escaped_at"] = *t.escaped_at;
  if (t.lyapunov) j["lyapunov"] = *t.lyapunov;
  j["params"] = to_json(cfg.map);
  j["artifacts"] = json{{"trace_csv", std::filesystem::path(cfg.out).filename().string() + ".csv"}};
  em.js(".json", j);
  if (t.escaped_at)
    std::cout << "orbit escaped at iteration " << *t.escaped_at << "\n";
  else
    std::cout << "orbit survived " << cfg.n << " iterations\n";
  return kExitOk;
}

int run_attractor(const RunConfig& cfg, const Emitter& em) {
  try {
    const auto pts =
        attractor_sample(cfg.map, cfg.burn_in, cfg.keep, cfg.seeds, cfg.threads, cfg.seed);
    em.csv(".csv", points_csv(pts, em.hash));
    json j{{"points", pts.size()},
           {"distinct_1e-6", distinct_points(pts)},
           {"params", to_json(cfg.map)}};
    em.js(".json", j);
    std::cout << "attractor sample: " << pts.size() << " points\n";
    return kExitOk;
  } catch (const AllEscapedError&) {
    json j{{"outcome", "all-escaped"}, {"params", to_json(cfg.map)}};
    em.js(".json", j);
    std::cout << "regime: " << regime_name(Regime::kFullEscape)
              << " (all seeds escaped within burn-in)\n";
    return kExitAnalysisNegative;
  }
}

int run_lyapunov(const RunConfig& cfg, const Emitter& em) {
  try {
    const LyapunovStats s =
        lyapunov_with_stats(cfg.map, PhasePoint(cfg.theta0, cfg.z0), cfg.n);
    json j{{"lyapunov", s.exponent},
           {"bootstrap_se", s.bootstrap_se},
           {"steps", s.steps},
           {"params", to_json(cfg.map)}};
    em.js(".json", j);
    std::cout << "lyapunov: " << format_double(s.exponent) << " +- "
              << format_double(s.bootstrap_se) << "\n";
    return kExitOk;
  } catch (const OrbitEscapedError& e) {
    json j{{"outcome", "orbit-escaped"}, {"error", e.what()}};
    em.js(".json", j);
    std::cout << "orbit escaped before n steps\n";
    return kExitAnalysisNegative;
  }
}

int run_fixed_points(const RunConfig& cfg, const Emitter& em) {
  std::vector<FixedPointRecord> recs;
  if (cfg.period == 1)
    recs = find_fixed_points(cfg.map, cfg.m_min, cfg.m_max);
  else
    recs = find_periodic_orbits(cfg.map, cfg.period, cfg.orbit_seeds);
  em.csv(".csv", to_csv(recs, em.hash));
  json arr = json::array();
  int sinks = 0;
  for (const auto& r : recs) {
    arr.push_back(to_json(r));
    if (r.is_sink()) ++sinks;
  }
  em.js(".json", json{{"records", arr}, {"params", to_json(cfg.map)}});
  std::cout << "found " << recs.size() << " record(s), " << sinks << " sink(s)\n";
  return kExitOk;
}

int run_certify(const RunConfig& cfg, const Emitter& em) {
  const CertificateReport rep =
      certify_horseshoe(cfg.map, cfg.cones, cfg.sampling, cfg.threads);
  json j = to_json(rep);
  j["params"] = to_json(cfg.map);
  em.js(".json", j);
  std::cout << "certified: " << (rep.certified() ? "yes" : "no")
            << "  fold_margin: " << format_double(rep.fold_margin) << "\n";
  return kExitOk;
}

int run_scan(const RunConfig& cfg, const Emitter& em) {
  const ScanResult res = scan_parameter(cfg.map, cfg.a_min, cfg.a_max, cfg.steps,
                                        cfg.cones, cfg.sampling, cfg.threads);
  em.csv(".csv", to_csv(res, em.hash));
  json intervals = json::array();
  int certified = 0;
  for (const auto& iv : res.intervals) {
    intervals.push_back(json{{"a_lo", iv.a_lo}, {"a_hi", iv.a_hi}, {"certified", iv.certified}});
    if (iv.certified) ++certified;
  }
  em.js(".json", json{{"intervals", intervals}, {"params", to_json(cfg.map)}});
  std::cout << res.intervals.size() << " interval(s), " << certified
            << " certified\n";
  return kExitOk;
}

int run_tangency(const RunConfig& cfg, const Emitter& em) {
  const int m = cfg.saddle_m != 0 ? cfg.saddle_m : first_saddle_m_strict(cfg.map);
  TangencyOptions opts;
  opts.seed_radius = cfg.seed_radius;
  opts.order_n = cfg.order_n;
  try {
    const TangencyReport rep = find_tangency(cfg.map, m, cfg.a_min, cfg.a_max, opts);
    json j = to_json(rep);
    j["params"] = to_json(cfg.map);
    em.js(".json", j);
    std::cout << "tangency at a = " << format_double(rep.a_star)
              << "  crossing_speed = " << format_double(rep.crossing_speed) << "\n";
    return kExitOk;
  } catch (const NoBracketError& e) {
    em.js(".json", json{{"outcome", "no-bracket"}, {"error", e.what()}});
    std::cout << "no tangency bracket on [a_min, a_max]\n";
    return kExitAnalysisNegative;
  } catch (const FoldNotFoundError& e) {
    em.js(".json", json{{"outcome", "fold-not-found"}, {"error", e.what()}});
    std::cout << "fold not found: " << e.what() << "\n";
    return kExitAnalysisNegative;
  }
}

int run_melnikov(const RunConfig& cfg, const Emitter& em, ValidationReport* val_out,
                 bool do_validate) {
  OdeSystem sys = cfg.system;
  HomoclinicOptions hopts;
  hopts.shoot_tol = cfg.shoot_tol;
  try {
    const HomoclinicOrbitData orbit = compute_homoclinic_orbit(sys, hopts);
    DerivedConstants consts = melnikov_integrals(orbit, sys);
    if (cfg.rho_auto) {
      sys.rho = select_rho(sys, consts);
      consts.rho = sys.rho;
    }
    std::string warning;
    const MapParams derived = derive_map_params(sys, consts, &warning);

    em.csv(".orbit.csv", to_csv(orbit, em.hash));
    atomic_write(em.base + ".map.config", artifact_header(em.hash) + to_config_text(derived));
    json j{{"constants", to_json(consts)},
           {"derived_map", to_json(derived)},
           {"closure_residual", orbit.closure_residual},
           {"shoot_value", orbit.shoot_value},
           {"L_plus", orbit.L_plus},
           {"L_minus", orbit.L_minus}};
    if (!warning.empty()) j["warning"] = warning;
    if (auto w = sys.scale_warning()) j["scale_warning"] = *w;

    if (do_validate) {
      std::vector<double> mus = cfg.mu_list.empty() ? std::vector<double>{sys.mu}
                                                    : cfg.mu_list;
      json vals = json::array();
      ValidateOptions vopts;
      vopts.theta_samples = cfg.val_theta_samples;
      vopts.z_samples = cfg.val_z_samples;
      for (double mu : mus) {
        OdeSystem smu = sys;
        smu.mu = mu;
        const MapParams dmu = map_params_at_mu(sys, consts, mu);
        const ValidationReport rep =
            validate_return_map(smu, orbit, consts, dmu, vopts, cfg.threads);
        vals.push_back(to_json(rep));
        if (val_out) *val_out = rep;
        std::cout << "mu = " << format_double(mu)
                  << "  agreement = " << format_double(rep.agreement_rate())
                  << "  median |dtheta| = " << format_double(rep.median_dtheta) << "\n";
      }
      j["validation"] = vals;
    } else {
      std::cout << "derived: c = " << format_double(derived.c)
                << "  d = " << format_double(derived.d)
                << "  gamma = " << format_double(derived.gamma)
                << "  k = " << format_double(derived.k)
                << "  a mod 2pi = " << format_double(normalize_theta(derived.a))
                << "\n";
    }
    em.js(".json", j);
    return kExitOk;
  } catch (const NoHomoclinicError& e) {
    em.js(".json", json{{"outcome", "no-homoclinic"},
                        {"error", e.what()},
                        {"best_residual", e.best_residual}});
    std::cout << "no homoclinic orbit: " << e.what() << "\n";
    return kExitAnalysisNegative;
  }
}

}  // namespace

int execute(const RunConfig& cfg) {
  const std::uint64_t hash = fnv1a(cfg.echo_text(false));
  Emitter em{cfg.out, hash};
  atomic_write(cfg.out + ".config", artifact_header(hash) + cfg.echo_text());

  switch (cfg.command) {
    case Command::kEscapeMap: return run_escape_map(cfg, em);
    case Command::kOrbit: return run_orbit(cfg, em);
    case Command::kAttractor: return run_attractor(cfg, em);
    case Command::kLyapunov: return run_lyapunov(cfg, em);
    case Command::kFixedPoints: return run_fixed_points(cfg, em);
    case Command::kCertify: return run_certify(cfg, em);
    case Command::kScan: return run_scan(cfg, em);
    case Command::kTangency: return run_tangency(cfg, em);
    case Command::kMelnikov: return run_melnikov(cfg, em, nullptr, false);
    case Command::kValidate: return run_melnikov(cfg, em, nullptr, true);
  }
  return kExitNumeric;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  std::string config_text, config_name;
  for (int i = 1; i < argc; ++i) {
    const std::string tok = argv[i];
    if (tok == "--config" || tok == "-c") {
      if (i + 1 >= argc) {
        std::cerr << "error: --config expects a path\n";
        return kExitParseError;
      }
      config_name = argv[++i];
      std::ifstream in(config_name);
      if (!in) {
        std::cerr << "error: cannot read config file '" << config_name << "'\n";
        return kExitParseError;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      config_text = ss.str();
    } else if (tok == "--help" || tok == "-h") {
      std::cout
          << "usage: tangle <command> [--config FILE] [key=value | --key value]...\n"
             "commands: escape-map orbit attractor lyapunov fixed-points certify\n"
             "          scan tangency melnikov validate\n"
             "Config files are flat 'key = value' text with '#' comments; flags\n"
             "override file values. Outputs: <out>.csv / <out>.json plus an\n"
             "<out>.config echo of the effective configuration.\n";
      return kExitOk;
    } else {
      args.push_back(tok);
    }
  }

  try {
    const RunConfig cfg = parse_config(config_text, config_name.empty() ? "config" : config_name, args);
    return execute(cfg);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const OptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NumericDomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DivergentError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IntegrationFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis: " << e.what() << "\n";
    return kExitAnalysisNegative;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace tangle::cli
