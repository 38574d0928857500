#include "tangle/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tangle/version.hpp"

namespace tangle {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string artifact_header(std::uint64_t config_hash) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash));
  return std::string("# tangle ") + kVersion + " config=" + buf + "\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const EscapeGrid& g, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "theta,z,escape_iter\n";
  for (int iz = 0; iz < g.z_res; ++iz)
    for (int it = 0; it < g.theta_res; ++it) {
      out += format_double(g.theta_of(it));
      out += ',';
      out += format_double(g.z_of(iz));
      out += ',';
      out += std::to_string(g.at(iz, it));
      out += '\n';
    }
  return out;
}

std::string to_csv(const OrbitTrace& t, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "iter,theta,z\n";
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(t.points[i].theta);
    out += ',';
    out += format_double(t.points[i].z);
    out += '\n';
  }
  return out;
}

std::string to_csv(const ScanResult& s, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "a,certified,fold_margin,cone_h_margin,cone_v_margin\n";
  for (const auto& st : s.steps) {
    out += format_double(st.a);
    out += ',';
    out += st.certified ? '1' : '0';
    out += ',';
    out += format_double(st.fold_margin);
    out += ',';
    out += format_double(st.cone_h_margin);
    out += ',';
    out += format_double(st.cone_v_margin);
    out += '\n';
  }
  return out;
}

std::string to_csv(const std::vector<FixedPointRecord>& recs, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "m,theta,z,F,lambda1_re,lambda1_im,lambda2_re,lambda2_im,kind\n";
  for (const auto& r : recs) {
    out += std::to_string(r.winding_m);
    out += ',';
    out += format_double(r.point.theta);
    out += ',';
    out += format_double(r.point.z);
    out += ',';
    out += format_double(r.F_value);
    out += ',';
    out += format_double(r.lambda1.real());
    out += ',';
    out += format_double(r.lambda1.imag());
    out += ',';
    out += format_double(r.lambda2.real());
    out += ',';
    out += format_double(r.lambda2.imag());
    out += ',';
    out += stability_name(r.kind);
    out += '\n';
  }
  return out;
}

std::string to_csv(const CurveSample& c, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "s,theta,z\n";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    out += format_double(c.arclength[i]);
    out += ',';
    out += format_double(c.points[i].theta);
    out += ',';
    out += format_double(c.points[i].z);
    out += '\n';
  }
  return out;
}

std::string to_csv(const HomoclinicOrbitData& o, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "s,x,y,u,v,E,H\n";
  for (std::size_t i = 0; i < o.s.size(); ++i) {
    out += format_double(o.s[i]);
    out += ',';
    out += format_double(o.x[i]);
    out += ',';
    out += format_double(o.y[i]);
    out += ',';
    out += format_double(o.u[i]);
    out += ',';
    out += format_double(o.v[i]);
    out += ',';
    out += format_double(o.E[i]);
    out += ',';
    out += format_double(o.H[i]);
    out += '\n';
  }
  return out;
}

std::string points_csv(const std::vector<PhasePoint>& pts, std::uint64_t config_hash) {
  std::string out = artifact_header(config_hash);
  out += "theta,z\n";
  for (const auto& q : pts) {
    out += format_double(q.theta);
    out += ',';
    out += format_double(q.z);
    out += '\n';
  }
  return out;
}

json to_json(const MapParams& p) {
  return json{{"a", p.a},
              {"b", p.b},
              {"c", p.c},
              {"d", p.d},
              {"gamma", p.gamma},
              {"k", p.k},
              {"escape_floor", p.escape_floor},
              {"phi_sin", p.forcing.sin_coeffs()},
              {"phi_cos", p.forcing.cos_coeffs()}};
}

json to_json(const CertificateReport& r) {
  return json{{"a", r.param_a},
              {"certified", r.certified()},
              {"fold_in_U", r.fold_in_U},
              {"fold_margin", r.fold_margin},
              {"cone_h_ok", r.cone_h_ok},
              {"cone_h_margin", r.cone_h_margin},
              {"cone_v_ok", r.cone_v_ok},
              {"cone_v_margin", r.cone_v_margin},
              {"cone_samples", r.cone_samples},
              {"case_deep_samples", r.case_deep},
              {"fold_samples", r.fold_samples}};
}

json to_json(const TangencyReport& r) {
  return json{{"a_star", r.a_star},
              {"tangency_theta", r.tangency_point.theta},
              {"tangency_z", r.tangency_point.z},
              {"gap_residual", r.gap_residual},
              {"quadratic_coeff", r.quadratic_coeff},
              {"crossing_speed", r.crossing_speed},
              {"unstable_slope_bound", r.unstable_slope_bound},
              {"stable_slope_bound", r.stable_slope_bound},
              {"saddle_m", r.saddle_m},
              {"winding", r.winding},
              {"intersections_below", r.intersections_below},
              {"intersections_above", r.intersections_above},
              {"unfold_delta_a", r.unfold_delta_a}};
}

json to_json(const FixedPointRecord& r) {
  return json{{"theta", r.point.theta},
              {"z", r.point.z},
              {"m", r.winding_m},
              {"period", r.period},
              {"F", r.F_value},
              {"lambda1", {r.lambda1.real(), r.lambda1.imag()}},
              {"lambda2", {r.lambda2.real(), r.lambda2.imag()}},
              {"kind", stability_name(r.kind)}};
}

json to_json(const RegimeReport& r) {
  json j{{"regime", regime_name(r.regime)},
         {"survivor_fraction", r.survivor_fraction},
         {"sink_period", r.sink_period}};
  if (r.lyapunov) j["lyapunov"] = *r.lyapunov;
  return j;
}

json to_json(const ValidationReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    json js{{"theta0", s.theta0},
            {"z0", s.z0},
            {"predicted_return", s.predicted_return},
            {"outcome", s.outcome == ValidationSample::Outcome::kReturn   ? "return"
                        : s.outcome == ValidationSample::Outcome::kEscape ? "escape"
                                                                          : "failure"}};
    if (s.outcome == ValidationSample::Outcome::kReturn) {
      js["theta1"] = s.theta1_direct;
      js["z1"] = s.z1_direct;
      if (s.predicted_return) {
        js["dtheta"] = s.dtheta;
        js["dz"] = s.dz;
      }
    }
    samples.push_back(js);
  }
  return json{{"mu", r.mu},
              {"agreements", r.agreements},
              {"decided", r.decided},
              {"failures", r.failures},
              {"agreement_rate", r.agreement_rate()},
              {"median_dtheta", r.median_dtheta},
              {"median_dz", r.median_dz},
              {"samples", samples}};
}

json to_json(const DerivedConstants& c) {
  json harm = json::array();
  for (const auto& h : c.harmonics)
    harm.push_back(json{{"n", h.n}, {"ratio", h.ratio}, {"phase", h.phase}});
  return json{{"A", c.A_val},       {"C", c.C_val},
              {"S", c.S_val},       {"A_L", c.A_L},
              {"C_L", c.C_L},       {"S_L", c.S_L},
              {"P_L", c.P_L},       {"P_L_plus", c.P_L_plus},
              {"L_plus", c.L_plus}, {"L_minus", c.L_minus},
              {"omega", c.omega},   {"rho", c.rho},
              {"phase_shift", c.phase_shift}, {"harmonics", harm}};
}

std::string to_config_text(const MapParams& p) {
  std::ostringstream out;
  out << "a = " << format_double(p.a) << "\n"
      << "b = " << format_double(p.b) << "\n"
      << "c = " << format_double(p.c) << "\n"
      << "d = " << format_double(p.d) << "\n"
      << "gamma = " << format_double(p.gamma) << "\n"
      << "k = " << format_double(p.k) << "\n"
      << "escape_floor = " << format_double(p.escape_floor) << "\n";
  auto list = [&](const char* key, const std::vector<double>& v) {
    if (v.empty()) return;
    out << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i)
      out << (i ? "," : "") << format_double(v[i]);
    out << "\n";
  };
  list("phi_sin", p.forcing.sin_coeffs());
  list("phi_cos", p.forcing.cos_coeffs());
  return out.str();
}

}  // namespace tangle
