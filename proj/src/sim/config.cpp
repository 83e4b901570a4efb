// Copyright 2026 The awe-reach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "awe/sim/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "awe/hj/solver.hpp"

namespace awe {

RunConfig::RunConfig() : grid(hj::default_safety_grid()) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap tokenize(const std::string& text) {
  SectionMap out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value' inside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key or value");
    if (!out[section].emplace(key, value).second)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
  }
  return out;
}

// Consumes known keys; whatever remains afterwards is an error.
class Section {
 public:
  Section(SectionMap& map, const std::string& name) : name_(name) {
    auto it = map.find(name);
    if (it != map.end()) entries_ = &it->second;
  }

  template <typename Setter>
  void key(const std::string& k, Setter&& set) {
    if (!entries_) return;
    auto it = entries_->find(k);
    if (it == entries_->end()) return;
    try {
      set(it->second);
    } catch (const std::exception& ex) {
      throw std::runtime_error("config [" + name_ + "] " + k + ": " +
                               ex.what());
    }
    entries_->erase(it);
  }

  void number(const std::string& k, double* out) {
    key(k, [out](const std::string& v) { *out = parse_double(v); });
  }
  void integer(const std::string& k, int* out) {
    key(k, [out](const std::string& v) {
      const double d = parse_double(v);
      if (d != static_cast<int>(d)) throw std::runtime_error("not an integer");
      *out = static_cast<int>(d);
    });
  }
  void seed(const std::string& k, uint64_t* out) {
    key(k, [out](const std::string& v) { *out = std::stoull(v); });
  }
  void boolean(const std::string& k, bool* out) {
    key(k, [out](const std::string& v) {
      if (v == "true" || v == "on" || v == "1") {
        *out = true;
      } else if (v == "false" || v == "off" || v == "0") {
        *out = false;
      } else {
        throw std::runtime_error("expected true/false/on/off");
      }
    });
  }
  void poly(const std::string& k, Poly2* out) {
    key(k, [out](const std::string& v) {
      std::istringstream in(v);
      Poly2 p;
      if (!(in >> p.c0 >> p.c1 >> p.c2))
        throw std::runtime_error("expected three coefficients");
      std::string extra;
      if (in >> extra) throw std::runtime_error("trailing tokens");
      *out = p;
    });
  }
  void axis(const std::string& k, hj::Axis* out) {
    key(k, [out](const std::string& v) {
      std::istringstream in(v);
      hj::Axis a;
      if (!(in >> a.n >> a.lo >> a.hi))
        throw std::runtime_error("expected 'N min max [periodic]'");
      std::string flag;
      a.periodic = false;
      if (in >> flag) {
        if (flag != "periodic") throw std::runtime_error("unknown axis flag");
        a.periodic = true;
      }
      if (a.n < 1 || !(a.hi > a.lo)) throw std::runtime_error("bad axis spec");
      *out = a;
    });
  }

 private:
  static double parse_double(const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::runtime_error("trailing characters");
    return d;
  }
  const std::string name_;
  std::map<std::string, std::string>* entries_ = nullptr;
};

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  SectionMap map = tokenize(text);
  RunConfig cfg;

  Section aircraft(map, "aircraft");
  auto& ac = cfg.model.aircraft;
  aircraft.number("m_a", &ac.m_a);
  aircraft.number("s_ref", &ac.s_ref);
  aircraft.number("rho", &ac.rho);
  aircraft.number("g", &ac.g);
  aircraft.poly("cx0", &ac.cx0);
  aircraft.poly("cx_de", &ac.cx_de);
  aircraft.poly("cy_da", &ac.cy_da);
  aircraft.poly("cy_dr", &ac.cy_dr);
  aircraft.poly("cz0", &ac.cz0);
  aircraft.poly("cz_de", &ac.cz_de);
  aircraft.number("delta_a", &ac.delta_a);
  aircraft.number("delta_e", &ac.delta_e);
  aircraft.number("delta_r", &ac.delta_r);
  aircraft.number("alpha_valid_min", &ac.alpha_valid_min);
  aircraft.number("alpha_valid_max", &ac.alpha_valid_max);
  aircraft.number("v_stall_floor", &ac.v_stall_floor);

  Section tether(map, "tether");
  auto& th = cfg.model.tether;
  tether.integer("n", &th.n);
  tether.number("k", &th.k);
  tether.number("c", &th.c);
  tether.number("m_t", &th.m_t);
  tether.number("d_t", &th.d_t);
  tether.number("c_dt", &th.c_dt);
  tether.number("rho", &th.rho);
  tether.number("g", &th.g);

  Section winch(map, "winch");
  winch.number("j_w", &cfg.winch.j_w);
  winch.number("r_w", &cfg.winch.r_w);
  winch.number("nu_w", &cfg.winch.nu_w);
  winch.number("f_ref", &cfg.winch.f_ref);
  winch.number("kp", &cfg.winch.kp);
  winch.number("ki", &cfg.winch.ki);
  winch.number("m_c_max", &cfg.winch.m_c_max);

  Section wind(map, "wind");
  auto& wd = cfg.model.wind;
  wind.number("w20", &wd.w20);
  wind.number("z0_ft", &wd.z0_ft);
  wind.number("xi", &wd.xi);
  wind.number("d_turb_max", &wd.d_turb_max);
  wind.seed("seed", &wd.seed);
  wind.boolean("turbulence", &cfg.sim.turbulence);

  Section curve(map, "curve");
  curve.number("a_booth", &cfg.model.curve.a_booth);
  curve.number("b_booth", &cfg.model.curve.b_booth);
  curve.number("psi0", &cfg.model.curve.psi0);

  Section guidance(map, "guidance");
  guidance.number("delta0", &cfg.model.delta0);
  guidance.number("sigma_max", &cfg.model.sigma_max);

  Section ndi(map, "ndi");
  ndi.number("k_p_chi", &cfg.ndi.k_p_chi);
  ndi.number("k_p_gamma", &cfg.ndi.k_p_gamma);

  Section control(map, "control");
  int n_alpha = static_cast<int>(cfg.model.ctrl.alphas.size());
  int n_mu = static_cast<int>(cfg.model.ctrl.mus.size());
  control.number("alpha_min", &cfg.limits.alpha_min);
  control.number("alpha_max", &cfg.limits.alpha_max);
  control.number("mu_min", &cfg.limits.mu_min);
  control.number("mu_max", &cfg.limits.mu_max);
  control.integer("n_alpha", &n_alpha);
  control.integer("n_mu", &n_mu);
  cfg.model.ctrl =
      ControlGrid::uniform(cfg.limits.alpha_min, cfg.limits.alpha_max,
                           cfg.limits.mu_min, cfg.limits.mu_max, n_alpha, n_mu);

  Section safety(map, "safety");
  safety.number("f_rupture", &cfg.model.f_rupture);
  safety.number("h_weight", &cfg.model.h_weight);
  safety.number("eps_align", &cfg.model.eps_align);
  safety.number("margin_abs", &cfg.sw.margin_abs);
  safety.number("margin_pred", &cfg.sw.margin_pred);
  safety.number("margin_release", &cfg.sw.margin_release);
  safety.number("window", &cfg.sw.window);
  cfg.sw.f_rupture = cfg.model.f_rupture;

  Section grid(map, "grid");
  std::vector<hj::Axis> axes = cfg.grid.axes();
  grid.axis("s", &axes[0]);
  grid.axis("sigma", &axes[1]);
  grid.axis("h_tau", &axes[2]);
  grid.axis("v_a", &axes[3]);
  grid.axis("chi_a", &axes[4]);
  grid.axis("gamma_a", &axes[5]);
  grid.axis("delta_t", &axes[6]);
  cfg.grid = hj::Grid(axes);

  Section synth(map, "synth");
  synth.number("cfl", &cfg.synth.cfl);
  synth.number("dt_max", &cfg.synth.dt_max);
  synth.number("horizon", &cfg.synth.horizon);
  cfg.sw.horizon = cfg.synth.horizon;

  Section sim(map, "sim");
  sim.number("dt_ctrl", &cfg.sim.dt_ctrl);
  sim.number("duration", &cfg.sim.duration);
  sim.number("s0", &cfg.sim.s0);
  sim.number("sigma0", &cfg.sim.sigma0);
  sim.number("h_tau0", &cfg.sim.h_tau0);
  sim.number("v_a0", &cfg.sim.v_a0);
  sim.number("pretension", &cfg.sim.pretension);
  sim.number("tau_act", &cfg.sim.tau_act);
  sim.number("alpha_rate_max", &cfg.sim.alpha_rate_max);
  sim.number("mu_rate_max", &cfg.sim.mu_rate_max);
  sim.number("substep_factor", &cfg.sim.substep_factor);
  sim.number("sigma_nav_max", &cfg.sim.sigma_nav_max);
  sim.boolean("hybrid", &cfg.sim.hybrid);
  sim.boolean("retraction", &cfg.sim.retraction);
  sim.number("reel_in_speed", &cfg.sim.reel_in_speed);
  sim.number("l_min", &cfg.sim.l_min);
  sim.number("l_max", &cfg.sim.l_max);

  Section power(map, "power");
  power.number("c_lift", &cfg.power.c_lift);
  power.number("c_drag", &cfg.power.c_drag);
  power.number("c_drag_tether", &cfg.power.c_drag_tether);

  // Anything left over is unknown; fail fast.
  for (const auto& [section, entries] : map) {
    static const char* known[] = {"aircraft", "tether", "winch",  "wind",
                                  "curve",    "guidance", "ndi",  "control",
                                  "safety",   "grid",   "synth",  "sim",
                                  "power"};
    bool ok = false;
    for (const char* k : known) ok = ok || section == k;
    if (!ok) throw std::runtime_error("config: unknown section [" + section +
                                      "]");
    if (!entries.empty())
      throw std::runtime_error("config: unknown key '" +
                               entries.begin()->first + "' in [" + section +
                               "]");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string default_config_text() {
  RunConfig d;
  std::ostringstream out;
  out.precision(17);
  auto axis_line = [&](const char* name, const hj::Axis& a) {
    out << name << " = " << a.n << " " << a.lo << " " << a.hi
        << (a.periodic ? " periodic" : "") << "\n";
  };
  out << "# awe run configuration (all keys shown at their defaults)\n";
  out << "[aircraft]\n";
  const auto& ac = d.model.aircraft;
  out << "m_a = " << ac.m_a << "\ns_ref = " << ac.s_ref
      << "\nrho = " << ac.rho << "\ng = " << ac.g << "\n";
  auto poly_line = [&](const char* name, const Poly2& p) {
    out << name << " = " << p.c0 << " " << p.c1 << " " << p.c2 << "\n";
  };
  poly_line("cx0", ac.cx0);
  poly_line("cx_de", ac.cx_de);
  poly_line("cy_da", ac.cy_da);
  poly_line("cy_dr", ac.cy_dr);
  poly_line("cz0", ac.cz0);
  poly_line("cz_de", ac.cz_de);
  out << "delta_a = " << ac.delta_a << "\ndelta_e = " << ac.delta_e
      << "\ndelta_r = " << ac.delta_r << "\nalpha_valid_min = "
      << ac.alpha_valid_min << "\nalpha_valid_max = " << ac.alpha_valid_max
      << "\nv_stall_floor = " << ac.v_stall_floor << "\n";
  out << "[tether]\n";
  const auto& th = d.model.tether;
  out << "n = " << th.n << "\nk = " << th.k << "\nc = " << th.c
      << "\nm_t = " << th.m_t << "\nd_t = " << th.d_t << "\nc_dt = " << th.c_dt
      << "\nrho = " << th.rho << "\ng = " << th.g << "\n";
  out << "[winch]\n";
  out << "j_w = " << d.winch.j_w << "\nr_w = " << d.winch.r_w
      << "\nnu_w = " << d.winch.nu_w << "\nf_ref = " << d.winch.f_ref
      << "\nkp = " << d.winch.kp << "\nki = " << d.winch.ki
      << "\nm_c_max = " << d.winch.m_c_max << "\n";
  out << "[wind]\n";
  out << "w20 = " << d.model.wind.w20 << "\nz0_ft = " << d.model.wind.z0_ft
      << "\nxi = " << d.model.wind.xi
      << "\nd_turb_max = " << d.model.wind.d_turb_max
      << "\nseed = " << d.model.wind.seed << "\nturbulence = "
      << (d.sim.turbulence ? "true" : "false") << "\n";
  out << "[curve]\n";
  out << "a_booth = " << d.model.curve.a_booth
      << "\nb_booth = " << d.model.curve.b_booth
      << "\npsi0 = " << d.model.curve.psi0 << "\n";
  out << "[guidance]\n";
  out << "delta0 = " << d.model.delta0 << "\nsigma_max = " << d.model.sigma_max
      << "\n";
  out << "[ndi]\n";
  out << "k_p_chi = " << d.ndi.k_p_chi << "\nk_p_gamma = " << d.ndi.k_p_gamma
      << "\n";
  out << "[control]\n";
  out << "alpha_min = " << d.limits.alpha_min
      << "\nalpha_max = " << d.limits.alpha_max
      << "\nmu_min = " << d.limits.mu_min << "\nmu_max = " << d.limits.mu_max
      << "\nn_alpha = " << d.model.ctrl.alphas.size()
      << "\nn_mu = " << d.model.ctrl.mus.size() << "\n";
  out << "[safety]\n";
  out << "f_rupture = " << d.model.f_rupture << "\nh_weight = "
      << d.model.h_weight
      << "\neps_align = " << d.model.eps_align
      << "\nmargin_abs = " << d.sw.margin_abs
      << "\nmargin_pred = " << d.sw.margin_pred
      << "\nmargin_release = " << d.sw.margin_release
      << "\nwindow = " << d.sw.window << "\n";
  out << "[grid]\n";
  axis_line("s", d.grid.axis(0));
  axis_line("sigma", d.grid.axis(1));
  axis_line("h_tau", d.grid.axis(2));
  axis_line("v_a", d.grid.axis(3));
  axis_line("chi_a", d.grid.axis(4));
  axis_line("gamma_a", d.grid.axis(5));
  axis_line("delta_t", d.grid.axis(6));
  out << "[synth]\n";
  out << "cfl = " << d.synth.cfl << "\ndt_max = " << d.synth.dt_max
      << "\nhorizon = " << d.synth.horizon << "\n";
  out << "[sim]\n";
  out << "dt_ctrl = " << d.sim.dt_ctrl << "\nduration = " << d.sim.duration
      << "\ns0 = " << d.sim.s0 << "\nsigma0 = " << d.sim.sigma0
      << "\nh_tau0 = " << d.sim.h_tau0 << "\nv_a0 = " << d.sim.v_a0
      << "\npretension = " << d.sim.pretension
      << "\ntau_act = " << d.sim.tau_act
      << "\nalpha_rate_max = " << d.sim.alpha_rate_max
      << "\nmu_rate_max = " << d.sim.mu_rate_max
      << "\nsubstep_factor = " << d.sim.substep_factor
      << "\nsigma_nav_max = " << d.sim.sigma_nav_max
      << "\nhybrid = " << (d.sim.hybrid ? "true" : "false")
      << "\nretraction = " << (d.sim.retraction ? "true" : "false")
      << "\nreel_in_speed = " << d.sim.reel_in_speed
      << "\nl_min = " << d.sim.l_min << "\nl_max = " << d.sim.l_max << "\n";
  out << "[power]\n";
  out << "c_lift = " << d.power.c_lift << "\nc_drag = " << d.power.c_drag
      << "\nc_drag_tether = " << d.power.c_drag_tether << "\n";
  return out.str();
}

}  // namespace awe
