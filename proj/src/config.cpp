#include "kslog/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "kslog/discrete.hpp"
#include "kslog/errors.hpp"
#include "kslog/output.hpp"

namespace kslog {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  const char* end = v.data() + v.size();
  auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string one_of(const std::string& key, const std::string& v,
                   std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return v;
  std::string msg = key + ": '" + v + "' is not one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw ConfigError(msg);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty value list");
  return out;
}

struct Entry {
  std::string doc;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

using Registry = std::vector<std::pair<std::string, Entry>>;

template <typename Get>
Entry number(std::string doc, Get get) {
  return {std::move(doc),
          [get](ExperimentConfig& c, const std::string& k, const std::string& v) {
            get(c) = parse_double(k, v);
          },
          [get](const ExperimentConfig& c) {
            return format_number(get(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Get>
Entry integer(std::string doc, Get get) {
  return {std::move(doc),
          [get](ExperimentConfig& c, const std::string& k, const std::string& v) {
            get(c) = parse_int(k, v);
          },
          [get](const ExperimentConfig& c) {
            return std::to_string(get(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Get>
Entry boolean(std::string doc, Get get) {
  return {std::move(doc),
          [get](ExperimentConfig& c, const std::string& k, const std::string& v) {
            get(c) = parse_bool(k, v);
          },
          [get](const ExperimentConfig& c) {
            return std::string(get(const_cast<ExperimentConfig&>(c)) ? "true" : "false");
          }};
}

template <typename Get>
Entry choice(std::string doc, std::initializer_list<const char*> allowed, Get get) {
  std::vector<std::string> keep(allowed.begin(), allowed.end());
  return {std::move(doc),
          [get, keep](ExperimentConfig& c, const std::string& k, const std::string& v) {
            bool ok = false;
            for (const auto& a : keep) ok = ok || a == v;
            if (!ok) {
              std::string msg = k + ": '" + v + "' is not one of";
              for (const auto& a : keep) msg += " " + a;
              throw ConfigError(msg);
            }
            get(c) = v;
          },
          [get](const ExperimentConfig& c) { return get(const_cast<ExperimentConfig&>(c)); }};
}

void add_init(Registry& r, const std::string& which, InitSpec ExperimentConfig::*member) {
  const std::string p = "init." + which;
  if (which == "u") {
    r.push_back({p, choice("profile kind: constant, cosine, gaussian, eta_family",
                           {"constant", "cosine", "gaussian", "eta_family"},
                           [member](ExperimentConfig& c) -> std::string& { return (c.*member).kind; })});
  } else {
    r.push_back({p, choice("profile kind: constant, cosine, gaussian, eta_family, steady, equal_u",
                           {"constant", "cosine", "gaussian", "eta_family", "steady", "equal_u"},
                           [member](ExperimentConfig& c) -> std::string& { return (c.*member).kind; })});
  }
  r.push_back({p + ".value", number("constant level",
                                    [member](ExperimentConfig& c) -> double& { return (c.*member).value; })});
  r.push_back({p + ".base", number("cosine/gaussian offset",
                                   [member](ExperimentConfig& c) -> double& { return (c.*member).base; })});
  r.push_back({p + ".amplitude",
               number("cosine/gaussian amplitude",
                      [member](ExperimentConfig& c) -> double& { return (c.*member).amplitude; })});
  r.push_back({p + ".center", number("gaussian center (coordinate units)",
                                     [member](ExperimentConfig& c) -> double& { return (c.*member).center; })});
  r.push_back({p + ".width", number("gaussian width (coordinate units)",
                                    [member](ExperimentConfig& c) -> double& { return (c.*member).width; })});
}

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    r.push_back({"domain.kind",
                 {"interval (x in [0, 2R]) or radial (ball of radius R)",
                  [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                    c.domain.kind = one_of(k, v, {"interval", "radial"}) == "interval"
                                        ? DomainKind::Interval1D
                                        : DomainKind::RadialBall;
                  },
                  [](const ExperimentConfig& c) {
                    return std::string(c.domain.kind == DomainKind::Interval1D ? "interval"
                                                                                 : "radial");
                  }}});
    r.push_back({"domain.R", number("half-length or ball radius", [](ExperimentConfig& c) -> double& { return c.domain.R; })});
    r.push_back({"domain.n", integer("space dimension (radial: n >= 2)", [](ExperimentConfig& c) -> int& { return c.domain.n; })});
    r.push_back({"domain.cells", integer("number of cells (>= 8)", [](ExperimentConfig& c) -> int& { return c.domain.cells; })});

    r.push_back({"params.alpha", number("diffusion exponent in ln^alpha(1 + u + eps)", [](ExperimentConfig& c) -> double& { return c.params.alpha; })});
    r.push_back({"params.beta", number("sensitivity exponent in psi_c u^beta", [](ExperimentConfig& c) -> double& { return c.params.beta; })});
    r.push_back({"params.kappa", number("damping exponent in a - b u^kappa", [](ExperimentConfig& c) -> double& { return c.params.kappa; })});
    r.push_back({"params.a", number("source constant", [](ExperimentConfig& c) -> double& { return c.params.a; })});
    r.push_back({"params.b", number("damping coefficient", [](ExperimentConfig& c) -> double& { return c.params.b; })});
    r.push_back({"params.eps", number("regularization parameter", [](ExperimentConfig& c) -> double& { return c.params.eps; })});
    r.push_back({"params.s0", number("anchor of the energy potentials", [](ExperimentConfig& c) -> double& { return c.params.s0; })});
    r.push_back({"params.psi_c", number("sensitivity coefficient", [](ExperimentConfig& c) -> double& { return c.params.psi_c; })});

    add_init(r, "u", &ExperimentConfig::u_init);
    r.push_back({"init.u.mass",
                 {"rescale u0 to this mass, or none",
                  [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                    if (v == "none") {
                      c.u_mass.reset();
                    } else {
                      c.u_mass = parse_double(k, v);
                    }
                  },
                  [](const ExperimentConfig& c) {
                    return c.u_mass ? format_number(*c.u_mass) : std::string("none");
                  }}});
    add_init(r, "v", &ExperimentConfig::v_init);

    r.push_back({"run.t_end", number("final time", [](ExperimentConfig& c) -> double& { return c.t_end; })});
    r.push_back({"run.cfl", number("CFL fraction in (0, 1]", [](ExperimentConfig& c) -> double& { return c.cfl; })});
    r.push_back({"run.dt_max", number("largest step", [](ExperimentConfig& c) -> double& { return c.dt_max; })});
    r.push_back({"run.dt_min", number("step underflow threshold", [](ExperimentConfig& c) -> double& { return c.dt_min; })});
    r.push_back({"run.blowup_cap", number("absolute max_u cap", [](ExperimentConfig& c) -> double& { return c.blowup_cap; })});
    r.push_back({"run.diag_every", integer("diagnostics row every k steps", [](ExperimentConfig& c) -> int& { return c.diag_every; })});
    r.push_back({"run.energy", boolean("compute F and the identity columns", [](ExperimentConfig& c) -> bool& { return c.energy; })});
    r.push_back({"run.table_s_min", number("lower end of the potential table", [](ExperimentConfig& c) -> double& { return c.table_s_min; })});

    r.push_back({"overrides.phi", choice("model or one", {"model", "one"}, [](ExperimentConfig& c) -> std::string& { return c.overrides.phi; })});
    r.push_back({"overrides.psi", choice("model or zero", {"model", "zero"}, [](ExperimentConfig& c) -> std::string& { return c.overrides.psi; })});
    r.push_back({"overrides.f", choice("model or zero", {"model", "zero"}, [](ExperimentConfig& c) -> std::string& { return c.overrides.f; })});
    r.push_back({"overrides.ratio", choice("model or unit", {"model", "unit"}, [](ExperimentConfig& c) -> std::string& { return c.overrides.ratio; })});

    r.push_back({"family.eta", number("concentration width", [](ExperimentConfig& c) -> double& { return c.family.eta; })});
    r.push_back({"family.beta", number("profile decay exponent", [](ExperimentConfig& c) -> double& { return c.family.beta; })});
    r.push_back({"family.mass", number("mass of u_eta", [](ExperimentConfig& c) -> double& { return c.family.mass; })});
    r.push_back({"family.kappa_prime", number("n = 2 exponent of v_eta", [](ExperimentConfig& c) -> double& { return c.family.kappa_prime; })});
    r.push_back({"family.theta", number("n = 2 growth exponent in (0, 1)", [](ExperimentConfig& c) -> double& { return c.family.theta; })});
    r.push_back({"family.delta", number("n >= 3 decay exponent of v_eta", [](ExperimentConfig& c) -> double& { return c.family.delta; })});
    r.push_back({"family.gamma", number("n >= 3 scaling exponent of v_eta", [](ExperimentConfig& c) -> double& { return c.family.gamma; })});
    r.push_back({"family.growth_k", number("k in the growth check", [](ExperimentConfig& c) -> double& { return c.family.growth_k; })});
    r.push_back({"family.alpha_prime", number("n >= 3 growth exponent", [](ExperimentConfig& c) -> double& { return c.family.alpha_prime; })});

    r.push_back({"classify.global_growth", number("max growth factor still called Global", [](ExperimentConfig& c) -> double& { return c.classify.global_growth; })});
    r.push_back({"classify.blowup_growth", number("growth factor for a BlowUp verdict on dt underflow", [](ExperimentConfig& c) -> double& { return c.classify.blowup_growth; })});

    r.push_back({"output.log_max_u", boolean("log scale on the max_u chart", [](ExperimentConfig& c) -> bool& { return c.log_max_u; })});

    r.push_back({"sweep.max_parallel", integer("concurrent runs (>= 1)", [](ExperimentConfig& c) -> int& { return c.max_parallel; })});
    return r;
  }();
  return reg;
}

const Entry* find_entry(const std::string& key) {
  for (const auto& [k, e] : registry())
    if (k == key) return &e;
  return nullptr;
}

constexpr std::string_view kAxisPrefix = "sweep.axis.";

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = [] {
    std::vector<std::pair<std::string, std::string>> out;
    ExperimentConfig defaults;
    for (const auto& [k, e] : registry()) out.emplace_back(k, e.doc + " [default " + e.get(defaults) + "]");
    out.emplace_back("sweep.axis.<name>",
                     "comma-separated values; name in alpha, beta, kappa, eps, mass");
    return out;
  }();
  return keys;
}

void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key.rfind(kAxisPrefix, 0) == 0) {
    const std::string name = key.substr(kAxisPrefix.size());
    one_of(key, name, {"alpha", "beta", "kappa", "eps", "mass"});
    std::vector<double> values = parse_list(key, value);
    for (auto& axis : cfg.sweep_axes) {
      if (axis.name == name) {
        axis.values = std::move(values);
        return;
      }
    }
    cfg.sweep_axes.push_back({name, std::move(values)});
    return;
  }
  const Entry* e = find_entry(key);
  if (!e) throw ConfigError("unknown key '" + key + "'");
  e->set(cfg, key, value);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.rfind("result.", 0) == 0) continue;
    try {
      set_config_key(cfg, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& [k, e] : registry()) {
    const std::string sec = k.substr(0, k.find('.'));
    if (sec != section) {
      if (!section.empty()) out += '\n';
      section = sec;
    }
    out += k + " = " + e.get(cfg) + "\n";
  }
  for (const auto& axis : cfg.sweep_axes) {
    out += std::string(kAxisPrefix) + axis.name + " = ";
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      if (i) out += ',';
      out += format_number(axis.values[i]);
    }
    out += '\n';
  }
  return out;
}

ModelOverrides make_overrides(const OverrideSpec& spec) {
  ModelOverrides ov;
  if (spec.phi == "one") ov.phi = [](double) { return 1.0; };
  if (spec.psi == "zero") ov.psi = [](double) { return 0.0; };
  if (spec.f == "zero") ov.f = [](double) { return 0.0; };
  if (spec.ratio == "unit") ov.ratio = RatioOverride::unit();
  return ov;
}

namespace {

Field sample_init(const InitSpec& init, const Grid& g, const ExperimentConfig& cfg,
                  const Field* u0) {
  const double L = g.radial() ? g.spec().R : 2.0 * g.spec().R;
  if (init.kind == "constant") return make_field(g, init.value);
  if (init.kind == "cosine")
    return sample_field(g, [&](double x) { return init.base + init.amplitude * std::cos(M_PI * x / L); });
  if (init.kind == "gaussian") {
    if (!(init.width > 0.0)) throw ConfigError("gaussian profile: width must be > 0");
    return sample_field(g, [&](double x) {
      const double z = (x - init.center) / init.width;
      return init.base + init.amplitude * std::exp(-z * z);
    });
  }
  if (init.kind == "eta_family") {
    if (!g.radial()) throw ConfigError("eta_family profiles need domain.kind = radial");
    if (u0) return v_eta_field(cfg.family, g, g.spec().n);
    return u_eta_field(cfg.family, g);
  }
  if (u0 && init.kind == "steady") return solve_steady_v(*u0, g);
  if (u0 && init.kind == "equal_u") return *u0;
  throw ConfigError("unsupported profile kind '" + init.kind + "'");
}

}  // namespace

RunConfig build_run_config(const ExperimentConfig& cfg) {
  cfg.domain.validate();
  if (cfg.max_parallel < 1) throw ConfigError("sweep.max_parallel must be >= 1");
  const Grid g(cfg.domain);
  RunConfig rc;
  rc.domain = cfg.domain;
  rc.params = cfg.params;
  rc.u0 = sample_init(cfg.u_init, g, cfg, nullptr);
  if (cfg.u_mass) {
    if (!(*cfg.u_mass > 0.0)) throw ConfigError("init.u.mass must be > 0");
    const double m = integrate(rc.u0, g);
    if (!(m > 0.0)) throw ConfigError("init.u.mass: u0 has no mass to rescale");
    for (double& x : rc.u0.values) x *= *cfg.u_mass / m;
  }
  rc.v0 = sample_init(cfg.v_init, g, cfg, &rc.u0);
  rc.t_end = cfg.t_end;
  rc.cfl = cfg.cfl;
  rc.dt_max = cfg.dt_max;
  rc.dt_min = cfg.dt_min;
  rc.blowup_cap = cfg.blowup_cap;
  rc.diag_every = cfg.diag_every;
  rc.overrides = make_overrides(cfg.overrides);
  rc.energy = cfg.energy;
  rc.table_s_min = cfg.table_s_min;
  rc.validate();
  return rc;
}

}  // namespace kslog
