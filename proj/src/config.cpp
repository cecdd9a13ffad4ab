#include "bosemix/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace bosemix {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s, int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(value)) {
    throw ConfigError(line, "expected a finite number, got '" + s + "'");
  }
  return value;
}

long long parse_integer(const std::string& s, int line) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ConfigError(line, "expected an integer, got '" + s + "'");
  return value;
}

int parse_int(const std::string& s, int line) {
  const long long v = parse_integer(s, line);
  if (v < -(1LL << 31) || v >= (1LL << 31)) throw ConfigError(line, "integer out of range: " + s);
  return static_cast<int>(v);
}

std::vector<double> parse_array(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item, line));
  if (out.empty()) throw ConfigError(line, "empty array");
  return out;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(line, "expected true or false, got '" + s + "'");
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_array(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_number(values[i]);
  }
  return out;
}

CVector normalized_orbital(const std::vector<double>& re, const std::vector<double>& im,
                           int sites, const char* name) {
  const auto m = static_cast<std::size_t>(sites);
  if (re.size() != m) throw ConfigError(0, std::string(name) + "_re must have M entries");
  if (!im.empty() && im.size() != m) throw ConfigError(0, std::string(name) + "_im must have M entries");
  CVector out(sites);
  for (std::size_t j = 0; j < m; ++j) out(static_cast<Index>(j)) = Complex(re[j], im.empty() ? 0.0 : im[j]);
  const double norm = out.norm();
  if (norm == 0.0) throw ConfigError(0, std::string(name) + " orbital is zero");
  return out / norm;
}

}  // namespace

CVector default_orbital_u(int sites) {
  CVector u(sites);
  for (int j = 0; j < sites; ++j) {
    const double phase = 2.0 * std::numbers::pi * j / sites;
    u(j) = Complex(1.0 + 0.5 * std::cos(phase), 0.25 * std::sin(phase));
  }
  return u.normalized();
}

CVector default_orbital_v(int sites) {
  CVector v(sites);
  for (int j = 0; j < sites; ++j) {
    const double phase = 2.0 * std::numbers::pi * j / sites;
    v(j) = Complex(1.0 - 0.4 * std::cos(phase + 0.5), 0.3 + 0.2 * std::sin(phase));
  }
  return v.normalized();
}

std::vector<std::pair<int, int>> ExperimentConfig::size_list() const {
  if (sizes.empty()) return {{n_a, n_b}};
  return sizes;
}

PotentialSet ExperimentConfig::potentials() const {
  PotentialSet p;
  if (preset == "zero") {
    p = PotentialSet::zero(sites);
  } else if (preset == "v12_delta") {
    p = PotentialSet::v12_delta(sites, strength);
  } else {
    throw ConfigError(0, "unknown potential preset '" + preset + "'");
  }
  if (U1) p.U1 = *U1;
  if (U2) p.U2 = *U2;
  if (V1) p.V1 = *V1;
  if (V2) p.V2 = *V2;
  if (V12) p.V12 = *V12;
  try {
    p.validate(sites);
  } catch (const InvalidArgument& e) {
    throw ConfigError(0, e.what());
  }
  return p;
}

CVector ExperimentConfig::orbital_u() const {
  return u_re.empty() ? default_orbital_u(sites) : normalized_orbital(u_re, u_im, sites, "u");
}

CVector ExperimentConfig::orbital_v() const {
  return v_re.empty() ? default_orbital_v(sites) : normalized_orbital(v_re, v_im, sites, "v");
}

PropagatorConfig ExperimentConfig::propagator_config(Index dimension) const {
  PropagatorConfig cfg;
  cfg.krylov_dim = krylov_dim;
  cfg.tol = tol;
  cfg.dense_threshold = dense_threshold;
  switch (method) {
    case MethodChoice::Dense:
      cfg.method = PropagationMethod::Dense;
      break;
    case MethodChoice::Krylov:
      cfg.method = PropagationMethod::Krylov;
      break;
    case MethodChoice::Auto:
      cfg.method = dimension <= dense_threshold ? PropagationMethod::Dense : PropagationMethod::Krylov;
      break;
  }
  return cfg;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "[system]\nM=" << sites << "\nN1=" << n_a << "\nN2=" << n_b
      << "\nspacing=" << format_number(spacing) << "\n";
  out << "[potentials]\npreset=" << preset << "\nstrength=" << format_number(strength) << "\n";
  const std::pair<const char*, const std::optional<std::vector<double>>*> arrays[] = {
      {"U1", &U1}, {"U2", &U2}, {"V1", &V1}, {"V2", &V2}, {"V12", &V12}};
  for (const auto& [name, value] : arrays) {
    if (*value) out << name << "=" << format_array(**value) << "\n";
  }
  out << "[state]\n";
  const std::pair<const char*, const std::vector<double>*> state[] = {
      {"u_re", &u_re}, {"u_im", &u_im}, {"v_re", &v_re}, {"v_im", &v_im}};
  for (const auto& [name, value] : state) {
    if (!value->empty()) out << name << "=" << format_array(*value) << "\n";
  }
  out << "[layout]\nn=" << n << "\nm=" << m << "\nn1=" << lr_layout.n1 << "\nn2=" << lr_layout.n2
      << "\nm1=" << lr_layout.m1 << "\nm2=" << lr_layout.m2 << "\n";
  out << "[run]\ntimes=" << format_array(times);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << (i ? "," : "\nsizes=") << sizes[i].first << "x" << sizes[i].second;
  }
  const char* method_name = method == MethodChoice::Dense    ? "dense"
                            : method == MethodChoice::Krylov ? "krylov"
                                                             : "auto";
  out << "\nwitness_count=" << witness_count << "\nseed=" << seed
      << "\nhermitian=" << (hermitian ? "true" : "false") << "\nmethod=" << method_name
      << "\ndense_threshold=" << dense_threshold << "\nkrylov_dim=" << krylov_dim
      << "\ntol=" << format_number(tol) << "\nhartree_dt=" << format_number(hartree_dt)
      << "\nhartree_stepper=" << (hartree_stepper == HartreeStepper::Rk4 ? "rk4" : "strang") << "\n";
  out << "[output]\nprecision=" << precision << "\n";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using LineOf = std::function<int(const std::string&)>;

void check_config(const ExperimentConfig& c, const LineOf& line_of) {
  auto fail = [&](const std::string& key, const std::string& message) {
    throw ConfigError(line_of(key), key + ": " + message);
  };
  try {
    LatticeGrid(c.sites, c.spacing);
  } catch (const InvalidArgument& e) {
    fail(c.sites < 2 ? "system.M" : "system.spacing", e.what());
  }
  if (c.n_a < 1 || c.n_b < 1) fail(c.n_a < 1 ? "system.N1" : "system.N2", "populations must be positive");
  for (const auto& [a, b] : c.size_list()) {
    if (a < 1 || b < 1) fail("run.sizes", "populations must be positive");
    try {
      tensor_dimension(c.grid(), SpeciesConfig(a, b));
    } catch (const InvalidArgument& e) {
      fail(c.sizes.empty() ? "system.N1" : "run.sizes", e.what());
    }
  }

  const std::pair<const char*, const std::optional<std::vector<double>>*> arrays[] = {
      {"U1", &c.U1}, {"U2", &c.U2}, {"V1", &c.V1}, {"V2", &c.V2}, {"V12", &c.V12}};
  for (const auto& [name, value] : arrays) {
    if (!*value) continue;
    const std::string key = std::string("potentials.") + name;
    const auto& v = **value;
    if (static_cast<int>(v.size()) != c.sites) fail(key, "expected M = " + std::to_string(c.sites) + " entries");
    if (name[0] == 'V') {
      for (int d = 1; d < c.sites; ++d) {
        if (std::abs(v[static_cast<std::size_t>(d)] - v[static_cast<std::size_t>(c.sites - d)]) > 1e-12) {
          fail(key, "pair potential must satisfy V[d] = V[M - d]");
        }
      }
    }
  }
  if (!std::isfinite(c.strength)) fail("potentials.strength", "must be finite");

  const std::pair<const char*, const std::vector<double>*> state[] = {
      {"state.u_re", &c.u_re}, {"state.u_im", &c.u_im}, {"state.v_re", &c.v_re}, {"state.v_im", &c.v_im}};
  for (const auto& [key, value] : state) {
    if (!value->empty() && static_cast<int>(value->size()) != c.sites) fail(key, "expected M entries");
  }
  if (c.u_re.empty() && !c.u_im.empty()) fail("state.u_im", "requires state.u_re");
  if (c.v_re.empty() && !c.v_im.empty()) fail("state.v_im", "requires state.v_re");
  try {
    c.orbital_u();
  } catch (const ConfigError& e) {
    fail("state.u_re", e.what());
  }
  try {
    c.orbital_v();
  } catch (const ConfigError& e) {
    fail("state.v_re", e.what());
  }

  if (c.n < 1) fail("layout.n", "must be positive");
  if (c.m < 1) fail("layout.m", "must be positive");
  const std::pair<const char*, int> layout[] = {{"layout.n1", c.lr_layout.n1}, {"layout.n2", c.lr_layout.n2},
                                                {"layout.m1", c.lr_layout.m1}, {"layout.m2", c.lr_layout.m2}};
  for (const auto& [key, value] : layout) {
    if (value < 1) fail(key, "must be positive");
  }

  if (c.times.empty()) fail("run.times", "must not be empty");
  for (double t : c.times) {
    if (t < 0.0) fail("run.times", "must be non-negative");
  }
  if (c.witness_count < 1) fail("run.witness_count", "must be positive");
  if (c.krylov_dim < 2) fail("run.krylov_dim", "must be >= 2");
  if (!(c.tol > 0.0)) fail("run.tol", "must be positive");
  if (c.dense_threshold < 1) fail("run.dense_threshold", "must be positive");
  if (!(c.hartree_dt > 0.0)) fail("run.hartree_dt", "must be positive");
  if (c.precision < 1 || c.precision > 17) fail("output.precision", "must lie in [1, 17]");
}

}  // namespace

void ExperimentConfig::validate() const {
  check_config(*this, [](const std::string&) { return 0; });
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, int)>;
  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"system",
       {{"M", [&](const std::string& v, int l) { cfg.sites = parse_int(v, l); }},
        {"N1", [&](const std::string& v, int l) { cfg.n_a = parse_int(v, l); }},
        {"N2", [&](const std::string& v, int l) { cfg.n_b = parse_int(v, l); }},
        {"spacing", [&](const std::string& v, int l) { cfg.spacing = parse_double(v, l); }}}},
      {"potentials",
       {{"preset",
         [&](const std::string& v, int l) {
           if (v != "zero" && v != "v12_delta") throw ConfigError(l, "unknown preset '" + v + "'");
           cfg.preset = v;
         }},
        {"strength", [&](const std::string& v, int l) { cfg.strength = parse_double(v, l); }},
        {"U1", [&](const std::string& v, int l) { cfg.U1 = parse_array(v, l); }},
        {"U2", [&](const std::string& v, int l) { cfg.U2 = parse_array(v, l); }},
        {"V1", [&](const std::string& v, int l) { cfg.V1 = parse_array(v, l); }},
        {"V2", [&](const std::string& v, int l) { cfg.V2 = parse_array(v, l); }},
        {"V12", [&](const std::string& v, int l) { cfg.V12 = parse_array(v, l); }}}},
      {"state",
       {{"u_re", [&](const std::string& v, int l) { cfg.u_re = parse_array(v, l); }},
        {"u_im", [&](const std::string& v, int l) { cfg.u_im = parse_array(v, l); }},
        {"v_re", [&](const std::string& v, int l) { cfg.v_re = parse_array(v, l); }},
        {"v_im", [&](const std::string& v, int l) { cfg.v_im = parse_array(v, l); }}}},
      {"layout",
       {{"n", [&](const std::string& v, int l) { cfg.n = parse_int(v, l); }},
        {"m", [&](const std::string& v, int l) { cfg.m = parse_int(v, l); }},
        {"n1", [&](const std::string& v, int l) { cfg.lr_layout.n1 = parse_int(v, l); }},
        {"n2", [&](const std::string& v, int l) { cfg.lr_layout.n2 = parse_int(v, l); }},
        {"m1", [&](const std::string& v, int l) { cfg.lr_layout.m1 = parse_int(v, l); }},
        {"m2", [&](const std::string& v, int l) { cfg.lr_layout.m2 = parse_int(v, l); }}}},
      {"run",
       {{"times", [&](const std::string& v, int l) { cfg.times = parse_array(v, l); }},
        {"sizes",
         [&](const std::string& v, int l) {
           cfg.sizes.clear();
           for (const auto& item : split(v, ',')) {
             const auto parts = split(item, 'x');
             if (parts.size() != 2) throw ConfigError(l, "sizes entries look like 2x2, got '" + item + "'");
             cfg.sizes.emplace_back(parse_int(parts[0], l), parse_int(parts[1], l));
           }
         }},
        {"witness_count", [&](const std::string& v, int l) { cfg.witness_count = parse_int(v, l); }},
        {"seed",
         [&](const std::string& v, int l) {
           const long long s = parse_integer(v, l);
           if (s < 0) throw ConfigError(l, "seed must be non-negative");
           cfg.seed = static_cast<std::uint64_t>(s);
         }},
        {"hermitian", [&](const std::string& v, int l) { cfg.hermitian = parse_bool(v, l); }},
        {"method",
         [&](const std::string& v, int l) {
           if (v == "dense") cfg.method = MethodChoice::Dense;
           else if (v == "krylov") cfg.method = MethodChoice::Krylov;
           else if (v == "auto") cfg.method = MethodChoice::Auto;
           else throw ConfigError(l, "method must be dense, krylov or auto");
         }},
        {"dense_threshold", [&](const std::string& v, int l) { cfg.dense_threshold = parse_integer(v, l); }},
        {"krylov_dim", [&](const std::string& v, int l) { cfg.krylov_dim = parse_int(v, l); }},
        {"tol", [&](const std::string& v, int l) { cfg.tol = parse_double(v, l); }},
        {"hartree_dt", [&](const std::string& v, int l) { cfg.hartree_dt = parse_double(v, l); }},
        {"hartree_stepper",
         [&](const std::string& v, int l) {
           if (v == "rk4") cfg.hartree_stepper = HartreeStepper::Rk4;
           else if (v == "strang") cfg.hartree_stepper = HartreeStepper::Strang;
           else throw ConfigError(l, "hartree_stepper must be rk4 or strang");
         }}}},
      {"output",
       {{"path", [&](const std::string& v, int) { cfg.output_path = v; }},
        {"precision", [&](const std::string& v, int l) { cfg.precision = parse_int(v, l); }}}},
  };

  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  std::map<std::string, int> key_lines;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    const auto hash_pos = s.find(" #");
    if (hash_pos != std::string::npos) s = trim(s.substr(0, hash_pos));
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!schema.count(section)) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    if (section.empty()) throw ConfigError(line, "key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto& keys = schema.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
    key_lines[section + "." + key] = line;
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError(line, "duplicate key '" + key + "' in [" + section + "]");
    }
    if (value.empty()) throw ConfigError(line, "empty value for '" + key + "'");
    it->second(value, line);
  }
  check_config(cfg, [&](const std::string& key) {
    const auto it = key_lines.find(key);
    return it == key_lines.end() ? 0 : it->second;
  });
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bosemix
