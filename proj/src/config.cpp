#include "diracsea/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "diracsea/io.hpp"

namespace diracsea {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || !std::isfinite(v)) throw ConfigError(key, "expected a finite number, got '" + t + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0') throw ConfigError(key, "expected an integer, got '" + t + "'");
  return v;
}

IVec3 to_index(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {0, 0, static_cast<int>(to_integer(key, parts[0]))};
  if (parts.size() == 3)
    return {static_cast<int>(to_integer(key, parts[0])), static_cast<int>(to_integer(key, parts[1])),
            static_cast<int>(to_integer(key, parts[2]))};
  throw ConfigError(key, "expected an index nz or nx,ny,nz");
}

std::string index_text(const IVec3& n) {
  if (n[0] == 0 && n[1] == 0) return std::to_string(n[2]);
  return std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]);
}

ModeSpec to_mode(const std::string& key, const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError(key, "expected index:two_s");
  ModeSpec m;
  m.n = to_index(key, parts[0]);
  m.two_s = static_cast<int>(to_integer(key, parts[1]));
  return m;
}

ChiSpec to_chi(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("chi", "expected k:re:im");
  return {to_index("chi", parts[0]), {to_double("chi", parts[1]), to_double("chi", parts[2])}};
}

std::vector<double> to_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dim", [](ScenarioConfig& c, const std::string& v) { c.dim = static_cast<int>(to_integer("dim", v)); }},
      {"box_length", [](ScenarioConfig& c, const std::string& v) { c.box_length = to_double("box_length", v); }},
      {"n_max", [](ScenarioConfig& c, const std::string& v) { c.n_max = static_cast<int>(to_integer("n_max", v)); }},
      {"fock_n_max",
       [](ScenarioConfig& c, const std::string& v) { c.fock_n_max = static_cast<int>(to_integer("fock_n_max", v)); }},
      {"mass", [](ScenarioConfig& c, const std::string& v) { c.mass = to_double("mass", v); }},
      {"charge", [](ScenarioConfig& c, const std::string& v) { c.charge = to_double("charge", v); }},
      {"mode1", [](ScenarioConfig& c, const std::string& v) { c.mode1 = to_mode("mode1", v); }},
      {"mode2", [](ScenarioConfig& c, const std::string& v) { c.mode2 = to_mode("mode2", v); }},
      {"omega", [](ScenarioConfig& c, const std::string& v) { c.omega = to_double("omega", v); }},
      {"t_final", [](ScenarioConfig& c, const std::string& v) { c.t_final = to_double("t_final", v); }},
      {"steps", [](ScenarioConfig& c, const std::string& v) { c.steps = static_cast<int>(to_integer("steps", v)); }},
      {"baseline_steps",
       [](ScenarioConfig& c, const std::string& v) {
         c.baseline_steps = static_cast<int>(to_integer("baseline_steps", v));
       }},
      {"sample_stride",
       [](ScenarioConfig& c, const std::string& v) {
         c.sample_stride = static_cast<int>(to_integer("sample_stride", v));
       }},
      {"f_list", [](ScenarioConfig& c, const std::string& v) { c.f_list = to_double_list("f_list", v); }},
      {"backend", [](ScenarioConfig& c, const std::string& v) { c.backend = parse_backend(v); }},
      {"cutoffs", [](ScenarioConfig& c, const std::string& v) { c.cutoffs = parse_int_list("cutoffs", v); }},
      {"seed",
       [](ScenarioConfig& c, const std::string& v) {
         const long long s = to_integer("seed", v);
         if (s < 0) throw ConfigError("seed", "must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"drives", [](ScenarioConfig& c, const std::string& v) { c.drives = static_cast<int>(to_integer("drives", v)); }},
      {"drive_strength",
       [](ScenarioConfig& c, const std::string& v) { c.drive_strength = to_double("drive_strength", v); }},
      {"fock_cap",
       [](ScenarioConfig& c, const std::string& v) {
         const long long cap = to_integer("fock_cap", v);
         if (cap < 1 || cap > 24) throw ConfigError("fock_cap", "must lie in [1, 24]");
         c.fock_cap = static_cast<std::size_t>(cap);
       }},
      {"sample_points",
       [](ScenarioConfig& c, const std::string& v) {
         c.sample_points = static_cast<int>(to_integer("sample_points", v));
       }},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

void validate_mode(const ScenarioConfig& c, const ModeSpec& m, const std::string& key, int smallest_cutoff) {
  require(m.two_s == 1 || m.two_s == -1, key, "two_s must be 1 or -1");
  if (c.dim == 1) require(m.n[0] == 0 && m.n[1] == 0, key, "one-dimensional modes lie on the z axis");
  for (int k : m.n) require(std::abs(k) <= smallest_cutoff, key, "mode lies outside the smallest cutoff");
}

}  // namespace

Backend parse_backend(const std::string& text) {
  const std::string t = trim(text);
  if (t == "fock") return Backend::fock;
  if (t == "gaussian") return Backend::gaussian;
  if (t == "both") return Backend::both;
  throw ConfigError("backend", "expected fock, gaussian or both, got '" + t + "'");
}

std::string backend_name(Backend backend) {
  switch (backend) {
    case Backend::fock: return "fock";
    case Backend::gaussian: return "gaussian";
    case Backend::both: return "both";
  }
  return "both";
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(static_cast<int>(to_integer(key, item)));
  return out;
}

void ScenarioConfig::validate() const {
  require(dim == 1 || dim == 3, "dim", "must be 1 or 3");
  require(box_length > 0.0, "box_length", "must be positive");
  require(n_max >= 0, "n_max", "must be nonnegative");
  require(fock_n_max >= 0, "fock_n_max", "must be nonnegative");
  require(mass > 0.0, "mass", "must be positive");
  require(std::isfinite(charge), "charge", "must be finite");
  require(t_final > 0.0, "t_final", "must be positive");
  require(omega >= 0.0, "omega", "must be nonnegative");
  require(std::abs(1.0 - std::cos(ramp_frequency() * t_final)) > 1e-12, "omega",
          "ramp would not reach g(t_final) = 1");
  require(steps >= 1, "steps", "must be at least 1");
  require(baseline_steps >= 2, "baseline_steps", "must be at least 2");
  require(sample_stride >= 1, "sample_stride", "must be at least 1");
  require(!f_list.empty(), "f_list", "must not be empty");
  require(!cutoffs.empty(), "cutoffs", "must not be empty");
  for (int n : cutoffs) require(n >= 0, "cutoffs", "must be nonnegative");
  require(drives >= 0, "drives", "must be nonnegative");
  require(drive_strength >= 0.0, "drive_strength", "must be nonnegative");
  require(fock_cap >= 1, "fock_cap", "must be positive");
  require(sample_points >= 0, "sample_points", "must be nonnegative");

  const int smallest = std::min({n_max, fock_n_max, *std::min_element(cutoffs.begin(), cutoffs.end())});
  validate_mode(*this, mode1, "mode1", smallest);
  validate_mode(*this, mode2, "mode2", smallest);
  require(mode1.n != mode2.n || mode1.two_s != mode2.two_s, "mode2", "must differ from mode1");
  for (const auto& spec : chi) {
    if (dim == 1) require(spec.k[0] == 0 && spec.k[1] == 0, "chi", "one-dimensional wave vectors lie on the z axis");
    for (int k : spec.k) require(std::abs(k) <= 2 * smallest, "chi", "wave index exceeds the band 2 n_max");
    if (spec.k == IVec3{0, 0, 0}) require(spec.amplitude.imag() == 0.0, "chi", "the k = 0 amplitude must be real");
  }
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig c;
  bool chi_seen = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "chi") {
      if (!chi_seen) c.chi.clear();
      chi_seen = true;
      if (!value.empty()) c.chi.push_back(to_chi(value));
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    it->second(c, value);
  }
  c.validate();
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& c) {
  auto mode = [](const ModeSpec& m) { return index_text(m.n) + ":" + std::to_string(m.two_s); };
  std::vector<std::pair<std::string, std::string>> out = {
      {"dim", std::to_string(c.dim)},
      {"box_length", format_double(c.box_length)},
      {"n_max", std::to_string(c.n_max)},
      {"fock_n_max", std::to_string(c.fock_n_max)},
      {"mass", format_double(c.mass)},
      {"charge", format_double(c.charge)},
      {"mode1", mode(c.mode1)},
      {"mode2", mode(c.mode2)},
  };
  if (c.chi.empty()) out.emplace_back("chi", "");
  for (const auto& s : c.chi)
    out.emplace_back("chi", index_text(s.k) + ":" + format_double(s.amplitude.real()) + ":" +
                                format_double(s.amplitude.imag()));
  const std::vector<std::pair<std::string, std::string>> rest = {
      {"omega", format_double(c.omega)},
      {"t_final", format_double(c.t_final)},
      {"steps", std::to_string(c.steps)},
      {"baseline_steps", std::to_string(c.baseline_steps)},
      {"sample_stride", std::to_string(c.sample_stride)},
      {"f_list", join<double>(c.f_list, format_double)},
      {"backend", backend_name(c.backend)},
      {"cutoffs", join<int>(c.cutoffs, [](const int& n) { return std::to_string(n); })},
      {"seed", std::to_string(c.seed)},
      {"drives", std::to_string(c.drives)},
      {"drive_strength", format_double(c.drive_strength)},
      {"fock_cap", std::to_string(c.fock_cap)},
      {"sample_points", std::to_string(c.sample_points)},
  };
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string out;
  for (const auto& [k, v] : config_entries(c)) out += v.empty() ? k + " =\n" : k + " = " + v + "\n";
  return out;
}

}  // namespace diracsea
