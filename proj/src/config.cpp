#include "cwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cwave/io.hpp"
#include "cwave/presets.hpp"

namespace cwave {

namespace {

namespace fs = std::filesystem;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "preset",          "grid.h",           "model.rho",         "model.c",
      "model.meta",      "time.tau",         "time.t_end",        "source.kind",
      "source.fp",       "source.delay",     "source.amplitude",  "source.location",
      "pml.formulation", "pml.width",        "pml.sigma_max",     "pml.profile",
      "energy.enabled",  "energy.min",       "energy.max",        "output.dir",
      "output.snapshot_every", "output.snapshot_times", "run.cfl_override"};
  return keys;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') return false;
  return true;
}

bool valid_dotted(std::string_view s) {
  while (true) {
    const auto dot = s.find('.');
    if (!valid_name(s.substr(0, dot))) return false;
    if (dot == std::string_view::npos) return true;
    s.remove_prefix(dot + 1);
  }
}

[[noreturn]] void syntax(int line, const std::string& what) {
  fail("config line " + std::to_string(line) + ": " + what);
}

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// Parses a value starting at `s`; returns the unconsumed remainder.
std::string_view parse_value(std::string_view s, int line, ConfigValue& out) {
  s = trim(s);
  if (s.empty()) syntax(line, "missing value");
  if (s.front() == '"') {
    std::string str;
    std::size_t i = 1;
    for (; i < s.size() && s[i] != '"'; ++i) {
      if (s[i] == '\\') {
        if (i + 1 >= s.size() || (s[i + 1] != '"' && s[i + 1] != '\\'))
          syntax(line, "bad escape in string");
        ++i;
      }
      str.push_back(s[i]);
    }
    if (i >= s.size()) syntax(line, "unterminated string");
    out = std::move(str);
    return s.substr(i + 1);
  }
  if (s.front() == '[') {
    const auto close = s.find(']');
    if (close == std::string_view::npos) syntax(line, "unterminated array");
    std::vector<double> values;
    std::string_view body = trim(s.substr(1, close - 1));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const auto item = trim(body.substr(0, comma));
      double v = 0;
      if (!parse_number(item, v)) syntax(line, "array items must be numbers");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
      if (body.empty()) syntax(line, "trailing comma in array");
    }
    out = std::move(values);
    return s.substr(close + 1);
  }
  std::size_t end = 0;
  while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) && s[end] != '#') ++end;
  const auto word = s.substr(0, end);
  double v = 0;
  if (word == "true") {
    out = true;
  } else if (word == "false") {
    out = false;
  } else if (parse_number(word, v)) {
    out = v;
  } else {
    syntax(line, "unrecognised value '" + std::string(word) + "' (strings need quotes)");
  }
  return s.substr(end);
}

const char* type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "a number";
    case 1: return "a boolean";
    case 2: return "a string";
    default: return "an array";
  }
}

[[noreturn]] void wrong_type(const std::string& key, const ConfigEntry& e, const char* want) {
  fail("config key '" + key + "' must be " + want + ", got " + type_name(e.value) + " (line " +
       std::to_string(e.line) + ")");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

DampingProfile parse_profile(const std::string& s) {
  if (s == "constant") return DampingProfile::Constant;
  if (s == "linear") return DampingProfile::Linear;
  if (s == "quadratic") return DampingProfile::Quadratic;
  if (s == "inverse-distance") return DampingProfile::InverseDistance;
  fail("config key 'pml.profile': unknown profile '" + s + "'");
}

std::array<double, 3> location_of(const ConfigDoc& doc, int dims) {
  const auto loc = doc.numbers("source.location");
  if (static_cast<int>(loc.size()) != dims)
    fail("config key 'source.location' needs " + std::to_string(dims) + " coordinates");
  std::array<double, 3> out{0, 0, 0};
  std::copy(loc.begin(), loc.end(), out.begin());
  return out;
}

// Fresh problem over a model read from files: zero data, source and PML from keys.
Problem file_problem(const ConfigDoc& doc, const fs::path& base) {
  for (const char* k : {"model.rho", "model.c", "model.meta"})
    if (!doc.has(k)) fail(std::string("config key '") + k + "' is required with file models");
  if (doc.has("grid.h")) fail("config key 'grid.h' does not apply to file models");
  Problem p;
  p.name = "file-model";
  p.model = load_model(resolve(base, doc.string("model.rho")), resolve(base, doc.string("model.c")),
                       resolve(base, doc.string("model.meta")));
  const auto& g = p.grid();
  p.ic = {ScalarField(g), ScalarField(g)};
  p.bc = BoundarySpec<double>::zero();
  return p;
}

}  // namespace

ConfigDoc ConfigDoc::parse(std::string_view text) {
  ConfigDoc doc;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) syntax(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, close - 1));
      const auto rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') syntax(line_no, "text after section header");
      if (!valid_dotted(name)) syntax(line_no, "invalid section name");
      section = std::string(name);
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) syntax(line_no, "expected key = value");
      const auto name = trim(line.substr(0, eq));
      if (!valid_dotted(name)) syntax(line_no, "invalid key '" + std::string(name) + "'");
      ConfigValue v;
      const auto rest = trim(parse_value(line.substr(eq + 1), line_no, v));
      if (!rest.empty() && rest.front() != '#') syntax(line_no, "text after value");
      const std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
      if (!known_keys().count(key)) fail("unknown config key '" + key + "'");
      if (doc.entries_.count(key)) syntax(line_no, "duplicate key '" + key + "'");
      doc.entries_.emplace(key, ConfigEntry{std::move(v), line_no});
    }
  }
  return doc;
}

const ConfigEntry& ConfigDoc::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail("missing config key '" + key + "'");
  return it->second;
}

double ConfigDoc::number(const std::string& key) const {
  const auto& e = at(key);
  if (const auto* v = std::get_if<double>(&e.value)) return *v;
  wrong_type(key, e, "a number");
}

bool ConfigDoc::boolean(const std::string& key) const {
  const auto& e = at(key);
  if (const auto* v = std::get_if<bool>(&e.value)) return *v;
  wrong_type(key, e, "a boolean");
}

std::string ConfigDoc::string(const std::string& key) const {
  const auto& e = at(key);
  if (const auto* v = std::get_if<std::string>(&e.value)) return *v;
  wrong_type(key, e, "a string");
}

std::vector<double> ConfigDoc::numbers(const std::string& key) const {
  const auto& e = at(key);
  if (const auto* v = std::get_if<std::vector<double>>(&e.value)) return *v;
  wrong_type(key, e, "an array of numbers");
}

double ConfigDoc::spacing(const std::string& key) const {
  const auto& e = at(key);
  if (const auto* v = std::get_if<double>(&e.value)) {
    if (!(*v > 0)) fail("config key '" + key + "' must be positive");
    return *v;
  }
  if (const auto* s = std::get_if<std::string>(&e.value)) {
    try {
      return parse_spacing(*s);
    } catch (const Error& err) {
      fail("config key '" + key + "': " + err.what());
    }
  }
  wrong_type(key, e, "a number or spacing string");
}

RunConfig build_run_config(const ConfigDoc& doc, const fs::path& base) {
  const bool files = doc.has("model.rho") || doc.has("model.c") || doc.has("model.meta");
  RunConfig cfg;
  if (files) {
    if (doc.has("preset")) fail("config keys 'preset' and 'model.*' are exclusive");
    cfg.problem = file_problem(doc, base);
    if (!doc.has("time.tau")) fail("config key 'time.tau' is required with file models");
    if (!doc.has("time.t_end")) fail("config key 'time.t_end' is required with file models");
  } else {
    if (!doc.has("preset")) fail("config needs either 'preset' or 'model.*' keys");
    const auto name = doc.string("preset");
    cfg = doc.has("grid.h") ? make_preset(name, doc.spacing("grid.h")) : make_preset(name);
  }
  Problem& p = cfg.problem;
  const Grid& g = p.grid();

  if (doc.has("time.tau")) cfg.tau = doc.number("time.tau");
  if (doc.has("time.t_end")) cfg.t_end = doc.number("time.t_end");

  // Source.
  const bool ricker_keys = doc.has("source.fp") || doc.has("source.delay") ||
                           doc.has("source.amplitude") || doc.has("source.location");
  std::string kind = doc.has("source.kind") ? doc.string("source.kind")
                     : ricker_keys          ? "ricker"
                                            : "";
  if (kind == "none") {
    if (ricker_keys) fail("config source keys given with source.kind = \"none\"");
    p.source = SourceSpec<double>::none();
  } else if (kind == "ricker") {
    const bool had = p.source.kind == SourceKind::PointRicker;
    const auto pick = [&](const char* key, double fallback, bool has_fallback) {
      if (doc.has(key)) return doc.number(key);
      if (!has_fallback) fail(std::string("missing config key '") + key + "'");
      return fallback;
    };
    const double fp = pick("source.fp", p.source.fp, had);
    const double delay = doc.has("source.delay") ? doc.number("source.delay")
                         : had                   ? p.source.delay
                                                 : 1 / (2 * fp);
    const double amp = pick("source.amplitude", had ? p.source.amplitude : 1.0, true);
    std::array<double, 3> loc{};
    if (doc.has("source.location")) {
      loc = location_of(doc, g.dims());
    } else if (had) {
      loc = p.source.location;
    } else {
      fail("missing config key 'source.location'");
    }
    p.source = SourceSpec<double>::point_ricker(fp, delay, loc, amp);
    nearest_interior_node(g, loc);  // rejects locations outside the interior
  } else if (!kind.empty()) {
    fail("config key 'source.kind': unknown kind '" + kind + "'");
  }

  // PML.
  if (doc.has("pml.formulation")) {
    const auto f = doc.string("pml.formulation");
    if (f == "none") {
      cfg.pml.reset();
    } else if (f == "direct") {
      cfg.pml = PmlFormulation::Direct;
    } else if (f == "substituted") {
      cfg.pml = PmlFormulation::Substituted;
    } else {
      fail("config key 'pml.formulation': unknown formulation '" + f + "'");
    }
  }
  const bool layout_keys = doc.has("pml.width") || doc.has("pml.sigma_max") || doc.has("pml.profile");
  if (layout_keys) {
    require(g.dims() == 2, "config PML layers are two-dimensional");
    PmlLayout<double> layout;
    if (p.layout) {
      layout = *p.layout;
    } else {
      layout.sigma_max = 100;
      if (!doc.has("pml.width")) fail("missing config key 'pml.width'");
    }
    if (doc.has("pml.width")) {
      // Layers of this width inside the grid's outer boundary.
      const double w = doc.number("pml.width");
      require(w > 0, "config key 'pml.width' must be positive");
      layout = PmlLayout<double>::around(g.axis(0).min + w, g.axis(0).max - w, g.axis(1).min + w,
                                         g.axis(1).max - w, w, layout.sigma_max, layout.profile);
    }
    if (doc.has("pml.sigma_max")) layout.sigma_max = doc.number("pml.sigma_max");
    if (doc.has("pml.profile")) layout.profile = parse_profile(doc.string("pml.profile"));
    require(layout.inner_max[0] > layout.inner_min[0] && layout.inner_max[1] > layout.inner_min[1],
            "config PML layers leave no interior region");
    p.layout = layout;
    p.damping = damping_profile(layout, g);
    if (!cfg.pml) cfg.pml = PmlFormulation::Direct;
  }
  if (cfg.pml && !p.damping) fail("config selects a PML formulation but defines no layer");

  // Energy.
  if (doc.has("energy.enabled")) cfg.energy = doc.boolean("energy.enabled");
  if (doc.has("energy.min") || doc.has("energy.max")) {
    if (!doc.has("energy.min") || !doc.has("energy.max"))
      fail("config keys 'energy.min' and 'energy.max' go together");
    const auto lo = doc.numbers("energy.min");
    const auto hi = doc.numbers("energy.max");
    if (static_cast<int>(lo.size()) != g.dims() || static_cast<int>(hi.size()) != g.dims())
      fail("config energy region needs " + std::to_string(g.dims()) + " coordinates per corner");
    EnergyRegion<double> r;
    for (int a = 0; a < g.dims(); ++a) {
      require(hi[a] > lo[a], "config energy region is empty");
      r.min[a] = lo[a];
      r.max[a] = hi[a];
    }
    cfg.energy_region = r;
  }

  // Output.
  if (doc.has("output.dir")) cfg.output_dir = resolve(base, doc.string("output.dir"));
  else cfg.output_dir = resolve(base, "out");
  if (doc.has("output.snapshot_every")) {
    const double every = doc.number("output.snapshot_every");
    if (every < 1 || every != std::floor(every) || every > 1e9)
      fail("config key 'output.snapshot_every' must be a positive integer");
    cfg.snapshot_every = static_cast<int>(every);
    cfg.snapshot_times.clear();
  }
  if (doc.has("output.snapshot_times")) {
    cfg.snapshot_times = doc.numbers("output.snapshot_times");
    for (double t : cfg.snapshot_times)
      require(t >= 0, "config key 'output.snapshot_times' must be non-negative");
  }
  if (doc.has("run.cfl_override")) cfg.cfl_override = doc.boolean("run.cfl_override");

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return build_run_config(ConfigDoc::parse(ss.str()), path.parent_path());
}

}  // namespace cwave
