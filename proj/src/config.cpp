#include "frontsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace frontsim {

ConfigError::ConfigError(const std::string& source, int line,
                         const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
      line_(line) {}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : source_(std::move(source)) {
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      ++lineno;
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string_view line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(lineno, "malformed section header");
        const std::string name(trim(line.substr(1, line.size() - 2)));
        static const char* known[] = {"model", "drive", "initial", "run", "output", "sweep"};
        if (std::find(std::begin(known), std::end(known), name) == std::end(known))
          fail(lineno, "unknown section [" + name + "]");
        if (sections_.count(name)) fail(lineno, "duplicate section [" + name + "]");
        sections_[name].line = lineno;
        current_ = name;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(lineno, "expected 'key = value'");
      if (current_.empty()) fail(lineno, "key outside of a section");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) fail(lineno, "empty key");
      auto& entries = sections_[current_].entries;
      if (entries.count(key)) fail(lineno, "duplicate key '" + key + "'");
      entries[key] = {value, lineno};
    }
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_, line, msg);
  }

  [[nodiscard]] bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  [[nodiscard]] int section_line(const std::string& s) const {
    auto it = sections_.find(s);
    return it == sections_.end() ? 0 : it->second.line;
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.entries.find(key);
    return e == s->second.entries.end() ? nullptr : &e->second;
  }

  const Entry& require(const std::string& section, const std::string& key) const {
    if (const Entry* e = find(section, key)) return *e;
    fail(section_line(section), "missing key '" + key + "' in [" + section + "]");
  }

  void only_keys(const std::string& section, std::initializer_list<const char*> keys) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return;
    for (const auto& [k, e] : s->second.entries) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* c) { return k == c; }))
        fail(e.line, "unknown key '" + k + "' in [" + section + "]");
    }
  }

  double number(const Entry& e) const {
    double v = 0.0;
    const std::string& s = e.value;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      fail(e.line, "expected a number, got '" + s + "'");
    return v;
  }

  long integer(const Entry& e) const {
    long v = 0;
    const std::string& s = e.value;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      fail(e.line, "expected an integer, got '" + s + "'");
    return v;
  }

  std::vector<double> numbers(const Entry& e) const {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      if (item.empty()) fail(e.line, "empty list element");
      out.push_back(number(Entry{std::string(item), e.line}));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  const std::map<std::string, Section>& sections() const { return sections_; }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::string current_;
  std::map<std::string, Section> sections_;
};

// Which key a ModelParams constraint message refers to.
std::string key_for_constraint(const std::string& what) {
  static const std::pair<const char*, const char*> table[] = {
      {"a_0>0", "a0"}, {"alpha>=0", "alpha"}, {"beta>0", "beta"},
      {"gamma>0", "gamma"}, {"s_0>0", "s0"}, {"T>0", "T"}};
  for (const auto& [c, k] : table)
    if (what.find(c) != std::string::npos) return k;
  return {};
}

using Setter = std::function<void(ConfigFile&, double)>;

const std::map<std::string, Setter>& override_table() {
  static const std::map<std::string, Setter> table = {
      {"model.a0", [](ConfigFile& c, double v) { c.params.a0 = v; }},
      {"model.alpha", [](ConfigFile& c, double v) { c.params.alpha = v; }},
      {"model.beta", [](ConfigFile& c, double v) { c.params.beta = v; }},
      {"model.gamma", [](ConfigFile& c, double v) { c.params.gamma = v; }},
      {"model.s0", [](ConfigFile& c, double v) { c.params.s0 = v; }},
      {"model.T", [](ConfigFile& c, double v) { c.params.T = v; }},
      {"run.N", [](ConfigFile& c, double v) { c.run.N = static_cast<Eigen::Index>(std::llround(v)); }},
      {"run.dt", [](ConfigFile& c, double v) { c.run.dt = v; }},
      {"run.stop_time", [](ConfigFile& c, double v) { c.run.stop_time = v; }},
      {"run.window", [](ConfigFile& c, double v) { c.run.window = v; }},
      {"run.picard_tol", [](ConfigFile& c, double v) { c.run.picard_tol = v; }},
      {"run.picard_max_iters", [](ConfigFile& c, double v) { c.run.picard_max_iters = static_cast<int>(std::llround(v)); }},
      {"run.epsilon", [](ConfigFile& c, double v) { c.run.epsilon = v; }},
      {"drive.b", [](ConfigFile& c, double v) { c.drive = BoundaryDrive::constant(v); }},
      {"initial.u0", [](ConfigFile& c, double v) { c.u0 = InitialProfile::constant(v); }},
  };
  return table;
}

}  // namespace

void apply_override(ConfigFile& config, const std::string& key, double value) {
  const auto& table = override_table();
  auto it = table.find(key);
  if (it == table.end()) throw InvalidInput("unknown sweep key '" + key + "'");
  it->second(config, value);
}

void validate_config(const ConfigFile& config) {
  config.params.validate();
  config.u0.validate();
  config.run.validate();
  if (config.run.stop_time > config.params.T * (1.0 + 1e-12))
    throw InvalidInput("violated constraint stop_time<=T");
}

ConfigFile parse_config(std::string_view text, const std::string& source) {
  Parser p(text, source);
  ConfigFile c;

  if (!p.has_section("model")) p.fail(1, "missing section [model]");
  p.only_keys("model", {"a0", "alpha", "beta", "gamma", "s0", "T"});
  c.params.a0 = p.number(p.require("model", "a0"));
  c.params.alpha = p.number(p.require("model", "alpha"));
  c.params.beta = p.number(p.require("model", "beta"));
  c.params.gamma = p.number(p.require("model", "gamma"));
  c.params.s0 = p.number(p.require("model", "s0"));
  c.params.T = p.number(p.require("model", "T"));
  try {
    c.params.validate();
  } catch (const InvalidInput& e) {
    const std::string key = key_for_constraint(e.what());
    const Entry* entry = p.find("model", key);
    p.fail(entry ? entry->line : p.section_line("model"), e.what());
  }

  if (!p.has_section("drive")) p.fail(1, "missing section [drive]");
  p.only_keys("drive", {"times", "values"});
  {
    const Entry& ve = p.require("drive", "values");
    const std::vector<double> values = p.numbers(ve);
    std::vector<double> times{0.0};
    if (const Entry* te = p.find("drive", "times")) {
      times = p.numbers(*te);
    } else if (values.size() != 1) {
      p.fail(ve.line, "drive with several values needs 'times'");
    }
    try {
      c.drive = BoundaryDrive(times, values);
    } catch (const InvalidInput& e) {
      p.fail(ve.line, e.what());
    }
  }

  if (!p.has_section("initial")) p.fail(1, "missing section [initial]");
  p.only_keys("initial", {"values"});
  {
    const Entry& ve = p.require("initial", "values");
    c.u0.values = p.numbers(ve);
    try {
      c.u0.validate();
    } catch (const InvalidInput& e) {
      p.fail(ve.line, e.what());
    }
  }

  p.only_keys("run", {"mode", "N", "dt", "stop_time", "window", "picard_tol",
                      "picard_max_iters", "epsilon"});
  c.run.stop_time = c.params.T;
  if (const Entry* e = p.find("run", "mode")) {
    if (e->value == "sequential") c.run.mode = RunMode::Sequential;
    else if (e->value == "picard") c.run.mode = RunMode::Picard;
    else p.fail(e->line, "mode must be 'sequential' or 'picard'");
  }
  if (const Entry* e = p.find("run", "N")) c.run.N = p.integer(*e);
  if (const Entry* e = p.find("run", "dt")) c.run.dt = p.number(*e);
  if (const Entry* e = p.find("run", "stop_time")) c.run.stop_time = p.number(*e);
  if (const Entry* e = p.find("run", "window")) c.run.window = p.number(*e);
  if (const Entry* e = p.find("run", "picard_tol")) c.run.picard_tol = p.number(*e);
  if (const Entry* e = p.find("run", "picard_max_iters")) c.run.picard_max_iters = static_cast<int>(p.integer(*e));
  if (const Entry* e = p.find("run", "epsilon")) c.run.epsilon = p.number(*e);
  try {
    c.run.validate();
    if (c.run.stop_time > c.params.T * (1.0 + 1e-12))
      throw InvalidInput("violated constraint stop_time<=T");
  } catch (const InvalidInput& e) {
    p.fail(p.has_section("run") ? p.section_line("run") : p.section_line("model"), e.what());
  }

  p.only_keys("output", {"dir"});
  if (const Entry* e = p.find("output", "dir")) c.output_dir = e->value;

  if (auto it = p.sections().find("sweep"); it != p.sections().end()) {
    // Axis order follows first appearance in the file.
    std::vector<std::pair<int, std::string>> order;
    for (const auto& [k, e] : it->second.entries) order.emplace_back(e.line, k);
    std::sort(order.begin(), order.end());
    for (const auto& [line, key] : order) {
      const Entry& e = it->second.entries.at(key);
      if (!override_table().count(key)) p.fail(line, "unknown sweep key '" + key + "'");
      c.sweep.push_back({key, p.numbers(e)});
    }
  }
  return c;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

}  // namespace

std::string serialize_config(const ConfigFile& c) {
  std::ostringstream o;
  o << "[model]\n"
    << "a0 = " << format_number(c.params.a0) << "\n"
    << "alpha = " << format_number(c.params.alpha) << "\n"
    << "beta = " << format_number(c.params.beta) << "\n"
    << "gamma = " << format_number(c.params.gamma) << "\n"
    << "s0 = " << format_number(c.params.s0) << "\n"
    << "T = " << format_number(c.params.T) << "\n\n"
    << "[drive]\n"
    << "times = " << join(c.drive.times()) << "\n"
    << "values = " << join(c.drive.values()) << "\n\n"
    << "[initial]\n"
    << "values = " << join(c.u0.values) << "\n\n"
    << "[run]\n"
    << "mode = " << (c.run.mode == RunMode::Picard ? "picard" : "sequential") << "\n"
    << "N = " << c.run.N << "\n"
    << "dt = " << format_number(c.run.dt) << "\n"
    << "stop_time = " << format_number(c.run.stop_time) << "\n"
    << "window = " << format_number(c.run.window) << "\n"
    << "picard_tol = " << format_number(c.run.picard_tol) << "\n"
    << "picard_max_iters = " << c.run.picard_max_iters << "\n";
  if (c.run.epsilon) o << "epsilon = " << format_number(*c.run.epsilon) << "\n";
  o << "\n[output]\n"
    << "dir = " << c.output_dir << "\n";
  if (!c.sweep.empty()) {
    o << "\n[sweep]\n";
    for (const auto& axis : c.sweep) o << axis.key << " = " << join(axis.values) << "\n";
  }
  return o.str();
}

namespace {

ConfigFile base_preset() {
  ConfigFile c;
  c.params = ModelParams{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  c.drive = BoundaryDrive::constant(1.0);
  c.u0 = InitialProfile::constant(1.0);
  c.run.mode = RunMode::Sequential;
  c.run.N = 100;
  c.run.dt = 1e-3;
  c.run.stop_time = 1.0;
  return c;
}

ConfigFile generic_preset() {
  ConfigFile c = base_preset();
  c.params.beta = 2.0;
  std::vector<double> t, b;
  for (int k = 0; k <= 20; ++k) {
    t.push_back(k / 20.0);
    b.push_back(1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * k / 20.0));
  }
  c.drive = BoundaryDrive(t, b);
  c.u0.values.clear();
  for (int k = 0; k <= 10; ++k)
    c.u0.values.push_back(0.5 * (1.0 + std::cos(std::numbers::pi * k / 10.0)));
  c.run.N = 200;
  c.run.window = 0.1;
  c.run.picard_tol = 1e-10;
  c.run.picard_max_iters = 50;
  return c;
}

const std::map<std::string, std::function<ConfigFile()>>& preset_table() {
  static const std::map<std::string, std::function<ConfigFile()>> table = {
      {"equilibrium", [] { return base_preset(); }},
      {"generic", [] { return generic_preset(); }},
      {"generic-picard",
       [] {
         ConfigFile c = generic_preset();
         c.run.mode = RunMode::Picard;
         return c;
       }},
      {"decay",
       [] {
         ConfigFile c = base_preset();
         c.drive = BoundaryDrive::constant(0.0);
         c.u0 = InitialProfile::constant(0.0);
         return c;
       }},
      {"collapse",
       [] {
         ConfigFile c = base_preset();
         c.params.a0 = 10.0;
         c.params.alpha = 10.0;
         c.drive = BoundaryDrive::constant(0.0);
         c.u0 = InitialProfile::constant(0.0);
         return c;
       }},
      {"alpha-zero",
       [] {
         ConfigFile c = base_preset();
         c.params.alpha = 0.0;
         c.u0 = InitialProfile::constant(0.0);
         c.run.N = 200;
         return c;
       }},
      {"invalid-s0",
       [] {
         ConfigFile c = base_preset();
         c.params.s0 = 0.0;
         return c;
       }},
      {"relaxation",
       [] {
         ConfigFile c = base_preset();
         c.params.s0 = 0.5;
         c.params.T = 20.0;
         c.u0 = InitialProfile::constant(0.0);
         c.run.dt = 1e-2;
         c.run.stop_time = 20.0;
         return c;
       }},
      {"sweep-alpha",
       [] {
         ConfigFile c = base_preset();
         c.params.T = 40.0;
         c.run.N = 50;
         c.run.dt = 1e-2;
         c.run.stop_time = 40.0;
         c.sweep.push_back({"model.alpha", {0.5, 1.0, 2.0}});
         return c;
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : preset_table()) names.push_back(k);
  return names;
}

ConfigFile preset(const std::string& name) {
  auto it = preset_table().find(name);
  if (it == preset_table().end()) throw InvalidInput("unknown preset '" + name + "'");
  ConfigFile c = it->second();
  c.output_dir = "out/" + name;
  return c;
}

}  // namespace frontsim
