#include "roughlab/config.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "roughlab/inequality.hpp"

namespace roughlab {

using nlohmann::json;

SchemaError::SchemaError(const std::string& path, const std::string& problem)
    : ConfigurationError(path + ": " + problem), path_(path) {}

namespace {

constexpr std::array<const char*, 8> kCommandNames{"solve",         "check-lemma1", "check-prop1",    "check-ps",
                                                   "check-beta",    "check-scaling", "smallness-scan", "budget"};

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

// Typed access to one JSON object; every key read is recorded so leftovers can be rejected.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }
  std::string key_path(const std::string& key) const { return join(path_, key); }

  const json* find(const std::string& key) {
    known_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const json* v = find(key);
    if (v) out = convert<T>(*v, key_path(key));
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    const json* v = find(key);
    if (v) out = convert<T>(*v, key_path(key));
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, key_path(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!known_.count(key)) throw SchemaError(key_path(key), "unknown key");
  }

  template <class T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw SchemaError(path, "expected a nonnegative integer");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw SchemaError(path, "expected a number");
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw SchemaError(path, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw SchemaError(path, "expected an array of numbers");
      std::vector<double> out;
      for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<double>(v[i], path + "[" + std::to_string(i) + "]"));
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& path, const std::string& problem) {
  if (!ok) throw SchemaError(path, problem);
}

}  // namespace

std::string to_string(Command command) { return kCommandNames[static_cast<std::size_t>(command)]; }

Command command_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i)
    if (name == kCommandNames[i]) return static_cast<Command>(i);
  throw ConfigurationError("unknown command '" + name + "'");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names(kCommandNames.begin(), kCommandNames.end());
  return names;
}

ExperimentConfig parse_config(const json& document) {
  ExperimentConfig cfg;
  cfg.source = document;
  Section root(document, "");

  root.read("format_version", cfg.format_version);
  require(cfg.format_version == kConfigFormatVersion, "format_version",
          "unsupported version " + std::to_string(cfg.format_version));
  std::string command;
  root.read("command", command);
  require(!command.empty(), "command", "missing");
  try {
    cfg.command = command_from_string(command);
  } catch (const ConfigurationError&) {
    throw SchemaError("command", "unknown command '" + command + "'");
  }
  std::optional<std::string> out;
  root.read("output_dir", out);
  cfg.output_dir = out;
  root.read("workers", cfg.workers);
  require(cfg.workers >= 1, "workers", "must be >= 1");

  // Grid and budget share the dimension; whichever names it sets it for both.
  std::optional<int> grid_n, budget_n;
  if (auto g = root.child("grid")) {
    g->read("n", grid_n);
    g->read("points", cfg.grid.points);
    g->read("box_length", cfg.grid.box_length);
    g->finish();
    require(cfg.grid.points >= 4 && cfg.grid.points % 2 == 0, "grid.points", "must be even and >= 4");
    require(cfg.grid.box_length > 0.0, "grid.box_length", "must be positive");
  }
  std::optional<Section> b = root.child("budget");
  if (b) b->read("n", budget_n);
  if (grid_n && budget_n && *grid_n != *budget_n) throw SchemaError("budget.n", "differs from grid.n");
  const int n = grid_n ? *grid_n : budget_n ? *budget_n : 2;
  require(n == 2 || n == 3, grid_n ? "grid.n" : "budget.n", "must be 2 or 3");
  cfg.grid.n = n;

  std::string theorem = "T1";
  if (b) b->read("theorem", theorem);
  try {
    cfg.budget = reference_budget(theorem_from_string(theorem), n);
  } catch (const ConfigurationError&) {
    throw SchemaError("budget.theorem", "expected T1, T2 or T3");
  }
  if (b) {
    b->read("rho", cfg.budget.rho);
    b->read("alpha", cfg.budget.alpha);
    b->read("q", cfg.budget.q);
    b->read("varrho", cfg.budget.varrho);
    b->finish();
  }

  cfg.kernel.rho = cfg.budget.rho;
  if (auto k = root.child("kernel")) {
    std::string family = to_string(cfg.kernel.family);
    k->read("family", family);
    try {
      cfg.kernel.family = kernel_family_from_string(family);
    } catch (const std::exception&) {
      throw SchemaError("kernel.family", "expected harmonic, power or sign");
    }
    require(cfg.kernel.family != KernelFamily::custom, "kernel.family", "custom kernels are not configurable");
    k->read("beta", cfg.kernel.beta);
    k->read("coefficients", cfg.kernel.coefficients);
    k->read("tilt", cfg.kernel.tilt);
    k->read("rho", cfg.kernel.rho);
    k->finish();
    require(!cfg.kernel.coefficients.empty(), "kernel.coefficients", "must not be empty");
    require(cfg.kernel.beta > 1.0, "kernel.beta", "must exceed 1");
  }

  if (auto c = root.child("corpus")) {
    c->read("seed", cfg.corpus.seed);
    c->read("gaussians", cfg.corpus.gaussians);
    c->read("bumps", cfg.corpus.bumps);
    c->read("band_limited", cfg.corpus.band_limited);
    c->read("anisotropic", cfg.corpus.anisotropic);
    c->finish();
  }

  if (auto s = root.child("solver")) {
    SolverConfig& sc = cfg.solver;
    s->read("data_width", sc.data_width);
    s->read("data_scale", sc.data_scale);
    s->read("data_norm", sc.data_norm);
    if (auto f = s->child("force")) {
      f->read("kind", sc.force.kind);
      f->read("exponent", sc.force.exponent);
      f->read("scale", sc.force.scale);
      f->finish();
      require(sc.force.kind == "none" || sc.force.kind == "steady" || sc.force.kind == "power", "solver.force.kind",
              "expected none, steady or power");
    }
    if (auto t = s->child("times")) {
      t->read("t_min", sc.times.t_min);
      t->read("t_max", sc.times.t_max);
      t->read("count", sc.times.count);
      t->finish();
      require(sc.times.count >= 3, "solver.times.count", "must be >= 3");
      require(sc.times.t_min > 0.0 && sc.times.t_max > sc.times.t_min, "solver.times", "need 0 < t_min < t_max");
    }
    s->read("max_iterations", sc.max_iterations);
    s->read("tolerance", sc.tolerance);
    s->read("snapshots", sc.snapshots);
    s->read("scales", sc.scales);
    s->finish();
    require(sc.data_width > 0.0, "solver.data_width", "must be positive");
    require(!sc.data_norm || *sc.data_norm >= 0.0, "solver.data_norm", "must be nonnegative");
  }

  if (auto be = root.child("beta")) {
    if (const json* pairs = be->find("pairs")) {
      require(pairs->is_array(), be->key_path("pairs"), "expected an array of [a, b] pairs");
      for (std::size_t i = 0; i < pairs->size(); ++i) {
        const std::string p = be->key_path("pairs") + "[" + std::to_string(i) + "]";
        const std::vector<double> ab = Section::convert<std::vector<double>>((*pairs)[i], p);
        require(ab.size() == 2, p, "expected [a, b]");
        cfg.beta.pairs.push_back({ab[0], ab[1]});
      }
    }
    std::optional<double> a, bb;
    be->read("a", a);
    be->read("b", bb);
    require(a.has_value() == bb.has_value(), "beta", "a and b must be given together");
    if (a) cfg.beta.pairs.push_back({*a, *bb});
    be->read("times", cfg.beta.times);
    be->finish();
  }

  if (auto p = root.child("poincare")) {
    p->read("q", cfg.poincare.q);
    p->read("sigma", cfg.poincare.sigma);
    p->read("centers", cfg.poincare.centers);
    p->read("radii", cfg.poincare.radii);
    p->read("seed", cfg.poincare.seed);
    p->finish();
  }

  if (auto s = root.child("scaling")) {
    s->read("lambda", cfg.scaling.lambda);
    s->read("data_width", cfg.scaling.data_width);
    s->finish();
  }

  if (auto i = root.child("inequality")) {
    i->read("dilation_pairs", cfg.inequality.dilation_pairs);
    i->read("dilation_tolerance", cfg.inequality.dilation_tolerance);
    i->read("pointwise", cfg.inequality.pointwise);
    i->finish();
  }

  root.finish();
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("<document>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string config_hash(const json& document) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : document.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace roughlab
