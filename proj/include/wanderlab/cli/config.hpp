#pragma once

// Experiment configuration: one TOML file with a top-level `kind` and one
// table per experiment. Unknown keys are errors.

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <toml.hpp>

#include "wanderlab/errors.hpp"

namespace wanderlab::cli {

struct TrichotomyConfig {
  double R = 2.0;
  std::int64_t degree = 2;
  std::int64_t N = 20;
  std::int64_t pairs = 50;
  double asymptotic_threshold = 1e6;
  friend bool operator==(const TrichotomyConfig&, const TrichotomyConfig&) = default;
};

struct ModelmapConfig {
  double r = 2.5;
  double eps = 1e-3;
  double margin = 1.0;
  std::int64_t stages = 8;
  std::int64_t samples = 10000;
  std::int64_t resolution = 10000;
  std::int64_t audit_k = 2;
  friend bool operator==(const ModelmapConfig&, const ModelmapConfig&) = default;
};

struct SilhouetteCase {
  std::string name;
  /// Connectivities as "1", "2", ..., "inf".
  std::vector<std::string> signature;
  /// Empty means every entry bounded.
  std::vector<bool> bounded;
  /// Moduli mod0 * D_n when `degrees` is non-empty.
  double mod0 = 1.0;
  std::vector<std::int64_t> degrees;
  bool baker = false;
  /// Expected verdict class or error code; empty skips the comparison.
  std::string expect;
  friend bool operator==(const SilhouetteCase&, const SilhouetteCase&) = default;
};

struct SilhouetteConfig {
  std::vector<SilhouetteCase> cases;
  friend bool operator==(const SilhouetteConfig&, const SilhouetteConfig&) = default;
};

struct BoundaryConfig {
  std::vector<std::string> families{"disk-mobius", "half-plane-dilation", "strip-translation", "tower"};
  std::int64_t pairs = 100;
  std::int64_t N = 30;
  double threshold = 1e-6;
  friend bool operator==(const BoundaryConfig&, const BoundaryConfig&) = default;
};

struct RenderConfig {
  double R = std::numbers::e;
  std::int64_t circles = 7;
  std::int64_t rays = 12;
  std::string file = "foliation.svg";
  friend bool operator==(const RenderConfig&, const RenderConfig&) = default;
};

inline const std::vector<std::string> experiment_kinds{"trichotomy", "modelmap", "silhouette", "boundary", "render",
                                                       "suite"};

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::optional<TrichotomyConfig> trichotomy;
  std::optional<ModelmapConfig> modelmap;
  std::optional<SilhouetteConfig> silhouette;
  std::optional<BoundaryConfig> boundary;
  std::optional<RenderConfig> render;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  bool runs(const std::string& section) const { return kind == section || kind == "suite"; }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) { fail(Errc::ConfigError, what); }

// Reads keys from one table and remembers which were consumed.
class TableReader {
 public:
  TableReader(const toml::table& table, std::string path) : table_(table), path_(std::move(path)) {}

  template <class T>
  void get(const std::string& key, T& out, bool required = false) {
    seen_.insert(key);
    const toml::node* node = table_.get(key);
    if (!node) {
      if (required) config_error(where(key) + " is required");
      return;
    }
    out = convert<T>(*node, key);
  }

  const toml::table& table() const { return table_; }
  void mark(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (const auto& [k, v] : table_) {
      if (!seen_.count(std::string(k.str()))) config_error("unknown key " + where(std::string(k.str())));
    }
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  template <class T>
  T convert(const toml::node& node, const std::string& key) const {
    if constexpr (std::is_same_v<T, double>) {
      if (auto v = node.value<double>(); v && (node.is_floating_point() || node.is_integer())) return *v;
      config_error(where(key) + " must be a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (auto v = node.as_boolean()) return v->get();
      config_error(where(key) + " must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto v = node.as_string()) return v->get();
      config_error(where(key) + " must be a string");
    } else if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::uint64_t>) {
      if (auto v = node.as_integer()) {
        if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (v->get() < 0) config_error(where(key) + " must be non-negative");
        }
        return static_cast<T>(v->get());
      }
      config_error(where(key) + " must be an integer");
    } else {
      // std::vector<E>
      using E = typename T::value_type;
      const auto* arr = node.as_array();
      if (!arr) config_error(where(key) + " must be an array");
      T out;
      for (const auto& item : *arr) out.push_back(convert<E>(item, key));
      return out;
    }
  }

  const toml::table& table_;
  std::string path_;
  std::set<std::string> seen_;
};

inline const toml::table* subtable(TableReader& root, const std::string& key) {
  root.mark(key);
  const toml::node* node = root.table().get(key);
  if (!node) return nullptr;
  const auto* t = node->as_table();
  if (!t) config_error(key + " must be a table");
  return t;
}

inline void require_positive(bool ok, const std::string& what) {
  if (!ok) config_error(what);
}

}  // namespace detail

inline ExperimentConfig parse_config(const toml::table& root_table) {
  ExperimentConfig cfg;
  detail::TableReader root(root_table, "");
  root.get("kind", cfg.kind, true);
  root.get("seed", cfg.seed);
  root.get("out", cfg.out);
  if (std::find(experiment_kinds.begin(), experiment_kinds.end(), cfg.kind) == experiment_kinds.end()) {
    detail::config_error("unknown experiment kind '" + cfg.kind + "'");
  }

  if (const auto* t = detail::subtable(root, "trichotomy")) {
    TrichotomyConfig c;
    detail::TableReader r(*t, "trichotomy");
    r.get("R", c.R, true);
    r.get("degree", c.degree, true);
    r.get("N", c.N, true);
    r.get("pairs", c.pairs);
    r.get("asymptotic_threshold", c.asymptotic_threshold);
    r.finish();
    detail::require_positive(c.R > 1.0, "trichotomy.R must exceed 1");
    detail::require_positive(c.degree >= 2, "trichotomy.degree must be >= 2");
    detail::require_positive(c.N >= 1 && c.N <= 64, "trichotomy.N must lie in [1, 64]");
    detail::require_positive(c.pairs >= 1, "trichotomy.pairs must be >= 1");
    cfg.trichotomy = c;
  }
  if (const auto* t = detail::subtable(root, "modelmap")) {
    ModelmapConfig c;
    detail::TableReader r(*t, "modelmap");
    r.get("r", c.r, true);
    r.get("eps", c.eps, true);
    r.get("margin", c.margin);
    r.get("stages", c.stages);
    r.get("samples", c.samples);
    r.get("resolution", c.resolution);
    r.get("audit_k", c.audit_k);
    r.finish();
    detail::require_positive(c.stages >= 1 && c.samples >= 1000 && c.resolution >= 64 && c.audit_k >= 1,
                             "modelmap needs stages >= 1, samples >= 1000, resolution >= 64, audit_k >= 1");
    cfg.modelmap = c;
  }
  if (const auto* t = detail::subtable(root, "silhouette")) {
    SilhouetteConfig c;
    detail::TableReader r(*t, "silhouette");
    r.mark("case");
    if (const toml::node* node = t->get("case")) {
      const auto* arr = node->as_array();
      if (!arr) detail::config_error("silhouette.case must be an array of tables");
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto* ct = arr->get(i)->as_table();
        if (!ct) detail::config_error("silhouette.case entries must be tables");
        SilhouetteCase sc;
        detail::TableReader cr(*ct, "silhouette.case[" + std::to_string(i) + "]");
        cr.get("name", sc.name, true);
        cr.get("signature", sc.signature, true);
        cr.get("bounded", sc.bounded);
        cr.get("mod0", sc.mod0);
        cr.get("degrees", sc.degrees);
        cr.get("baker", sc.baker);
        cr.get("expect", sc.expect);
        cr.finish();
        if (!sc.bounded.empty() && sc.bounded.size() != sc.signature.size()) {
          detail::config_error(cr.where("bounded") + " must match the signature length");
        }
        c.cases.push_back(std::move(sc));
      }
    }
    r.finish();
    cfg.silhouette = c;
  }
  if (const auto* t = detail::subtable(root, "boundary")) {
    BoundaryConfig c;
    detail::TableReader r(*t, "boundary");
    r.get("families", c.families);
    r.get("pairs", c.pairs);
    r.get("N", c.N);
    r.get("threshold", c.threshold);
    r.finish();
    detail::require_positive(c.pairs >= 1 && c.N >= 9 && c.threshold > 0.0,
                             "boundary needs pairs >= 1, N >= 9, threshold > 0");
    cfg.boundary = c;
  }
  if (const auto* t = detail::subtable(root, "render")) {
    RenderConfig c;
    detail::TableReader r(*t, "render");
    r.get("R", c.R, true);
    r.get("circles", c.circles);
    r.get("rays", c.rays);
    r.get("file", c.file);
    r.finish();
    detail::require_positive(c.R > 1.0 && c.circles >= 1 && c.rays >= 1, "render needs R > 1, circles, rays >= 1");
    cfg.render = c;
  }
  root.finish();

  for (const std::string section : {"trichotomy", "modelmap", "silhouette", "boundary", "render"}) {
    const bool present = (section == "trichotomy" && cfg.trichotomy) || (section == "modelmap" && cfg.modelmap) ||
                         (section == "silhouette" && cfg.silhouette) || (section == "boundary" && cfg.boundary) ||
                         (section == "render" && cfg.render);
    if (cfg.kind == section && !present) detail::config_error("kind '" + section + "' needs a [" + section + "] table");
  }
  return cfg;
}

inline ExperimentConfig parse_config_string(std::string_view text, std::string_view source = "config") {
  try {
    return parse_config(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e;
    detail::config_error("TOML parse error: " + os.str());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  try {
    return parse_config(toml::parse_file(path));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e;
    detail::config_error("TOML parse error: " + os.str());
  }
}

namespace detail {

template <class T>
toml::array to_array(const std::vector<T>& v) {
  toml::array a;
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, bool>) {
      a.push_back(static_cast<bool>(x));
    } else {
      a.push_back(x);
    }
  }
  return a;
}

}  // namespace detail

inline toml::table to_toml(const ExperimentConfig& cfg) {
  toml::table root;
  root.insert("kind", cfg.kind);
  root.insert("seed", static_cast<std::int64_t>(cfg.seed));
  root.insert("out", cfg.out);
  if (cfg.trichotomy) {
    const auto& c = *cfg.trichotomy;
    root.insert("trichotomy", toml::table{{"R", c.R},
                                          {"degree", c.degree},
                                          {"N", c.N},
                                          {"pairs", c.pairs},
                                          {"asymptotic_threshold", c.asymptotic_threshold}});
  }
  if (cfg.modelmap) {
    const auto& c = *cfg.modelmap;
    root.insert("modelmap", toml::table{{"r", c.r},
                                        {"eps", c.eps},
                                        {"margin", c.margin},
                                        {"stages", c.stages},
                                        {"samples", c.samples},
                                        {"resolution", c.resolution},
                                        {"audit_k", c.audit_k}});
  }
  if (cfg.silhouette) {
    toml::array cases;
    for (const auto& sc : cfg.silhouette->cases) {
      toml::table t{{"name", sc.name}, {"signature", detail::to_array(sc.signature)}, {"mod0", sc.mod0},
                    {"baker", sc.baker}};
      if (!sc.bounded.empty()) t.insert("bounded", detail::to_array(sc.bounded));
      if (!sc.degrees.empty()) t.insert("degrees", detail::to_array(sc.degrees));
      if (!sc.expect.empty()) t.insert("expect", sc.expect);
      cases.push_back(std::move(t));
    }
    root.insert("silhouette", toml::table{{"case", std::move(cases)}});
  }
  if (cfg.boundary) {
    const auto& c = *cfg.boundary;
    root.insert("boundary", toml::table{{"families", detail::to_array(c.families)},
                                        {"pairs", c.pairs},
                                        {"N", c.N},
                                        {"threshold", c.threshold}});
  }
  if (cfg.render) {
    const auto& c = *cfg.render;
    root.insert("render",
                toml::table{{"R", c.R}, {"circles", c.circles}, {"rays", c.rays}, {"file", c.file}});
  }
  return root;
}

inline std::string to_toml_string(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << to_toml(cfg);
  return os.str();
}

/// Every experiment with the reference parameters.
inline ExperimentConfig reference_suite(std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  cfg.kind = "suite";
  cfg.seed = seed;
  cfg.trichotomy = TrichotomyConfig{};
  cfg.modelmap = ModelmapConfig{};
  SilhouetteConfig s;
  const auto repeat = [](std::vector<std::string> head, std::vector<std::string> period, std::size_t n) {
    while (head.size() < n) head.push_back(period[head.size() % period.size()]);
    return head;
  };
  const std::vector<std::string> twos(12, "2");
  s.cases.push_back({"eventually-3", repeat({"5"}, {"3"}, 12), {}, 1.0, {}, false, "EventuallyIsometric"});
  s.cases.push_back({"doubly-constant-moduli", twos, {}, 1.0, std::vector<std::int64_t>(11, 1), false,
                     "EventuallyIsometric"});
  s.cases.push_back({"doubly-growing-moduli", twos, {}, 1.0, std::vector<std::int64_t>(11, 2), false, "Trimodal"});
  s.cases.push_back({"baker-infinite", std::vector<std::string>(12, "inf"), {}, 1.0, {}, true, "Bimodal"});
  s.cases.push_back({"baker-finite", twos, {}, 1.0, {}, true, "Trimodal"});
  std::vector<std::string> pattern;
  std::vector<bool> bounded;
  for (int i = 0; i < 16; ++i) {
    pattern.push_back(i % 4 == 1 ? "2" : "1");
    bounded.push_back(i % 4 == 1 || i % 4 == 2);
  }
  s.cases.push_back({"model-pattern", pattern, bounded, 1.0, {}, false, "NoEventualConnectivity"});
  cfg.silhouette = s;
  cfg.boundary = BoundaryConfig{};
  cfg.render = RenderConfig{};
  return cfg;
}

}  // namespace wanderlab::cli
