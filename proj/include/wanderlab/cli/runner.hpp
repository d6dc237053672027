#pragma once

// Experiment orchestration: each experiment records named checks into a
// RunReport and writes its artifacts below the output directory.

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wanderlab/boundary.hpp"
#include "wanderlab/cli/config.hpp"
#include "wanderlab/cli/emit.hpp"
#include "wanderlab/modelmap.hpp"
#include "wanderlab/rng.hpp"
#include "wanderlab/silhouette.hpp"
#include "wanderlab/tower.hpp"
#include "wanderlab/winding.hpp"

#ifndef WANDERLAB_VERSION
#define WANDERLAB_VERSION "0.1.0"
#endif

namespace wanderlab::cli {

inline constexpr const char* tool_version = WANDERLAB_VERSION;

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
  Json metrics = Json::object();
};

struct RunReport {
  std::string version = tool_version;
  std::string config_echo;
  std::vector<Check> checks;
  /// Not part of report.json, which must be reproducible byte for byte.
  double wall_seconds = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (!c.passed) out.push_back(c.name);
    }
    return out;
  }

  Json to_json() const {
    Json j;
    j["tool_version"] = version;
    j["passed"] = passed();
    j["failures"] = failures();
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"metrics", c.metrics}});
    }
    j["checks"] = arr;
    j["config"] = config_echo;
    return j;
  }
};

/// Thrown by fail-fast mode after the first failed check.
struct StopRun {};

namespace detail {

inline Json point_json(Complex z) { return Json{{"x", z.real()}, {"y", z.imag()}}; }

inline std::string error_name(const Error& e) { return std::string(to_string(e.code())); }

}  // namespace detail

/// Draws for the trichotomy sweep. Same-circle pairs keep their angular gap
/// in [pi/4, 7 pi/4] so that d_0 is not itself negligible.
inline std::pair<LogPolarPoint, LogPolarPoint> sample_pair(Uniform& rng, double R, tower::PairClass::Tag tag) {
  const double span = 0.9 * std::log(R);
  const double u1 = rng.between(-span, span);
  const double t1 = rng.between(0.0, 2.0 * pi);
  switch (tag) {
    case tower::PairClass::Tag::SameCircle: {
      const double gap = rng.between(0.25 * pi, 1.75 * pi);
      return {{u1, t1}, {u1, std::fmod(t1 + gap, 2.0 * pi)}};
    }
    case tower::PairClass::Tag::SameRay: {
      double u2 = rng.between(-span, span);
      if (u2 == u1) u2 = -u1;
      return {{u1, t1}, {u2, t1}};
    }
    case tower::PairClass::Tag::Generic: break;
  }
  const double u2 = rng.between(-span, span);
  const double t2 = rng.between(0.0, 2.0 * pi);
  return {{u1, t1}, {u2, t2}};
}

/// Random point of the canonical domain, away from the boundary.
inline Complex sample_point(Uniform& rng, const hypgeo::CanonicalDomain& d) {
  return std::visit(hypgeo::overloaded{
                        [&](hypgeo::UnitDisk) { return std::polar(0.95 * std::sqrt(rng.next()), rng.between(0, 2 * pi)); },
                        [&](hypgeo::RightHalfPlane) { return Complex{rng.between(0.05, 5.0), rng.between(-5.0, 5.0)}; },
                        [&](hypgeo::HorizontalStrip) {
                          return Complex{rng.between(-5.0, 5.0), rng.between(-0.95, 0.95) * pi / 2.0};
                        },
                        [&](const hypgeo::SymmetricAnnulus& a) {
                          return std::polar(std::exp(rng.between(-0.9, 0.9) * a.log_R()), rng.between(0, 2 * pi));
                        },
                    },
                    d);
}

/// Tower with d_n = 2 when 3 | n and 1 otherwise, so R^{D_30} stays finite.
inline tower::PowerTower sparse_tower(double R, std::size_t stages) {
  std::vector<unsigned> d;
  for (std::size_t n = 1; n <= stages; ++n) d.push_back(n % 3 == 0 ? 2u : 1u);
  return tower::PowerTower(R, d);
}

inline boundary::SyntheticSystem family(const std::string& name, std::size_t N) {
  if (name == "disk-mobius") return boundary::systems::disk_to_boundary();
  if (name == "disk-alternating") return boundary::systems::disk_alternating();
  if (name == "half-plane-dilation") return boundary::systems::half_plane_dilation();
  if (name == "strip-translation") return boundary::systems::strip_translation();
  if (name == "tower") return boundary::systems::tower_system(sparse_tower(1.5, N));
  fail(Errc::ConfigError, "unknown system family '" + name + "'");
}

class Runner {
 public:
  Runner(ExperimentConfig cfg, std::filesystem::path out, bool fail_fast = false)
      : cfg_(std::move(cfg)), out_(std::move(out)), fail_fast_(fail_fast) {
    // The output directory is left out so that reruns elsewhere compare equal.
    auto echo = to_toml(cfg_);
    echo.erase("out");
    std::ostringstream os;
    os << echo;
    report_.config_echo = os.str();
  }

  RunReport run() {
    const auto start = std::chrono::steady_clock::now();
    try {
      if (cfg_.runs("trichotomy") && cfg_.trichotomy) trichotomy(*cfg_.trichotomy);
      if (cfg_.runs("modelmap") && cfg_.modelmap) modelmap(*cfg_.modelmap);
      if (cfg_.runs("silhouette") && cfg_.silhouette) silhouette(*cfg_.silhouette);
      if (cfg_.runs("boundary") && cfg_.boundary) boundary(*cfg_.boundary);
      if (cfg_.runs("render") && cfg_.render) render(*cfg_.render);
    } catch (const StopRun&) {
    }
    write_json(report_.to_json(), out_ / "report.json");
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(out_ / "run_timing.txt", "wall_seconds " + fmt17(report_.wall_seconds) + "\n");
    return report_;
  }

 private:
  void record(Check c) {
    const bool ok = c.passed;
    report_.checks.push_back(std::move(c));
    if (!ok && fail_fast_) throw StopRun{};
  }

  // Runs body; a wanderlab::Error becomes a failed check carrying its code.
  void guarded(const std::string& name, const std::function<void(Check&)>& body) {
    Check c{name, true, "", Json::object()};
    try {
      body(c);
    } catch (const Error& e) {
      c.passed = false;
      c.detail = e.what();
    }
    record(std::move(c));
  }

  void trichotomy(const TrichotomyConfig& tc) {
    const auto tower = tower::PowerTower::constant(tc.R, static_cast<unsigned>(tc.degree), static_cast<std::size_t>(tc.N));
    tower::PairDistanceOptions opts;
    opts.asymptotic_threshold = tc.asymptotic_threshold;
    Uniform rng(cfg_.seed);
    std::vector<Json> verdicts;
    using Tag = tower::PairClass::Tag;
    for (Tag tag : {Tag::SameCircle, Tag::SameRay, Tag::Generic}) {
      const std::string cls = tower::to_string(tag);
      guarded("trichotomy." + cls, [&](Check& c) {
        double worst_ratio = 0.0;
        long mismatches = 0;
        for (std::int64_t i = 0; i < tc.pairs; ++i) {
          const auto [z, w] = sample_pair(rng, tc.R, tag);
          Json v{{"class", cls}, {"index", i}, {"z", {{"u", z.u}, {"theta", z.theta}}},
                 {"w", {{"u", w.u}, {"theta", w.theta}}}};
          try {
            const auto rep = tower::trichotomy_report(tower, z, w, static_cast<std::size_t>(tc.N), 0.0, opts);
            if (rep.pair_class.tag != tag) fail(Errc::VerdictMismatch, "sampled pair classified as " +
                                                                           tower::to_string(rep.pair_class.tag));
            const auto& e = rep.trace.entries;
            worst_ratio = std::max(worst_ratio, e.back().distance / e.front().distance);
            v["verdict"] = tower::to_string(rep.verdict);
            v["d0"] = e.front().distance;
            v["dN"] = e.back().distance;
            v["limit"] = rep.limit;
            v["strictly_decreasing"] = rep.trace.strictly_decreasing;
            export_csv(rep.trace, out_ / "trichotomy" / (cls + "_" + std::to_string(i) + ".csv"));
          } catch (const Error& err) {
            ++mismatches;
            v["error"] = detail::error_name(err);
            v["detail"] = err.what();
          }
          verdicts.push_back(v);
        }
        c.metrics = Json{{"pairs", tc.pairs}, {"failures", mismatches}, {"max_dN_over_d0", worst_ratio}};
        c.passed = mismatches == 0;
        if (!c.passed) c.detail = std::to_string(mismatches) + " pairs failed their branch check";
      });
    }
    write_jsonl(verdicts, out_ / "trichotomy" / "verdicts.jsonl");
  }

  void modelmap(const ModelmapConfig& mc) {
    std::optional<modelmap::ModelLab> lab;
    Json cert;
    guarded("modelmap.params", [&](Check& c) {
      lab.emplace(modelmap::ModelLab::build(mc.r, mc.eps, mc.margin, static_cast<int>(mc.stages),
                                            static_cast<std::size_t>(mc.resolution)));
      const auto& p = lab->params();
      cert["params"] = Json{{"r", p.r}, {"eps", p.eps}, {"lambda", p.lambda}, {"R", p.R}, {"Rp", p.Rp},
                            {"delta", p.delta}, {"stages", p.stages}, {"l", p.l}, {"m", p.m}, {"x", p.x}};
      c.metrics = Json{{"lambda", p.lambda}, {"R", p.R}, {"Rp", p.Rp}};
    });
    if (!lab) {
      write_json(cert, out_ / "modelmap" / "certification.json");
      return;
    }
    export_csv(lab->component().boundary(), out_ / "modelmap" / "phi_boundary.csv");
    Json stages = Json::array();
    for (long n = 0; n < lab->params().stages; ++n) {
      guarded("modelmap.containment." + std::to_string(n), [&](Check& c) {
        const auto rep = modelmap::verify_containment(*lab, n, static_cast<std::size_t>(mc.samples));
        c.metrics = Json{{"method", rep.method},
                         {"samples", rep.samples},
                         {"min_clearance", rep.min_clearance},
                         {"padding", rep.padding},
                         {"certified_clearance", rep.certified_clearance},
                         {"eps_n", rep.eps_n},
                         {"budget", rep.budget},
                         {"worst_point", detail::point_json(rep.worst_point)}};
        Json s = c.metrics;
        s["stage"] = n;
        s["passed"] = rep.passed;
        stages.push_back(s);
      });
    }
    cert["containment"] = stages;
    guarded("modelmap.winding", [&](Check& c) {
      const auto cube = winding_number([](Complex z) { return z * z * z; }, SampledCurve::circle(0.0, 1.0, 64), 0.0);
      const auto big = winding_number(modelmap::phi, SampledCurve::circle(0.0, 3.0, 64), 0.0);
      const auto small = winding_number(modelmap::phi, SampledCurve::circle(0.0, 0.5, 64), 0.0);
      c.metrics = Json{{"z^3 on |z|=1", cube}, {"phi on |z|=3", big}, {"phi on |z|=1/2", small}};
      c.passed = cube == 3 && big == -1 && small == 1;
    });
    cert["winding"] = report_.checks.back().metrics;
    guarded("modelmap.audit", [&](Check& c) {
      const auto audit = modelmap::connectivity_audit(*lab, mc.audit_k);
      Json arr = Json::array();
      for (const auto& s : audit.stages) {
        Json facts = Json::array();
        for (const auto& f : s.facts) {
          facts.push_back(Json{{"name", f.name}, {"value", f.value}, {"threshold", f.threshold}, {"passed", f.passed}});
        }
        arr.push_back(Json{{"stage", s.stage},
                           {"expected", s.expected},
                           {"bounded", s.bounded},
                           {"connectivity", s.connectivity.str()},
                           {"facts", facts}});
      }
      c.metrics = Json{{"stages", arr}};
      const auto ev = silhouette::eventual_connectivity(audit.signature());
      c.metrics["signature_period"] = ev.period ? Json(*ev.period) : Json(nullptr);
    });
    cert["audit"] = report_.checks.back().metrics;
    write_json(cert, out_ / "modelmap" / "certification.json");
  }

  void silhouette(const SilhouetteConfig& sc) {
    Json out = Json::array();
    for (const auto& cs : sc.cases) {
      guarded("silhouette." + cs.name, [&](Check& c) {
        silhouette::ConnectivitySignature sig;
        sig.source = cs.name;
        for (std::size_t i = 0; i < cs.signature.size(); ++i) {
          const std::string& s = cs.signature[i];
          silhouette::Connectivity k = 1;
          if (s == "inf") {
            k = silhouette::Connectivity::infinite();
          } else {
            try {
              k = silhouette::Connectivity(std::stoull(s));
            } catch (const std::exception&) {
              fail(Errc::ConfigError, "bad connectivity '" + s + "'");
            }
          }
          sig.entries.push_back({k, cs.bounded.empty() ? true : static_cast<bool>(cs.bounded[i])});
        }
        std::optional<std::vector<double>> moduli;
        if (!cs.degrees.empty()) {
          std::vector<unsigned> d;
          for (auto v : cs.degrees) d.push_back(static_cast<unsigned>(v));
          moduli = silhouette::modulus_growth(cs.mod0, d);
        }
        std::string got;
        Json row{{"name", cs.name}};
        try {
          const auto v = silhouette::classify_silhouette(sig, moduli, cs.baker);
          got = silhouette::to_string(v.cls);
          row["verdict"] = got;
          row["eventual_connectivity"] = v.eventual.str();
          row["rule"] = v.rule;
          row["contracting_lamination"] = v.contracting_lamination ? Json(*v.contracting_lamination) : Json(nullptr);
          row["isometric_lamination"] = v.isometric_lamination ? Json(*v.isometric_lamination) : Json(nullptr);
        } catch (const Error& e) {
          if (e.code() == Errc::ConfigError) throw;
          got = detail::error_name(e);
          row["error"] = got;
          row["detail"] = e.what();
          const auto ev = silhouette::eventual_connectivity(sig);
          if (ev.period) row["period"] = *ev.period;
        }
        out.push_back(row);
        c.metrics = row;
        c.passed = cs.expect.empty() || cs.expect == got;
        if (!c.passed) c.detail = "expected " + cs.expect + ", got " + got;
      });
    }
    write_json(out, out_ / "silhouette" / "verdicts.json");
  }

  void boundary(const BoundaryConfig& bc) {
    const auto N = static_cast<long>(bc.N);
    Uniform rng(cfg_.seed ^ 0x9e3779b97f4a7c15ULL);
    for (const auto& name : bc.families) {
      guarded("boundary.shadowing." + name, [&](Check& c) {
        const auto sys = family(name, static_cast<std::size_t>(N));
        double worst = 0.0;
        for (std::int64_t i = 0; i < bc.pairs; ++i) {
          const Complex z0 = sample_point(rng, sys.base_metric);
          const Complex z1 = sample_point(rng, sys.base_metric);
          const auto rep = boundary::shadowing_check(sys, z0, z1, N);
          for (const auto& e : rep.entries) {
            if (e.bound > 0.0) worst = std::max(worst, e.separation / e.bound);
          }
        }
        c.metrics = Json{{"pairs", bc.pairs}, {"N", N}, {"max_separation_over_bound", worst}};
      });
    }
    for (const hypgeo::CanonicalDomain d :
         {hypgeo::CanonicalDomain{hypgeo::UnitDisk{}}, hypgeo::CanonicalDomain{hypgeo::RightHalfPlane{}},
          hypgeo::CanonicalDomain{hypgeo::HorizontalStrip{}}}) {
      guarded("boundary.harnack." + hypgeo::name(d), [&](Check& c) {
        double worst = 0.0;
        for (std::int64_t i = 0; i < 10 * bc.pairs; ++i) {
          const auto rep = boundary::harnack_check(d, sample_point(rng, d), sample_point(rng, d));
          worst = std::max(worst, std::abs(std::log(rep.ratio)) / std::max(2.0 * rep.distance, 1e-300));
        }
        c.metrics = Json{{"pairs", 10 * bc.pairs}, {"max_log_ratio_over_2d", worst}};
      });
    }
    guarded("boundary.loop_length", [&](Check& c) {
      const hypgeo::SymmetricAnnulus A(std::exp(2.0));
      const auto hull = boundary::topological_hull(hypgeo::CanonicalDomain{A});
      double slack = std::numeric_limits<double>::infinity();
      for (std::int64_t i = 0; i < bc.pairs; ++i) {
        const double rho = std::exp(rng.between(-1.5, 1.5));
        const double rad = rng.between(0.05, 1.0) * std::min(rho - 1.0 / A.R(), A.R() - rho);
        const Complex center = std::polar(rho, rng.between(0.0, 2.0 * pi));
        const auto rep = boundary::loop_length_bound(SampledCurve::circle(center, rad, 256), hull, A);
        slack = std::min(slack, rep.hyperbolic_length / rep.lower_bound);
      }
      c.metrics = Json{{"loops", bc.pairs}, {"min_length_over_bound", slack}};
    });
    struct Reference {
      std::string name;
      boundary::SyntheticSystem sys;
      Complex z0;
      long steps;
      boundary::Case expect;
    };
    const std::vector<Reference> refs{
        {"tower", boundary::systems::tower_system(tower::PowerTower::constant(2.0, 2, 9)), 1.2, 9, boundary::Case::A},
        {"disk-to-boundary", boundary::systems::disk_to_boundary(), 0.0, N, boundary::Case::C},
        {"disk-alternating", boundary::systems::disk_alternating(), 0.0, N, boundary::Case::B},
    };
    Json calls = Json::array();
    for (const auto& ref : refs) {
      guarded("boundary.reference." + ref.name, [&](Check& c) {
        const auto trace = boundary::delta_sequence(ref.sys, ref.z0, ref.steps);
        export_csv(trace, out_ / "boundary" / (ref.name + ".csv"));
        boundary::ConvergenceOptions opts;
        opts.threshold = bc.threshold;
        const auto call = boundary::convergence_class(trace, opts);
        c.metrics = Json{{"case", boundary::to_string(call.kind)},
                         {"approaching", call.approaching},
                         {"bounded_below", call.bounded_below}};
        c.passed = call.kind == ref.expect;
        calls.push_back(Json{{"name", ref.name}, {"call", c.metrics}});
      });
    }
    write_json(calls, out_ / "boundary" / "classification.json");
  }

  void render(const RenderConfig& rc) {
    guarded("render.foliation", [&](Check& c) {
      const auto pic = render_foliation(rc.R, static_cast<long>(rc.circles), static_cast<long>(rc.rays),
                                        out_ / "render" / rc.file, tool_version);
      // Heights G(pi log r_k / (2 log R)) must be equally spaced.
      double spread = 0.0;
      const double c0 = pi / (2.0 * std::log(rc.R));
      for (std::size_t k = 2; k < pic.radii.size(); ++k) {
        const double g2 = inverse_gudermannian(c0 * std::log(pic.radii[k]));
        const double g1 = inverse_gudermannian(c0 * std::log(pic.radii[k - 1]));
        const double g0 = inverse_gudermannian(c0 * std::log(pic.radii[k - 2]));
        spread = std::max(spread, std::abs((g2 - g1) - (g1 - g0)));
      }
      c.metrics = Json{{"circles", pic.radii.size()}, {"rays", rc.rays}, {"spacing_defect", spread}};
      c.passed = spread < 1e-9;
    });
  }

  ExperimentConfig cfg_;
  std::filesystem::path out_;
  bool fail_fast_;
  RunReport report_;
};

/// Runs the experiment; artifacts go to `out`.
inline RunReport run(const ExperimentConfig& cfg, const std::filesystem::path& out, bool fail_fast = false) {
  return Runner(cfg, out, fail_fast).run();
}

}  // namespace wanderlab::cli
