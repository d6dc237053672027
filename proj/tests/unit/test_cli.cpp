#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "wanderlab/cli/config.hpp"
#include "wanderlab/cli/emit.hpp"
#include "wanderlab/cli/runner.hpp"

using namespace wanderlab;
namespace fs = std::filesystem;

namespace {

template <class F>
void expect_error(Errc code, F&& f) {
  try {
    f();
    FAIL("expected " << to_string(code));
  } catch (const Error& err) {
    CHECK(err.code() == code);
  }
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Section of the SVG between `<g id="name"` and the closing tag.
std::string group(const std::string& svg, const std::string& name) {
  const auto start = svg.find("<g id=\"" + name + "\"");
  REQUIRE(start != std::string::npos);
  return svg.substr(start, svg.find("</g>", start) - start);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("wanderlab_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config round trip", "[cli]") {
  const auto suite = cli::reference_suite(17);
  const auto again = cli::parse_config_string(cli::to_toml_string(suite));
  CHECK(again.kind == suite.kind);
  CHECK(again.seed == 17);
  CHECK(again.out == suite.out);
  CHECK(again.trichotomy == suite.trichotomy);
  CHECK(again.modelmap == suite.modelmap);
  CHECK(again.silhouette == suite.silhouette);
  CHECK(again.boundary == suite.boundary);
  CHECK(again.render == suite.render);
  CHECK(cli::to_toml_string(again) == cli::to_toml_string(suite));

  for (const auto& entry : fs::directory_iterator(WANDERLAB_CONFIG_DIR)) {
    if (entry.path().filename().string().rfind("broken", 0) == 0) continue;
    INFO(entry.path());
    const auto cfg = cli::load_config(entry.path().string());
    CHECK(cli::to_toml_string(cli::parse_config_string(cli::to_toml_string(cfg))) == cli::to_toml_string(cfg));
  }
}

TEST_CASE("config errors", "[cli]") {
  expect_error(Errc::ConfigError, [] { cli::load_config(std::string(WANDERLAB_CONFIG_DIR) + "/broken_missing_R.toml"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = \"render\"\n[render]\nR = 2.0\ncolour = 1\n"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = \"render\"\nextra = 3\n[render]\nR = 2.0\n"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = \"render\"\n"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = \"teleport\"\n"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = \"render\"\n[render]\nR = \"big\"\n"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = \"render\"\n[render]\nR = 0.5\n"); });
  expect_error(Errc::ConfigError, [] { cli::parse_config_string("kind = = 1"); });
  expect_error(Errc::ConfigError, [] { cli::load_config("/nonexistent/wanderlab.toml"); });
}

TEST_CASE("csv headers and formatting", "[cli]") {
  const auto tw = tower::PowerTower::constant(2.0, 2, 3);
  const auto trace = tower::distance_trace(tw, LogPolarPoint{0.1, 0.0}, LogPolarPoint{0.1, 1.0}, 3);
  const auto text = cli::csv_text(trace);
  CHECK(text.rfind("n,Dn,dn,bound\n", 0) == 0);
  CHECK(count(text, "\n") == 5);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("\n3,8,") != std::string::npos);

  const auto bt = boundary::delta_sequence(boundary::systems::disk_to_boundary(), 0.0, 2);
  const auto btext = cli::csv_text(bt);
  CHECK(btext == "n,delta,wx,wy\n0,1,1,0\n1,0.5,1,0\n2,0.25,1,0\n");

  CHECK(cli::csv_text(tower::DistanceTrace{}) == "n,Dn,dn,bound\n");
  CHECK(cli::csv_text(boundary::BoundaryTrace{}) == "n,delta,wx,wy\n");
  const std::vector<Complex> pts{{0.1, -2.0}};
  CHECK(cli::csv_text(std::span<const Complex>(pts)) == "x,y\n0.10000000000000001,-2\n");

  const auto dir = scratch("csv");
  cli::export_csv(tower::DistanceTrace{}, dir / "empty.csv");
  CHECK(slurp(dir / "empty.csv") == "n,Dn,dn,bound\n");
  expect_error(Errc::IOError, [&] { cli::export_csv(bt, dir / "empty.csv" / "below.csv"); });
  fs::remove_all(dir);
}

TEST_CASE("foliation svg", "[cli]") {
  const double e = std::exp(1.0);
  const auto pic = cli::foliation_svg(e, 7, 12, "test");
  CHECK(count(group(pic.svg, "contracting"), "<circle") == 7);
  CHECK(count(group(pic.svg, "isometric"), "<line") == 12);
  CHECK(count(group(pic.svg, "boundary"), "<circle") == 2);
  CHECK(pic.svg.find("stroke=\"red\"") != std::string::npos);
  CHECK(pic.svg.find("stroke=\"blue\"") != std::string::npos);
  CHECK(pic.svg.rfind("<?xml", 0) == 0);
  CHECK(pic.svg.find("</svg>") != std::string::npos);

  // Radii equally spaced in the inverse-Gudermannian height.
  const double c = pi / (2 * std::log(e));
  std::vector<double> g;
  for (double r : pic.radii) g.push_back(std::log(std::tan(c * std::log(r) / 2 + pi / 4)));
  for (std::size_t k = 2; k < g.size(); ++k) {
    CHECK_THAT((g[k] - g[k - 1]) - (g[k - 1] - g[k - 2]), Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
  CHECK_THAT(g[3], Catch::Matchers::WithinAbs(0.0, 1e-12));
  for (double r : pic.radii) {
    CHECK(r > 1 / e);
    CHECK(r < e);
  }

  const auto thin = cli::foliation_svg(1.0001, 7, 12, "test");
  CHECK(count(group(thin.svg, "contracting"), "<circle") == 7);
  for (double r : thin.radii) CHECK(std::isfinite(r));
  CHECK(thin.svg.find("nan") == std::string::npos);
  CHECK(thin.svg.find("inf") == std::string::npos);

  // Only the version comment differs between builds.
  const auto other = cli::foliation_svg(e, 7, 12, "other");
  CHECK(std::regex_replace(other.svg, std::regex("<!--.*-->"), "") ==
        std::regex_replace(pic.svg, std::regex("<!--.*-->"), ""));

  expect_error(Errc::InvalidParameter, [] { cli::foliation_svg(1.0, 7, 12, "test"); });
  expect_error(Errc::IOError,
               [] { cli::render_foliation(2.0, 3, 3, "/proc/wanderlab/none/foliation.svg", "test"); });
}

TEST_CASE("run writes artifacts and a report", "[cli]") {
  const auto dir = scratch("run");
  auto cfg = cli::parse_config_string(R"(
kind = "trichotomy"
seed = 5
[trichotomy]
R = 2.0
degree = 2
N = 8
pairs = 4
)");
  const auto rep = cli::run(cfg, dir);
  CHECK(rep.passed());
  CHECK(rep.checks.size() == 3);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "run_timing.txt"));
  CHECK(fs::exists(dir / "trichotomy" / "verdicts.jsonl"));
  CHECK(fs::exists(dir / "trichotomy" / "Generic_3.csv"));
  const auto json = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(json["passed"] == true);
  CHECK(json["failures"].empty());
  CHECK(json["checks"].size() == 3);
  CHECK(json["tool_version"] == cli::tool_version);
  std::set<std::string> names;
  for (const auto& c : rep.checks) CHECK(names.insert(c.name).second);

  // Same seed, same bytes.
  const auto dir2 = scratch("run2");
  cli::run(cfg, dir2);
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "run_timing.txt") continue;
    CHECK(slurp(entry.path()) == slurp(dir2 / fs::relative(entry.path(), dir)));
  }
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("failed checks are reported by name", "[cli]") {
  const auto dir = scratch("fail");
  auto cfg = cli::parse_config_string(R"(
kind = "silhouette"
[[silhouette.case]]
name = "wrong"
signature = ["2", "2", "2", "2", "2", "2", "2", "2"]
baker = true
expect = "Bimodal"
[[silhouette.case]]
name = "right"
signature = ["inf", "inf", "inf", "inf", "inf", "inf", "inf", "inf"]
baker = true
expect = "Bimodal"
)");
  const auto rep = cli::run(cfg, dir);
  CHECK_FALSE(rep.passed());
  CHECK(rep.failures() == std::vector<std::string>{"silhouette.wrong"});
  const auto ff = cli::run(cfg, dir, true);
  CHECK(ff.checks.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("sampling helpers", "[cli]") {
  Uniform rng(3);
  using Tag = tower::PairClass::Tag;
  for (int i = 0; i < 200; ++i) {
    const auto [z, w] = cli::sample_pair(rng, 2.0, Tag::SameCircle);
    CHECK(z.u == w.u);
    const double gap = std::abs(tower::angular_gap(z.theta, w.theta));
    CHECK(gap >= pi / 4 - 1e-12);
    const auto [a, b] = cli::sample_pair(rng, 2.0, Tag::SameRay);
    CHECK(a.theta == b.theta);
    CHECK(a.u != b.u);
  }
  for (const auto d : {hypgeo::CanonicalDomain{hypgeo::UnitDisk{}}, hypgeo::CanonicalDomain{hypgeo::RightHalfPlane{}},
                       hypgeo::CanonicalDomain{hypgeo::HorizontalStrip{}},
                       hypgeo::CanonicalDomain{hypgeo::SymmetricAnnulus(3.0)}}) {
    for (int i = 0; i < 100; ++i) CHECK(hypgeo::density(d, cli::sample_point(rng, d)) > 0);
  }
  expect_error(Errc::ConfigError, [] { cli::family("nope", 10); });
  const auto sparse = cli::sparse_tower(1.5, 9);
  CHECK(sparse.cumulative_double(9) == 8.0);
}
