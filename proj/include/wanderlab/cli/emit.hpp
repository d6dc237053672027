#pragma once

// Artifact writers: headered CSV with 17 significant digits and LF endings,
// JSON through nlohmann::ordered_json, and the foliation SVG.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wanderlab/boundary.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"
#include "wanderlab/tower.hpp"

namespace wanderlab::cli {

using Json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IOError, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) fail(Errc::IOError, "write to " + path.string() + " failed");
}

using CsvRow = std::vector<std::string>;

inline std::string csv_text(const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string out;
  const auto line = [&](const CsvRow& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

inline std::string csv_text(const tower::DistanceTrace& trace) {
  std::vector<CsvRow> rows;
  for (const auto& e : trace.entries) {
    rows.push_back({std::to_string(e.n), e.D.str(), fmt17(e.distance), fmt17(e.bound)});
  }
  return csv_text({"n", "Dn", "dn", "bound"}, rows);
}

inline std::string csv_text(const boundary::BoundaryTrace& trace) {
  std::vector<CsvRow> rows;
  for (const auto& e : trace.entries) {
    rows.push_back({std::to_string(e.n), fmt17(e.delta), fmt17(e.witness.real()), fmt17(e.witness.imag())});
  }
  return csv_text({"n", "delta", "wx", "wy"}, rows);
}

/// x,y rows of a polyline.
inline std::string csv_text(std::span<const Complex> pts) {
  std::vector<CsvRow> rows;
  for (Complex p : pts) rows.push_back({fmt17(p.real()), fmt17(p.imag())});
  return csv_text({"x", "y"}, rows);
}

template <class T>
void export_csv(const T& data, const std::filesystem::path& path) {
  write_text(path, csv_text(data));
}

inline void write_json(const Json& j, const std::filesystem::path& path) { write_text(path, j.dump(2) + "\n"); }

/// JSON lines, one object per line.
inline void write_jsonl(const std::vector<Json>& items, const std::filesystem::path& path) {
  std::string out;
  for (const auto& j : items) out += j.dump() + "\n";
  write_text(path, out);
}

struct FoliationPicture {
  std::string svg;
  std::vector<double> radii;
};

/// A(R) with `circles` leaves of the contracting foliation (red), spaced
/// uniformly in the inverse-Gudermannian height, and `rays` radial leaves (blue).
inline FoliationPicture foliation_svg(double R, long circles, long rays, const std::string& version) {
  if (!(R > 1.0)) fail(Errc::InvalidParameter, "render needs R > 1");
  if (circles < 1 || rays < 1) fail(Errc::InvalidParameter, "render needs at least one circle and one ray");
  const double log_R = std::log(R);
  // Heights y in (-pi/2, pi/2); G(y) runs over [-g_max, g_max].
  const double g_max = inverse_gudermannian(0.5 * pi * static_cast<double>(circles) / static_cast<double>(circles + 1));
  FoliationPicture pic;
  for (long k = 0; k < circles; ++k) {
    const double g = circles == 1 ? 0.0 : -g_max + 2.0 * g_max * static_cast<double>(k) / static_cast<double>(circles - 1);
    pic.radii.push_back(std::exp(2.0 * log_R * gudermannian(g) / pi));
  }
  const double size = 400.0;
  const double scale = 0.45 * size / R;
  const auto px = [&](double v) { return fmt17(0.5 * size + scale * v); };
  const auto py = [&](double v) { return fmt17(0.5 * size - scale * v); };
  const auto len = [&](double v) { return fmt17(scale * v); };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- wanderlab " << version << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<title>A(R), R = " << fmt17(R) << "</title>\n";
  os << "<g id=\"boundary\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
  for (double rad : {1.0 / R, R}) {
    os << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"" << len(rad) << "\"/>\n";
  }
  os << "</g>\n<g id=\"isometric\" stroke=\"blue\" stroke-width=\"0.8\">\n";
  for (long j = 0; j < rays; ++j) {
    const double t = 2.0 * pi * static_cast<double>(j) / static_cast<double>(rays);
    const Complex a = std::polar(1.0 / R, t);
    const Complex b = std::polar(R, t);
    os << "<line x1=\"" << px(a.real()) << "\" y1=\"" << py(a.imag()) << "\" x2=\"" << px(b.real()) << "\" y2=\""
       << py(b.imag()) << "\"/>\n";
  }
  os << "</g>\n<g id=\"contracting\" fill=\"none\" stroke=\"red\" stroke-width=\"0.8\">\n";
  for (double rad : pic.radii) {
    os << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"" << len(rad) << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  pic.svg = os.str();
  return pic;
}

inline FoliationPicture render_foliation(double R, long circles, long rays, const std::filesystem::path& out,
                                         const std::string& version) {
  auto pic = foliation_svg(R, circles, rays, version);
  write_text(out, pic.svg);
  return pic;
}

}  // namespace wanderlab::cli
