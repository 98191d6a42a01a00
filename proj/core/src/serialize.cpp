#include "sle/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace sle::io {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::vector<double>> read_csv_numeric(std::istream& is,
                                                  std::size_t n_cols) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_skipped = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != n_cols)
      throw std::runtime_error("csv: unexpected column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_trace_csv(std::ostream& os, const loewner::Trace& tr) {
  os << "t,re,im\n";
  for (std::size_t k = 0; k < tr.points.size(); ++k)
    os << g17(tr.times[k]) << ',' << g17(tr.points[k].real()) << ','
       << g17(tr.points[k].imag()) << '\n';
}

loewner::Trace read_trace_csv(std::istream& is) {
  loewner::Trace tr;
  for (const auto& row : read_csv_numeric(is, 3)) {
    tr.times.push_back(row[0]);
    tr.points.emplace_back(row[1], row[2]);
  }
  return tr;
}

void write_driver_csv(std::ostream& os, const loewner::Driver& d) {
  os << "t,u\n";
  for (std::size_t k = 0; k < d.times.size(); ++k)
    os << g17(d.times[k]) << ',' << g17(d.values[k]) << '\n';
}

loewner::Driver read_driver_csv(std::istream& is) {
  loewner::Driver d;
  for (const auto& row : read_csv_numeric(is, 2)) {
    d.times.push_back(row[0]);
    d.values.push_back(row[1]);
  }
  return d;
}

void write_path_csv(std::ostream& os,
                    std::span<const std::array<double, 2>> points) {
  os << "x,y\n";
  for (const auto& p : points) os << g17(p[0]) << ',' << g17(p[1]) << '\n';
}

void write_coloring_csv(std::ostream& os, const discrete::HexColoring& col) {
  os << "q,r,color\n";
  for (int r = 0; r < col.height; ++r)
    for (int q = 0; q < col.width; ++q) {
      const auto c = col.at({q, r});
      const char* name = c == discrete::HexColor::Blue     ? "blue"
                         : c == discrete::HexColor::Yellow ? "yellow"
                                                           : "unset";
      os << q << ',' << r << ',' << name << '\n';
    }
}

void write_tree_csv(std::ostream& os, const discrete::SpanningTree& t) {
  os << "vertex,parent\n";
  for (std::size_t v = 0; v < t.parent.size(); ++v)
    os << v << ',' << t.parent[v] << '\n';
}

namespace {

struct Bounds {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  void add(double x, double y) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
};

std::string svg_open(const Bounds& b, double scale, double pad) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
  s += g9((b.lo_x) * scale - pad) + " " + g9(-(b.hi_y) * scale - pad) + " " +
       g9((b.hi_x - b.lo_x) * scale + 2 * pad) + " " +
       g9((b.hi_y - b.lo_y) * scale + 2 * pad) + "\">\n";
  return s;
}

}  // namespace

std::string svg_polyline(std::span<const loewner::Complex> points,
                         double px_per_unit) {
  Bounds b;
  for (const auto& p : points) b.add(p.real(), p.imag());
  std::string s = svg_open(b, px_per_unit, 10.0);
  s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (const auto& p : points) {
    s += g9(p.real() * px_per_unit) + "," + g9(-p.imag() * px_per_unit) + " ";
  }
  s += "\"/>\n</svg>\n";
  return s;
}

std::string svg_path_2d(std::span<const std::array<double, 2>> points,
                        double px_per_unit) {
  Bounds b;
  for (const auto& p : points) b.add(p[0], p[1]);
  std::string s = svg_open(b, px_per_unit, 10.0);
  s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (const auto& p : points)
    s += g9(p[0] * px_per_unit) + "," + g9(-p[1] * px_per_unit) + " ";
  s += "\"/>\n</svg>\n";
  return s;
}

std::string svg_hex_tiling(const discrete::HexColoring& col,
                           const discrete::LatticePath* path) {
  // 10 px hexagon edge; hexagon centers 10*sqrt(3) px apart
  const double edge = 10.0;
  const double unit = edge * std::sqrt(3.0);
  Bounds b;
  for (int r = 0; r < col.height; ++r)
    for (int q = 0; q < col.width; ++q) {
      const auto c = col.center({q, r});
      b.add(c[0], c[1]);
    }
  std::string s = svg_open(b, unit, 3 * edge);
  for (int r = 0; r < col.height; ++r)
    for (int q = 0; q < col.width; ++q) {
      const auto ctr = col.center({q, r});
      const char* fill = "#cccccc";
      const auto c = col.at({q, r});
      if (c == discrete::HexColor::Blue) fill = "#4477cc";
      if (c == discrete::HexColor::Yellow) fill = "#eecc44";
      s += "<polygon fill=\"";
      s += fill;
      s += "\" stroke=\"white\" stroke-width=\"0.5\" points=\"";
      for (int v = 0; v < 6; ++v) {
        const double ang = M_PI / 6.0 + v * M_PI / 3.0;
        s += g9(ctr[0] * unit + edge * std::cos(ang)) + "," +
             g9(-(ctr[1] * unit + edge * std::sin(ang))) + " ";
      }
      s += "\"/>\n";
    }
  if (path != nullptr && !path->vertices.empty()) {
    s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (const auto& p : path->vertices)
      s += g9(p[0] * unit) + "," + g9(-p[1] * unit) + " ";
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string svg_graph(const discrete::LatticeGraph& g,
                      const discrete::SpanningTree* tree, double px_per_unit) {
  Bounds b;
  for (const auto& c : g.coords) b.add(c[0], c[1]);
  std::string s = svg_open(b, px_per_unit, 10.0);
  for (int v = 0; v < g.n; ++v)
    for (int w : g.adj[v])
      if (v < w) {
        s += "<line stroke=\"#bbbbbb\" stroke-width=\"1\" x1=\"" +
             g9(g.coords[v][0] * px_per_unit) + "\" y1=\"" +
             g9(-g.coords[v][1] * px_per_unit) + "\" x2=\"" +
             g9(g.coords[w][0] * px_per_unit) + "\" y2=\"" +
             g9(-g.coords[w][1] * px_per_unit) + "\"/>\n";
      }
  if (tree != nullptr) {
    for (const auto& [v, w] : tree->edges()) {
      s += "<line stroke=\"black\" stroke-width=\"2.5\" x1=\"" +
           g9(g.coords[v][0] * px_per_unit) + "\" y1=\"" +
           g9(-g.coords[v][1] * px_per_unit) + "\" x2=\"" +
           g9(g.coords[w][0] * px_per_unit) + "\" y2=\"" +
           g9(-g.coords[w][1] * px_per_unit) + "\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

void write_reports_json(std::ostream& os,
                        std::span<const mc::VerificationReport> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["exact"] = r.exact;
    j["mean"] = r.estimate.mean;
    j["std_err"] = r.estimate.std_err;
    j["n"] = r.estimate.n;
    j["z"] = r.z_score;
    j["allowance"] = r.discretization_allowance;
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    j["runtime_s"] = r.runtime_s;
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

void write_reports_csv(std::ostream& os,
                       std::span<const mc::VerificationReport> reports) {
  os << "name,exact,mean,std_err,n,z,allowance,pass,seed,runtime_s\n";
  for (const auto& r : reports) {
    os << r.name << ',' << g17(r.exact) << ',' << g17(r.estimate.mean) << ','
       << g17(r.estimate.std_err) << ',' << r.estimate.n << ','
       << g17(r.z_score) << ',' << g17(r.discretization_allowance) << ','
       << (r.pass ? "true" : "false") << ',' << r.seed << ','
       << g17(r.runtime_s) << '\n';
  }
}

}  // namespace sle::io
