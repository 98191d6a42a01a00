#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "sle/discrete_models.hpp"
#include "sle/loewner.hpp"
#include "sle/montecarlo.hpp"

namespace sle::io {

// CSV uses %.17g so a write/read cycle is bit-exact.
void write_trace_csv(std::ostream& os, const loewner::Trace& tr);
loewner::Trace read_trace_csv(std::istream& is);

void write_driver_csv(std::ostream& os, const loewner::Driver& d);
loewner::Driver read_driver_csv(std::istream& is);

void write_path_csv(std::ostream& os,
                    std::span<const std::array<double, 2>> points);
void write_coloring_csv(std::ostream& os, const discrete::HexColoring& col);
void write_tree_csv(std::ostream& os, const discrete::SpanningTree& t);

// SVG: 100 px per half-plane unit with the y axis flipped; floats printed
// with 9 significant digits.
std::string svg_polyline(std::span<const loewner::Complex> points,
                         double px_per_unit = 100.0);
std::string svg_path_2d(std::span<const std::array<double, 2>> points,
                        double px_per_unit = 100.0);
// hexagon tiling at 10 px edge length, path overlaid
std::string svg_hex_tiling(const discrete::HexColoring& col,
                           const discrete::LatticePath* path = nullptr);
std::string svg_graph(const discrete::LatticeGraph& g,
                      const discrete::SpanningTree* tree = nullptr,
                      double px_per_unit = 40.0);

// Verification reports: JSON with the fixed field names
// (name, exact, mean, std_err, n, z, allowance, pass, seed, runtime_s)
// and a CSV summary table.
void write_reports_json(std::ostream& os,
                        std::span<const mc::VerificationReport> reports);
void write_reports_csv(std::ostream& os,
                       std::span<const mc::VerificationReport> reports);

}  // namespace sle::io
