#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace sle::discrete {

// ---------------------------------------------------------------------------
// Triangular-lattice site colorings (hexagons of the dual tiling)
// ---------------------------------------------------------------------------

enum class HexColor : std::uint8_t { Unset, Blue, Yellow };

// Axial coordinates (q, r) on a rhombic region; hexagon (q,r) is adjacent to
// (q+-1, r), (q, r+-1), (q+1, r-1), (q-1, r+1). Embedding:
// center = (q + r/2, r*sqrt(3)/2).
struct HexCoord {
  int q = 0;
  int r = 0;
  friend bool operator==(const HexCoord&, const HexCoord&) = default;
};

// Boundary condition: the ring of the rhombus is pre-colored into one Blue
// and one Yellow arc. The arcs meet on the bottom row between start_q-1 and
// start_q (path start) and at the top-right corner (path target).
struct HexBoundary {
  int start_q = 1;
};

struct HexColoring {
  int width = 0;
  int height = 0;
  HexBoundary boundary;
  std::vector<HexColor> colors;  // row-major, r*width + q

  HexColoring(int w, int h, HexBoundary bc);

  bool in_range(HexCoord c) const {
    return c.q >= 0 && c.q < width && c.r >= 0 && c.r < height;
  }
  bool is_boundary(HexCoord c) const {
    return c.q == 0 || c.q == width - 1 || c.r == 0 || c.r == height - 1;
  }
  HexColor at(HexCoord c) const { return colors[c.r * width + c.q]; }
  void set(HexCoord c, HexColor col) { colors[c.r * width + c.q] = col; }

  static std::array<HexCoord, 6> neighbors(HexCoord c);
  std::array<double, 2> center(HexCoord c) const;
};

// Interface path over the edges of the hexagon tiling. Each visited vertex
// is the meeting point of three mutually adjacent hexagons.
struct LatticePath {
  std::vector<std::array<double, 2>> vertices;
  std::vector<int> turns;  // +1 turned left, -1 turned right, per step
};

// Percolation exploration in the rhombic domain: colors are revealed with
// fair coin flips the first time the interface meets a hexagon. Returns the
// path and the (partially) revealed coloring.
std::pair<LatticePath, HexColoring> percolation_explore(int width, int height,
                                                        HexBoundary bc,
                                                        std::uint64_t seed);

// Deterministic re-run of the exploration on an already revealed coloring;
// throws if the walk meets an Unset hexagon.
LatticePath explore_revealed(const HexColoring& coloring);

// Harmonic explorer: an Unset hexagon met by the interface is colored Blue
// with probability f(hex), where f solves the discrete Dirichlet problem
// (1 on Blue, 0 on Yellow, harmonic on Unset) to residual <= tol.
// The revealed coloring is copied to *final_coloring when given.
LatticePath harmonic_explorer(int width, int height, HexBoundary bc,
                              double tol, std::uint64_t seed,
                              HexColoring* final_coloring = nullptr);

// Dirichlet solve on the current coloring (Gauss-Seidel, warm start allowed
// through `field`; field size must be width*height or empty).
// Returns the max residual reached.
double harmonic_solve(const HexColoring& coloring, std::vector<double>& field,
                      double tol, long max_iters = 1000000);

// ---------------------------------------------------------------------------
// Rectangle crossing (Cardy geometry)
// ---------------------------------------------------------------------------

// Triangular lattice in offset rows forming a W x H rectangle with
// W/H = L/pi from the cross-ratio parameter xi. True iff a Blue cluster
// joins the left and right columns. Colors are iid fair.
bool crossing_event_rect(double aspect_xi, int lattice_size,
                         std::uint64_t seed);

// Connectivity check on a given coloring buffer (row-major, W per row),
// used by tests with forced colorings.
bool rect_has_blue_crossing(std::span<const HexColor> colors, int w, int h);

// Lattice dimensions used by crossing_event_rect for a given xi/size.
std::pair<int, int> rect_lattice_dims(double aspect_xi, int lattice_size);

// ---------------------------------------------------------------------------
// Graphs, loop-erased walks, spanning trees
// ---------------------------------------------------------------------------

struct LatticeGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  std::vector<std::array<double, 2>> coords;  // optional embedding

  void add_edge(int a, int b);
  bool has_edge(int a, int b) const;
  bool connected() const;
};

LatticeGraph make_path_graph(int n);
LatticeGraph make_cycle_graph(int n);
LatticeGraph make_grid_graph(int w, int h);  // vertex (i,j) -> j*w + i

// Chronological loop erasure: beta(0) = walk[0] and
// beta(n+1) = walk[1 + max{m : walk[m] = beta(n)}], stopping at the first
// target. The walk must end at its first visit to `targets`.
std::vector<int> loop_erase(std::span<const int> walk,
                            const std::unordered_set<int>& targets);

// Simple random walk from u to V (uniform neighbor steps), loop-erased.
std::vector<int> lerw(const LatticeGraph& g, int u,
                      const std::unordered_set<int>& targets,
                      std::uint64_t seed);

struct SpanningTree {
  std::vector<int> parent;  // parent[root] = root
  int root = 0;

  std::vector<std::pair<int, int>> edges() const;
  bool is_spanning_tree_of(const LatticeGraph& g) const;
};

// Wilson's algorithm: root at vertex 0, then LERWs from each vertex in index
// order to the current tree. Uniform over spanning trees.
SpanningTree wilson_ust(const LatticeGraph& g, std::uint64_t seed);

// Unique tree path between two vertices.
std::vector<int> tree_path(const SpanningTree& t, int u, int v);

// ---------------------------------------------------------------------------
// UST Peano curve
// ---------------------------------------------------------------------------

// Rectangular m x n grid (delta = 1) with the bottom boundary arc from
// b = (bx,0) to c = (cx,0) identified into one wired vertex, as in the dual
// spanning tree construction.
struct PeanoDomain {
  int m = 0, n = 0;
  std::array<int, 2> b{0, 0}, c{0, 0};
  LatticeGraph graph;    // contracted graph (wired arc)
  int super = 0;         // id of the wired vertex
  std::vector<int> vid;  // grid (i,j) -> contracted id, j*m + i
  std::vector<std::array<int, 2>> coord_of;  // contracted id -> grid coords
};

PeanoDomain make_peano_domain(int m, int n);
PeanoDomain make_peano_domain(int m, int n, std::array<int, 2> b,
                              std::array<int, 2> c);

struct PeanoCurve {
  std::vector<std::array<double, 2>> points;  // on (1/2)Z^2 + (1/4,1/4)
  std::size_t enclosed_count = 0;
};

// Dual graph/tree, exposed for verification: vertices are the (m-1)x(n-1)
// interior faces plus one wired exterior vertex (id = faces).
struct DualTree {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  bool is_spanning_tree() const;
};

DualTree dual_tree(const PeanoDomain& dom, const SpanningTree& tree);

// The curve winding between the tree and its dual, from b to c. Visits every
// refined vertex enclosed by the drawn graphs exactly once.
PeanoCurve peano_curve(const PeanoDomain& dom, const SpanningTree& tree);

}  // namespace sle::discrete
