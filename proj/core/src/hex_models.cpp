#include <cmath>
#include <functional>

#include "sle/conformal.hpp"
#include "sle/discrete_models.hpp"
#include "sle/rng.hpp"

namespace sle::discrete {

namespace {

constexpr double kSqrt3Half = 0.8660254037844386;

// union-find with path halving and union by size
class UnionFind {
 public:
  explicit UnionFind(int n) : id_(n), sz_(n, 1) {
    for (int i = 0; i < n; ++i) id_[i] = i;
  }
  int find(int p) {
    while (p != id_[p]) {
      id_[p] = id_[id_[p]];
      p = id_[p];
    }
    return p;
  }
  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (sz_[a] < sz_[b]) std::swap(a, b);
    id_[b] = a;
    sz_[a] += sz_[b];
  }
  bool connected(int a, int b) { return find(a) == find(b); }

 private:
  std::vector<int> id_, sz_;
};

}  // namespace

HexColoring::HexColoring(int w, int h, HexBoundary bc)
    : width(w), height(h), boundary(bc) {
  if (w < 3 || h < 2)
    throw std::domain_error("HexColoring: domain too small");
  if (bc.start_q < 1 || bc.start_q > w - 1)
    throw std::domain_error("HexColoring: start_q out of range");
  colors.assign(static_cast<std::size_t>(w) * h, HexColor::Unset);
  // Two boundary arcs: Yellow = bottom-left of start + left column + top row,
  // Blue = bottom-right of start + right column below the top row.
  for (int q = 0; q < w; ++q) {
    set({q, 0}, q < bc.start_q ? HexColor::Yellow : HexColor::Blue);
    set({q, h - 1}, HexColor::Yellow);
  }
  for (int r = 1; r + 1 < h; ++r) {
    set({0, r}, HexColor::Yellow);
    set({w - 1, r}, HexColor::Blue);
  }
}

std::array<HexCoord, 6> HexColoring::neighbors(HexCoord c) {
  return {HexCoord{c.q + 1, c.r}, HexCoord{c.q - 1, c.r},
          HexCoord{c.q, c.r + 1}, HexCoord{c.q, c.r - 1},
          HexCoord{c.q + 1, c.r - 1}, HexCoord{c.q - 1, c.r + 1}};
}

std::array<double, 2> HexColoring::center(HexCoord c) const {
  return {c.q + 0.5 * c.r, kSqrt3Half * c.r};
}

namespace {

// The two hexagons adjacent to both members of an adjacent pair.
std::array<HexCoord, 2> common_neighbors(HexCoord a, HexCoord b) {
  const int dq = b.q - a.q, dr = b.r - a.r;
  if (dq == 1 && dr == 0)
    return {HexCoord{a.q, a.r + 1}, HexCoord{a.q + 1, a.r - 1}};
  if (dq == -1 && dr == 0)
    return {HexCoord{a.q - 1, a.r + 1}, HexCoord{a.q, a.r - 1}};
  if (dq == 0 && dr == 1)
    return {HexCoord{a.q + 1, a.r}, HexCoord{a.q - 1, a.r + 1}};
  if (dq == 0 && dr == -1)
    return {HexCoord{a.q - 1, a.r}, HexCoord{a.q + 1, a.r - 1}};
  if (dq == 1 && dr == -1)
    return {HexCoord{a.q + 1, a.r}, HexCoord{a.q, a.r - 1}};
  if (dq == -1 && dr == 1)
    return {HexCoord{a.q - 1, a.r}, HexCoord{a.q, a.r + 1}};
  throw std::invalid_argument("common_neighbors: hexagons not adjacent");
}

std::array<double, 2> vertex_point(const HexColoring& col, HexCoord a,
                                   HexCoord b, HexCoord f) {
  const auto ca = col.center(a), cb = col.center(b), cf = col.center(f);
  return {(ca[0] + cb[0] + cf[0]) / 3.0, (ca[1] + cb[1] + cf[1]) / 3.0};
}

// Interface walk shared by the exploration process and the harmonic
// explorer: `decide` supplies the color of an Unset hexagon when it is first
// met. Keeps Blue on the right, Yellow on the left; terminates when the
// vertex ahead leaves the domain (the second meeting point of the arcs).
LatticePath interface_walk(
    HexColoring& col,
    const std::function<HexColor(const HexColoring&, HexCoord)>& decide) {
  const int s = col.boundary.start_q;
  HexCoord left{s - 1, 0}, right{s, 0}, behind{s, -1};

  LatticePath path;
  path.vertices.push_back(vertex_point(col, left, right, behind));

  const long max_steps = 40L * col.width * col.height + 1000;
  for (long step = 0; step < max_steps; ++step) {
    const auto commons = common_neighbors(left, right);
    const HexCoord ahead = commons[0] == behind ? commons[1] : commons[0];
    if (!col.in_range(ahead)) {
      path.vertices.push_back(vertex_point(col, left, right, ahead));
      return path;
    }
    if (col.at(ahead) == HexColor::Unset) col.set(ahead, decide(col, ahead));
    path.vertices.push_back(vertex_point(col, left, right, ahead));
    if (col.at(ahead) == HexColor::Blue) {
      behind = right;
      right = ahead;
      path.turns.push_back(+1);  // blue ahead: turn left
    } else {
      behind = left;
      left = ahead;
      path.turns.push_back(-1);
    }
  }
  throw std::runtime_error("interface_walk: step limit exceeded");
}

}  // namespace

std::pair<LatticePath, HexColoring> percolation_explore(int width, int height,
                                                        HexBoundary bc,
                                                        std::uint64_t seed) {
  HexColoring col(width, height, bc);
  rng::Stream rnd(seed);
  auto path = interface_walk(col, [&rnd](const HexColoring&, HexCoord) {
    return rnd.coin() ? HexColor::Blue : HexColor::Yellow;
  });
  return {std::move(path), std::move(col)};
}

LatticePath explore_revealed(const HexColoring& coloring) {
  HexColoring copy = coloring;
  return interface_walk(copy, [](const HexColoring&, HexCoord) -> HexColor {
    throw std::domain_error("explore_revealed: walk met an Unset hexagon");
  });
}

double harmonic_solve(const HexColoring& col, std::vector<double>& field,
                      double tol, long max_iters) {
  const std::size_t size = col.colors.size();
  if (field.size() != size) {
    field.assign(size, 0.5);
  }
  for (int r = 0; r < col.height; ++r)
    for (int q = 0; q < col.width; ++q) {
      const HexColor c = col.at({q, r});
      if (c == HexColor::Blue) field[r * col.width + q] = 1.0;
      if (c == HexColor::Yellow) field[r * col.width + q] = 0.0;
    }
  double resid = 0.0;
  for (long it = 0; it < max_iters; ++it) {
    resid = 0.0;
    for (int r = 0; r < col.height; ++r)
      for (int q = 0; q < col.width; ++q) {
        if (col.at({q, r}) != HexColor::Unset) continue;
        double sum = 0.0;
        int cnt = 0;
        for (const auto& nb : HexColoring::neighbors({q, r})) {
          if (!col.in_range(nb)) continue;
          sum += field[nb.r * col.width + nb.q];
          ++cnt;
        }
        const double v = cnt ? sum / cnt : 0.0;
        resid = std::max(resid, std::fabs(v - field[r * col.width + q]));
        field[r * col.width + q] = v;
      }
    if (resid <= tol) return resid;
  }
  throw std::runtime_error("harmonic_solve: no convergence within cap");
}

LatticePath harmonic_explorer(int width, int height, HexBoundary bc,
                              double tol, std::uint64_t seed,
                              HexColoring* final_coloring) {
  HexColoring col(width, height, bc);
  rng::Stream rnd(seed);
  std::vector<double> field;  // warm-started across steps
  auto path = interface_walk(col, [&](const HexColoring& c, HexCoord h) {
    harmonic_solve(c, field, tol);
    const double f = field[h.r * c.width + h.q];
    return rnd.uniform() < f ? HexColor::Blue : HexColor::Yellow;
  });
  if (final_coloring != nullptr) *final_coloring = col;
  return path;
}

std::pair<int, int> rect_lattice_dims(double aspect_xi, int lattice_size) {
  // Geometric aspect W/H = L/pi where L is the pi-extremal length of the
  // xi-rectangle. Rows are sqrt(3)/2 apart, columns 1 apart.
  const double aspect = conformal::rect_geometry_from_xi(aspect_xi).L / M_PI;
  const int h = lattice_size;
  const int w =
      std::max(3, static_cast<int>(std::lround(aspect * h * kSqrt3Half)));
  return {w, h};
}

bool rect_has_blue_crossing(std::span<const HexColor> colors, int w, int h) {
  // offset rows: odd rows shifted right by half a site
  UnionFind uf(w * h + 2);
  const int kLeft = w * h, kRight = w * h + 1;
  const auto idx = [w](int i, int j) { return j * w + i; };
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      if (colors[idx(i, j)] != HexColor::Blue) continue;
      if (i == 0) uf.merge(idx(i, j), kLeft);
      if (i == w - 1) uf.merge(idx(i, j), kRight);
      // neighbors: right, and the four in the row above (two of them)
      if (i + 1 < w && colors[idx(i + 1, j)] == HexColor::Blue)
        uf.merge(idx(i, j), idx(i + 1, j));
      if (j + 1 < h) {
        const int shift = (j % 2 == 0) ? -1 : +1;
        if (colors[idx(i, j + 1)] == HexColor::Blue)
          uf.merge(idx(i, j), idx(i, j + 1));
        const int i2 = i + shift;
        if (i2 >= 0 && i2 < w && colors[idx(i2, j + 1)] == HexColor::Blue)
          uf.merge(idx(i, j), idx(i2, j + 1));
      }
    }
  return uf.connected(kLeft, kRight);
}

bool crossing_event_rect(double aspect_xi, int lattice_size,
                         std::uint64_t seed) {
  if (lattice_size < 8)
    throw std::domain_error("crossing_event_rect: lattice_size must be >= 8");
  const auto [w, h] = rect_lattice_dims(aspect_xi, lattice_size);
  std::vector<HexColor> colors(static_cast<std::size_t>(w) * h);
  const rng::Counter ctr(seed);
  for (std::size_t k = 0; k < colors.size(); ++k)
    colors[k] = (ctr.bits(k) >> 63) ? HexColor::Blue : HexColor::Yellow;
  return rect_has_blue_crossing(colors, w, h);
}

}  // namespace sle::discrete
