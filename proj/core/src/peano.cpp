#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "sle/discrete_models.hpp"

// All geometry here lives on the lattice scaled by 4: primal vertices at
// (4i, 4j), face centers at (4i+2, 4j+2), refined curve vertices at odd/odd
// coordinates. An axis-aligned blocker segment between even coordinates
// blocks exactly the unit moves whose midpoint it covers, which makes every
// crossing test an integer hash lookup.

namespace sle::discrete {

namespace {

using Key = long long;

Key pt_key(int x, int y) {
  return (static_cast<long long>(x) << 24) ^ (y + (1 << 20));
}

struct SegSet {
  std::unordered_set<Key> blocked;

  void add_segment(int x1, int y1, int x2, int y2) {
    if (x1 == x2) {
      for (int y = std::min(y1, y2) + 1; y < std::max(y1, y2); y += 2)
        blocked.insert(pt_key(x1, y));
    } else {
      for (int x = std::min(x1, x2) + 1; x < std::max(x1, x2); x += 2)
        blocked.insert(pt_key(x, y1));
    }
  }
  // move between refined vertices two apart
  bool crosses(int ax, int ay, int bx, int by) const {
    return blocked.count(pt_key((ax + bx) / 2, (ay + by) / 2)) != 0;
  }
};

struct GridEdge {
  int i1, j1, i2, j2;  // primal endpoints, canonical order
};

Key edge_key(int i1, int j1, int i2, int j2) {
  if (std::tie(i1, j1) > std::tie(i2, j2)) {
    std::swap(i1, i2);
    std::swap(j1, j2);
  }
  return (((static_cast<long long>(i1) * 4096 + j1) * 4096 + i2) * 4096 + j2);
}

}  // namespace

PeanoDomain make_peano_domain(int m, int n) {
  return make_peano_domain(m, n, {0, 0}, {m - 1, 0});
}

PeanoDomain make_peano_domain(int m, int n, std::array<int, 2> b,
                              std::array<int, 2> c) {
  if (m < 2 || n < 2)
    throw std::domain_error("make_peano_domain: grid must be at least 2x2");
  if (b[1] != 0 || c[1] != 0 || !(b[0] >= 0 && b[0] < c[0] && c[0] <= m - 1))
    throw std::domain_error(
        "make_peano_domain: boundary points must lie on the bottom row with "
        "b left of c");
  PeanoDomain dom;
  dom.m = m;
  dom.n = n;
  dom.b = b;
  dom.c = c;
  dom.vid.assign(static_cast<std::size_t>(m) * n, -1);
  dom.super = 0;
  dom.coord_of.push_back({b[0], 0});  // representative for the wired vertex
  int next = 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) {
      const bool on_arc = (j == 0 && i >= b[0] && i <= c[0]);
      if (on_arc) {
        dom.vid[j * m + i] = dom.super;
      } else {
        dom.vid[j * m + i] = next++;
        dom.coord_of.push_back({i, j});
      }
    }
  dom.graph.n = next;
  dom.graph.adj.resize(next);
  dom.graph.coords.resize(next);
  for (int v = 0; v < next; ++v)
    dom.graph.coords[v] = {static_cast<double>(dom.coord_of[v][0]),
                           static_cast<double>(dom.coord_of[v][1])};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) {
      const int a = dom.vid[j * m + i];
      if (i + 1 < m) {
        const int bb = dom.vid[j * m + i + 1];
        if (a != bb) dom.graph.add_edge(a, bb);
      }
      if (j + 1 < n) {
        const int bb = dom.vid[(j + 1) * m + i];
        if (a != bb) dom.graph.add_edge(a, bb);
      }
    }
  return dom;
}

namespace {

// Geometric primal edge realizing a contracted tree edge (v, parent).
GridEdge realize_edge(const PeanoDomain& dom, int v, int w) {
  const auto in_arc = [&](int i, int j) {
    return j == 0 && i >= dom.b[0] && i <= dom.c[0];
  };
  if (v != dom.super && w != dom.super) {
    const auto [i1, j1] = dom.coord_of[v];
    const auto [i2, j2] = dom.coord_of[w];
    return {i1, j1, i2, j2};
  }
  const int reg = (v == dom.super) ? w : v;
  const auto [i, j] = dom.coord_of[reg];
  // unique arc neighbor of (i,j)
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const int i2 = i + di[k], j2 = j + dj[k];
    if (i2 >= 0 && i2 < dom.m && j2 >= 0 && j2 < dom.n && in_arc(i2, j2))
      return {i, j, i2, j2};
  }
  throw std::logic_error("realize_edge: no arc neighbor found");
}

std::unordered_set<Key> tree_edge_keys(const PeanoDomain& dom,
                                       const SpanningTree& tree) {
  std::unordered_set<Key> keys;
  for (const auto& [v, w] : tree.edges()) {
    const GridEdge e = realize_edge(dom, v, w);
    keys.insert(edge_key(e.i1, e.j1, e.i2, e.j2));
  }
  // the wired arc is part of the drawn tree
  for (int i = dom.b[0]; i < dom.c[0]; ++i)
    keys.insert(edge_key(i, 0, i + 1, 0));
  return keys;
}

}  // namespace

DualTree dual_tree(const PeanoDomain& dom, const SpanningTree& tree) {
  if (!tree.is_spanning_tree_of(dom.graph))
    throw std::domain_error("dual_tree: not a spanning tree of the domain");
  const int m = dom.m, n = dom.n;
  const int fw = m - 1, fh = n - 1;
  const int exterior = fw * fh;
  const auto fid = [&](int i, int j) { return j * fw + i; };
  const auto tree_keys = tree_edge_keys(dom, tree);
  const auto in_arc_edge = [&](int i1, int j1, int i2, int j2) {
    return j1 == 0 && j2 == 0 && std::min(i1, i2) >= dom.b[0] &&
           std::max(i1, i2) <= dom.c[0];
  };

  DualTree dt;
  dt.n_vertices = exterior + 1;
  // vertical primal edges (i,j)-(i,j+1): dual joins faces (i-1,j) | (i,j)
  for (int i = 0; i < m; ++i)
    for (int j = 0; j + 1 < n; ++j) {
      if (tree_keys.count(edge_key(i, j, i, j + 1))) continue;
      const int left = (i == 0) ? exterior : fid(i - 1, j);
      const int right = (i == m - 1) ? exterior : fid(i, j);
      dt.edges.emplace_back(left, right);
    }
  // horizontal primal edges (i,j)-(i+1,j): dual joins faces (i,j-1) | (i,j)
  for (int i = 0; i + 1 < m; ++i)
    for (int j = 0; j < n; ++j) {
      if (in_arc_edge(i, j, i + 1, j)) continue;  // no dual across the arc
      if (tree_keys.count(edge_key(i, j, i + 1, j))) continue;
      const int below = (j == 0) ? exterior : fid(i, j - 1);
      const int above = (j == n - 1) ? exterior : fid(i, j);
      dt.edges.emplace_back(below, above);
    }
  return dt;
}

bool DualTree::is_spanning_tree() const {
  if (static_cast<int>(edges.size()) != n_vertices - 1) return false;
  std::vector<std::vector<int>> adj(n_vertices);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n_vertices, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  int cnt = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        q.push_back(w);
      }
  }
  return cnt == n_vertices;
}

PeanoCurve peano_curve(const PeanoDomain& dom, const SpanningTree& tree) {
  if (!tree.is_spanning_tree_of(dom.graph))
    throw std::domain_error("peano_curve: not a spanning tree of the domain");
  const int m = dom.m, n = dom.n;
  const auto tree_keys = tree_edge_keys(dom, tree);
  const auto in_arc_edge = [&](int i1, int j1, int i2, int j2) {
    return j1 == 0 && j2 == 0 && std::min(i1, i2) >= dom.b[0] &&
           std::max(i1, i2) <= dom.c[0];
  };

  SegSet walk_block, all_block;

  // primal edges and their duals
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) {
      if (i + 1 < m) {  // horizontal (i,j)-(i+1,j)
        all_block.add_segment(4 * i, 4 * j, 4 * i + 4, 4 * j);
        const bool arc = in_arc_edge(i, j, i + 1, j);
        const bool in_tree =
            arc || tree_keys.count(edge_key(i, j, i + 1, j)) != 0;
        if (in_tree)
          walk_block.add_segment(4 * i, 4 * j, 4 * i + 4, 4 * j);
        if (!arc) {
          all_block.add_segment(4 * i + 2, 4 * j - 2, 4 * i + 2, 4 * j + 2);
          if (!in_tree)
            walk_block.add_segment(4 * i + 2, 4 * j - 2, 4 * i + 2, 4 * j + 2);
        }
      }
      if (j + 1 < n) {  // vertical (i,j)-(i,j+1)
        all_block.add_segment(4 * i, 4 * j, 4 * i, 4 * j + 4);
        const bool in_tree = tree_keys.count(edge_key(i, j, i, j + 1)) != 0;
        if (in_tree)
          walk_block.add_segment(4 * i, 4 * j, 4 * i, 4 * j + 4);
        else {
          all_block.add_segment(4 * i - 2, 4 * j + 2, 4 * i + 2, 4 * j + 2);
          walk_block.add_segment(4 * i - 2, 4 * j + 2, 4 * i + 2, 4 * j + 2);
        }
        if (in_tree) {
          all_block.add_segment(4 * i - 2, 4 * j + 2, 4 * i + 2, 4 * j + 2);
        }
      }
    }

  // wired exterior dual ring around the non-arc boundary, half a unit out
  {
    const int xr = 4 * (m - 1) + 2, yt = 4 * (n - 1) + 2;
    const int xb = 4 * dom.b[0] - 2, xc = 4 * dom.c[0] + 2;
    const auto add_ring = [&](int x1, int y1, int x2, int y2) {
      if (x1 == x2 && y1 == y2) return;
      walk_block.add_segment(x1, y1, x2, y2);
      all_block.add_segment(x1, y1, x2, y2);
    };
    add_ring(xb, -2, -2, -2);
    add_ring(-2, -2, -2, yt);
    add_ring(-2, yt, xr, yt);
    add_ring(xr, yt, xr, -2);
    add_ring(xr, -2, xc, -2);
  }

  // enclosed refined vertices: flood from outside the ring box
  const int x_lo = -5, x_hi = 4 * (m - 1) + 5;
  const int y_lo = -5, y_hi = 4 * (n - 1) + 5;
  std::unordered_set<Key> outside;
  std::deque<std::pair<int, int>> q;
  for (int x = x_lo; x <= x_hi; x += 2)
    for (int y : {y_lo, y_hi}) {
      outside.insert(pt_key(x, y));
      q.emplace_back(x, y);
    }
  for (int y = y_lo; y <= y_hi; y += 2)
    for (int x : {x_lo, x_hi}) {
      if (outside.insert(pt_key(x, y)).second) q.emplace_back(x, y);
    }
  const int dx[4] = {2, -2, 0, 0}, dy[4] = {0, 0, 2, -2};
  while (!q.empty()) {
    const auto [x, y] = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (nx < x_lo || nx > x_hi || ny < y_lo || ny > y_hi) continue;
      if (all_block.crosses(x, y, nx, ny)) continue;
      if (outside.insert(pt_key(nx, ny)).second) q.emplace_back(nx, ny);
    }
  }
  std::vector<std::pair<int, int>> enclosed;
  std::unordered_set<Key> enclosed_set;
  for (int x = x_lo; x <= x_hi; x += 2)
    for (int y = y_lo; y <= y_hi; y += 2)
      if (!outside.count(pt_key(x, y))) {
        enclosed.emplace_back(x, y);
        enclosed_set.insert(pt_key(x, y));
      }

  // walk endpoints: enclosed vertices with exactly one free enclosed neighbor
  const auto free_neighbors = [&](int x, int y) {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (!enclosed_set.count(pt_key(nx, ny))) continue;
      if (walk_block.crosses(x, y, nx, ny)) continue;
      out.emplace_back(nx, ny);
    }
    return out;
  };
  std::vector<std::pair<int, int>> endpoints;
  for (const auto& [x, y] : enclosed) {
    const auto nb = free_neighbors(x, y);
    if (nb.size() == 1) endpoints.emplace_back(x, y);
    else if (nb.size() != 2)
      throw std::runtime_error("peano_curve: winding region is not a path");
  }
  if (endpoints.size() != 2)
    throw std::runtime_error("peano_curve: expected exactly two endpoints");

  const auto score = [&](std::pair<int, int> p) {
    const double bx = 4.0 * dom.b[0], cx = 4.0 * dom.c[0];
    const double db = (p.first - bx) * (p.first - bx) + p.second * p.second;
    const double dc = (p.first - cx) * (p.first - cx) + p.second * p.second;
    return db - dc;
  };
  std::pair<int, int> cur = score(endpoints[0]) <= score(endpoints[1])
                                ? endpoints[0]
                                : endpoints[1];

  PeanoCurve curve;
  curve.enclosed_count = enclosed.size();
  std::pair<int, int> prev{INT_MIN, INT_MIN};
  std::unordered_set<Key> visited;
  while (true) {
    curve.points.push_back({cur.first / 4.0, cur.second / 4.0});
    if (!visited.insert(pt_key(cur.first, cur.second)).second)
      throw std::runtime_error("peano_curve: revisited a vertex");
    const auto nb = free_neighbors(cur.first, cur.second);
    std::pair<int, int> next{INT_MIN, INT_MIN};
    int options = 0;
    for (const auto& cand : nb)
      if (cand != prev) {
        next = cand;
        ++options;
      }
    if (options == 0) break;  // reached the other endpoint
    if (options > 1)
      throw std::runtime_error("peano_curve: branching winding region");
    prev = cur;
    cur = next;
  }
  if (curve.points.size() != enclosed.size())
    throw std::runtime_error("peano_curve: curve is not space-filling");
  return curve;
}

}  // namespace sle::discrete
