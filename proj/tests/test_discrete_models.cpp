#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "sle/discrete_models.hpp"
#include "sle/rng.hpp"
#include "sle/stats.hpp"

using namespace sle;
using discrete::HexBoundary;
using discrete::HexColor;
using discrete::HexColoring;
using discrete::LatticeGraph;
using discrete::SpanningTree;

namespace {

// Exact LERW outcome distribution by probability-tree enumeration with
// depth pruning; the mass below the cutoff is vanishingly small for the
// small graphs used here.
void enumerate_lerw(const LatticeGraph& g, std::vector<int>& walk, double prob,
                    const std::unordered_set<int>& targets, int depth_cap,
                    std::map<std::vector<int>, double>& out) {
  const int v = walk.back();
  if (targets.count(v)) {
    out[discrete::loop_erase(walk, targets)] += prob;
    return;
  }
  if (depth_cap == 0 || prob < 1e-16) return;
  const auto& nb = g.adj[v];
  for (int w : nb) {
    walk.push_back(w);
    enumerate_lerw(g, walk, prob / nb.size(), targets, depth_cap - 1, out);
    walk.pop_back();
  }
}

// Kirchhoff / matrix-tree spanning tree count via integer Bareiss
// elimination of the reduced Laplacian.
long long matrix_tree_count(const LatticeGraph& g) {
  const int n = g.n - 1;
  std::vector<std::vector<long long>> a(n, std::vector<long long>(n, 0));
  for (int v = 1; v < g.n; ++v) {
    a[v - 1][v - 1] = static_cast<long long>(g.adj[v].size());
    for (int w : g.adj[v])
      if (w >= 1) a[v - 1][w - 1] -= 1;
  }
  long long prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      for (auto& row : a) (void)row;
      for (int c = 0; c < n; ++c) a[k][c] = -a[k][c];
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return a[n - 1][n - 1];
}

// All spanning trees of a small graph by edge-subset enumeration.
std::set<std::set<std::pair<int, int>>> enumerate_spanning_trees(
    const LatticeGraph& g) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < g.n; ++v)
    for (int w : g.adj[v])
      if (v < w) edges.emplace_back(v, w);
  std::set<std::set<std::pair<int, int>>> trees;
  const int m = static_cast<int>(edges.size());
  REQUIRE(m <= 20);
  for (int mask = 0; mask < (1 << m); ++mask) {
    if (__builtin_popcount(mask) != g.n - 1) continue;
    std::vector<int> uf(g.n);
    for (int i = 0; i < g.n; ++i) uf[i] = i;
    const std::function<int(int)> find = [&](int p) {
      while (p != uf[p]) p = uf[p] = uf[uf[p]];
      return p;
    };
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask & (1 << e))) continue;
      const int a = find(edges[e].first), b = find(edges[e].second);
      if (a == b)
        acyclic = false;
      else
        uf[a] = b;
    }
    if (!acyclic) continue;
    std::set<std::pair<int, int>> t;
    for (int e = 0; e < m; ++e)
      if (mask & (1 << e)) t.insert(edges[e]);
    trees.insert(std::move(t));
  }
  return trees;
}

std::set<std::pair<int, int>> tree_edge_set(const SpanningTree& t) {
  std::set<std::pair<int, int>> s;
  for (auto [v, w] : t.edges())
    s.insert({std::min(v, w), std::max(v, w)});
  return s;
}

}  // namespace

TEST_CASE("loop_erase: hand-traced inductive rule") {
  using discrete::loop_erase;
  const std::unordered_set<int> t2{2};
  CHECK(loop_erase(std::vector<int>{0, 1, 2}, t2) == std::vector<int>{0, 1, 2});
  CHECK(loop_erase(std::vector<int>{0, 1, 0, 2}, t2) == std::vector<int>{0, 2});
  CHECK(loop_erase(std::vector<int>{0, 1, 0, 1, 2}, t2) ==
        std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(loop_erase(std::vector<int>{0, 1}, t2), std::domain_error);
  CHECK_THROWS_AS(loop_erase(std::vector<int>{0, 2, 1, 2}, t2),
                  std::domain_error);
}

TEST_CASE("loop_erase: simple output, idempotent") {
  rng::Stream rnd(5);
  const LatticeGraph g = discrete::make_grid_graph(5, 5);
  const std::unordered_set<int> targets{24};
  for (int rep = 0; rep < 50; ++rep) {
    // random walk to the target
    std::vector<int> walk{0};
    while (!targets.count(walk.back())) {
      const auto& nb = g.adj[walk.back()];
      walk.push_back(nb[rnd.below(nb.size())]);
    }
    const auto le = discrete::loop_erase(walk, targets);
    std::set<int> seen(le.begin(), le.end());
    CHECK(seen.size() == le.size());  // simple
    CHECK(le.front() == 0);
    CHECK(le.back() == 24);
    CHECK(discrete::loop_erase(le, targets) == le);  // idempotent
  }
}

TEST_CASE("lerw: forced paths") {
  const LatticeGraph path = discrete::make_path_graph(3);
  for (std::uint64_t s : {1ull, 2ull, 3ull})
    CHECK(discrete::lerw(path, 0, {2}, s) == std::vector<int>{0, 1, 2});
  const LatticeGraph two = discrete::make_path_graph(2);
  CHECK(discrete::lerw(two, 0, {1}, 9) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(discrete::lerw(two, 0, {}, 1), std::domain_error);
}

TEST_CASE("lerw: triangle distribution against the enumeration oracle") {
  const LatticeGraph tri = discrete::make_cycle_graph(3);  // u=0, a=1, b=2
  const std::unordered_set<int> targets{2};

  std::map<std::vector<int>, double> oracle;
  std::vector<int> walk{0};
  enumerate_lerw(tri, walk, 1.0, targets, 60, oracle);
  REQUIRE(oracle.size() == 2);
  const double p_direct = oracle.at({0, 2});
  CHECK(p_direct == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(oracle.at({0, 1, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  const int n = 100000;
  int direct = 0;
  for (int s = 0; s < n; ++s)
    if (discrete::lerw(tri, 0, targets, 10000 + s).size() == 2) ++direct;
  const double phat = static_cast<double>(direct) / n;
  const double sigma = std::sqrt(p_direct * (1 - p_direct) / n);
  CHECK(std::fabs(phat - p_direct) < 3.0 * sigma);
}

TEST_CASE("wilson_ust: unique tree comes back unchanged") {
  LatticeGraph tree;
  tree.n = 5;
  tree.adj.resize(5);
  tree.add_edge(0, 1);
  tree.add_edge(1, 2);
  tree.add_edge(1, 3);
  tree.add_edge(3, 4);
  for (std::uint64_t s : {11ull, 22ull, 33ull}) {
    const auto t = discrete::wilson_ust(tree, s);
    CHECK(t.is_spanning_tree_of(tree));
    CHECK(tree_edge_set(t) ==
          std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {1, 3}, {3, 4}});
  }
}

TEST_CASE("wilson_ust: uniform over the four trees of C4") {
  const LatticeGraph c4 = discrete::make_cycle_graph(4);
  const auto trees = enumerate_spanning_trees(c4);
  REQUIRE(trees.size() == 4);
  CHECK(matrix_tree_count(c4) == 4);

  std::map<std::set<std::pair<int, int>>, long> counts;
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    const auto t = discrete::wilson_ust(c4, 40000 + s);
    CHECK(t.is_spanning_tree_of(c4));
    counts[tree_edge_set(t)] += 1;
  }
  REQUIRE(counts.size() == 4);
  std::vector<long> cnt;
  std::vector<double> expected;
  for (const auto& [k, v] : counts) {
    cnt.push_back(v);
    expected.push_back(n / 4.0);
  }
  const double stat = mc::chi_square_stat(cnt, expected);
  CHECK(mc::chi_square_pvalue(stat, 3) > 0.001);
}

TEST_CASE("wilson_ust: 2x3 grid against the matrix-tree oracle") {
  const LatticeGraph grid = discrete::make_grid_graph(3, 2);
  CHECK(matrix_tree_count(grid) == 15);
  CHECK(enumerate_spanning_trees(grid).size() == 15);

  std::map<std::set<std::pair<int, int>>, long> counts;
  const int n = 30000;
  for (int s = 0; s < n; ++s)
    counts[tree_edge_set(discrete::wilson_ust(grid, 123456 + s))] += 1;
  REQUIRE(counts.size() == 15);
  std::vector<long> cnt;
  std::vector<double> expected;
  for (const auto& [k, v] : counts) {
    cnt.push_back(v);
    expected.push_back(n / 15.0);
  }
  CHECK(mc::chi_square_pvalue(mc::chi_square_stat(cnt, expected), 14) > 0.001);
}

TEST_CASE("wilson_ust: disconnected input rejected") {
  LatticeGraph g;
  g.n = 4;
  g.adj.resize(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  CHECK_THROWS_AS(discrete::wilson_ust(g, 1), std::domain_error);
}

TEST_CASE("LERW/UST consistency on C4") {
  // The tree path 0..2 in the UST has the LERW(0 -> {2}) distribution: both
  // go through 1 or through 3 with equal probability.
  const LatticeGraph c4 = discrete::make_cycle_graph(4);
  const int n = 40000;
  long tree_via1 = 0, lerw_via1 = 0;
  for (int s = 0; s < n; ++s) {
    const auto t = discrete::wilson_ust(c4, 777000 + s);
    const auto p = discrete::tree_path(t, 0, 2);
    if (p.size() == 3 && p[1] == 1) ++tree_via1;
    const auto l = discrete::lerw(c4, 0, {2}, 888000 + s);
    if (l.size() == 3 && l[1] == 1) ++lerw_via1;
  }
  const double f1 = static_cast<double>(tree_via1) / n;
  const double f2 = static_cast<double>(lerw_via1) / n;
  const double sigma = std::sqrt(0.5 * 0.5 / n);
  CHECK(std::fabs(f1 - f2) < 3.0 * std::sqrt(2.0) * sigma);
  CHECK(std::fabs(f1 - 0.5) < 3.0 * sigma);
}

TEST_CASE("exploration: all-blue interior hugs the yellow arc") {
  const int W = 6, H = 5;
  HexColoring col(W, H, HexBoundary{3});
  for (int r = 1; r + 1 < H; ++r)
    for (int q = 1; q + 1 < W; ++q) col.set({q, r}, HexColor::Blue);

  const auto path = discrete::explore_revealed(col);
  CHECK(path.vertices.size() > 3);
  // deterministic: a second run gives the same polyline
  const auto path2 = discrete::explore_revealed(col);
  CHECK(path.vertices == path2.vertices);
  // with everything blue the interface turns left at every interior step,
  // i.e. it wraps around the yellow boundary arc
  for (std::size_t i = 0; i < path.turns.size(); ++i)
    CHECK(path.turns[i] == +1);
}

TEST_CASE("exploration: revealed-coloring rerun reproduces the path") {
  for (std::uint64_t seed : {7ull, 8ull, 9ull, 10ull}) {
    const auto [path, col] = discrete::percolation_explore(9, 7, HexBoundary{4}, seed);
    const auto replay = discrete::explore_revealed(col);
    CHECK(path.vertices == replay.vertices);
    CHECK(path.turns == replay.turns);
  }
}

TEST_CASE("exploration: no directed hex edge is traversed twice") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [path, col] =
        discrete::percolation_explore(11, 9, HexBoundary{5}, seed);
    std::set<std::array<long long, 4>> seen;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
      const std::array<long long, 4> e{
          std::llround(path.vertices[i][0] * 1e6),
          std::llround(path.vertices[i][1] * 1e6),
          std::llround(path.vertices[i + 1][0] * 1e6),
          std::llround(path.vertices[i + 1][1] * 1e6)};
      CHECK(seen.insert(e).second);
    }
  }
}

TEST_CASE("exploration: first-turn symmetry of the fair coin") {
  const int n = 10000;
  long lefts = 0;
  for (int s = 0; s < n; ++s) {
    const auto [path, col] =
        discrete::percolation_explore(9, 7, HexBoundary{4}, 500000 + s);
    REQUIRE(!path.turns.empty());
    if (path.turns[0] == +1) ++lefts;
  }
  const double f = static_cast<double>(lefts) / n;
  CHECK(std::fabs(f - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("exploration: degenerate strip is forced") {
  const auto [p1, c1] = discrete::percolation_explore(6, 2, HexBoundary{3}, 1);
  const auto [p2, c2] = discrete::percolation_explore(6, 2, HexBoundary{3}, 2);
  CHECK(p1.vertices == p2.vertices);
}

TEST_CASE("crossing_event_rect: forced colorings and duality") {
  const auto [w, h] = discrete::rect_lattice_dims(0.5, 16);
  std::vector<HexColor> all_blue(static_cast<std::size_t>(w) * h,
                                 HexColor::Blue);
  CHECK(discrete::rect_has_blue_crossing(all_blue, w, h));
  std::vector<HexColor> all_yellow(static_cast<std::size_t>(w) * h,
                                   HexColor::Yellow);
  CHECK(!discrete::rect_has_blue_crossing(all_yellow, w, h));

  // square at p = 1/2: crossing probability near 1/2 (color-swap duality)
  const int n = 4000;
  long cross = 0;
  for (int s = 0; s < n; ++s)
    if (discrete::crossing_event_rect(0.5, 48, 60000 + s)) ++cross;
  const double f = static_cast<double>(cross) / n;
  CHECK(std::fabs(f - 0.5) < 3.0 * std::sqrt(0.25 / n) + 0.03);

  // monotone in xi: wider rectangles are harder to cross
  long easy = 0, hard = 0;
  for (int s = 0; s < 2000; ++s) {
    if (discrete::crossing_event_rect(0.2, 32, 70000 + s)) ++easy;
    if (discrete::crossing_event_rect(0.6, 32, 70000 + s)) ++hard;
  }
  CHECK(easy > hard);
}

TEST_CASE("harmonic_solve: one-point and two-point Dirichlet problems") {
  // single unset hexagon: f = mean of neighbor indicators
  HexColoring col(5, 5, HexBoundary{2});
  for (int r = 1; r < 4; ++r)
    for (int q = 1; q < 4; ++q) col.set({q, r}, HexColor::Yellow);
  col.set({2, 2}, HexColor::Unset);
  // neighbors of (2,2): (3,2),(1,2),(2,3),(2,1),(3,1),(1,3) - color two blue
  col.set({3, 2}, HexColor::Blue);
  col.set({2, 3}, HexColor::Blue);
  std::vector<double> field;
  const double resid = discrete::harmonic_solve(col, field, 1e-12);
  CHECK(resid <= 1e-12);
  CHECK(field[2 * 5 + 2] == doctest::Approx(2.0 / 6.0).epsilon(1e-10));

  // two adjacent unset hexagons: compare against the 2x2 linear solve
  col.set({1, 2}, HexColor::Unset);
  // neighbors of (1,2): (2,2)*, (0,2)Y, (1,3)Y, (1,1)Y, (2,1)Y, (0,3)Y
  // neighbors of (2,2): (1,2)*, (3,2)B, (2,3)B, (2,1)Y, (3,1)Y, (1,3)Y
  // f1 = (f2 + 0*5)/6, f2 = (f1 + 2)/6 => f2 = (2 + f2/6)/6
  const double f2 = 12.0 / 35.0, f1 = f2 / 6.0;
  std::vector<double> field2;
  discrete::harmonic_solve(col, field2, 1e-12);
  CHECK(field2[2 * 5 + 2] == doctest::Approx(f2).epsilon(1e-10));
  CHECK(field2[2 * 5 + 1] == doctest::Approx(f1).epsilon(1e-10));
}

TEST_CASE("harmonic explorer: runs, stays in range, residuals meet tol") {
  const auto path = discrete::harmonic_explorer(8, 6, HexBoundary{4}, 1e-10, 42);
  CHECK(path.vertices.size() >= 3);
}

TEST_CASE("harmonic explorer: f-value at a fixed hexagon is a martingale") {
  const int W = 8, H = 6;
  const discrete::HexCoord probe{4, 3};

  HexColoring base(W, H, HexBoundary{4});
  std::vector<double> f0_field;
  discrete::harmonic_solve(base, f0_field, 1e-12);
  const double f0 = f0_field[probe.r * W + probe.q];
  CHECK(f0 > 0.0);
  CHECK(f0 < 1.0);

  mc::RunningStat drift;
  const int n = 4000;
  for (int s = 0; s < n; ++s) {
    HexColoring final_col(W, H, HexBoundary{4});
    discrete::harmonic_explorer(W, H, HexBoundary{4}, 1e-10, 424200 + s,
                                &final_col);
    std::vector<double> field;
    discrete::harmonic_solve(final_col, field, 1e-10);
    drift.push(field[probe.r * W + probe.q] - f0);
  }
  const auto est = drift.estimate();
  CHECK(std::fabs(est.mean) <= 3.0 * est.std_err + 1e-9);
}

TEST_CASE("peano: 1x1 cell domain gives the winding S-path") {
  const auto dom = discrete::make_peano_domain(2, 2);
  // contracted ids: super = 0, (0,1) = 1, (1,1) = 2
  REQUIRE(dom.graph.n == 3);
  SpanningTree tree;
  tree.root = 0;
  tree.parent = {0, 0, 1};  // left edge (0,1)-(0,0), top edge (1,1)-(0,1)
  REQUIRE(tree.is_spanning_tree_of(dom.graph));

  const auto curve = discrete::peano_curve(dom, tree);
  CHECK(curve.enclosed_count == 10);
  REQUIRE(curve.points.size() == 10);
  const std::vector<std::array<double, 2>> expect{
      {-0.25, 0.75}, {-0.25, 1.25}, {0.25, 1.25}, {0.75, 1.25},
      {1.25, 1.25},  {1.25, 0.75},  {0.75, 0.75}, {0.25, 0.75},
      {0.25, 0.25},  {0.75, 0.25}};
  CHECK(curve.points == expect);

  const auto dt = discrete::dual_tree(dom, tree);
  CHECK(dt.n_vertices == 2);
  CHECK(dt.is_spanning_tree());
}

TEST_CASE("peano: dual tree is spanning and curve fills the region") {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 3}, {4, 3}, {5, 4}}) {
    const auto dom = discrete::make_peano_domain(m, n);
    for (std::uint64_t s : {1ull, 2ull, 3ull}) {
      const auto tree = discrete::wilson_ust(dom.graph, s);
      const auto dt = discrete::dual_tree(dom, tree);
      CHECK(dt.is_spanning_tree());
      const auto curve = discrete::peano_curve(dom, tree);
      // space filling at its scale: every enclosed refined vertex once
      CHECK(curve.points.size() == curve.enclosed_count);
      // steps = vertices - 1
      CHECK(curve.points.size() >= 4);
    }
  }
}

TEST_CASE("peano: rejects a non-spanning tree") {
  const auto dom = discrete::make_peano_domain(3, 3);
  SpanningTree bogus;
  bogus.root = 0;
  bogus.parent.assign(dom.graph.n, 0);
  bogus.parent[0] = 0;
  // parent = 0 for everyone is not generally a tree of the grid
  bool valid = bogus.is_spanning_tree_of(dom.graph);
  if (!valid) CHECK_THROWS_AS(discrete::peano_curve(dom, bogus), std::domain_error);
}
