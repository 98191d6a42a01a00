#include <algorithm>
#include <queue>
#include <unordered_map>

#include "sle/discrete_models.hpp"
#include "sle/rng.hpp"

namespace sle::discrete {

void LatticeGraph::add_edge(int a, int b) {
  if (a == b) throw std::invalid_argument("add_edge: self loop");
  const int need = std::max(a, b) + 1;
  if (need > n) {
    n = need;
    adj.resize(n);
  }
  adj[a].push_back(b);
  adj[b].push_back(a);
}

bool LatticeGraph::has_edge(int a, int b) const {
  if (a < 0 || a >= n) return false;
  return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
}

bool LatticeGraph::connected() const {
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int cnt = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        q.push(w);
      }
  }
  return cnt == n;
}

LatticeGraph make_path_graph(int n) {
  LatticeGraph g;
  g.n = n;
  g.adj.resize(n);
  g.coords.resize(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  for (int i = 0; i < n; ++i) g.coords[i] = {static_cast<double>(i), 0.0};
  return g;
}

LatticeGraph make_cycle_graph(int n) {
  LatticeGraph g = make_path_graph(n);
  if (n > 2) g.add_edge(n - 1, 0);
  return g;
}

LatticeGraph make_grid_graph(int w, int h) {
  LatticeGraph g;
  g.n = w * h;
  g.adj.resize(g.n);
  g.coords.resize(g.n);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const int v = j * w + i;
      g.coords[v] = {static_cast<double>(i), static_cast<double>(j)};
      if (i + 1 < w) g.add_edge(v, v + 1);
      if (j + 1 < h) g.add_edge(v, v + w);
    }
  return g;
}

std::vector<int> loop_erase(std::span<const int> walk,
                            const std::unordered_set<int>& targets) {
  if (targets.empty()) throw std::domain_error("loop_erase: empty target set");
  if (walk.empty()) throw std::domain_error("loop_erase: empty walk");
  if (!targets.count(walk.back()))
    throw std::domain_error("loop_erase: walk does not end in the target set");
  for (std::size_t m = 0; m + 1 < walk.size(); ++m)
    if (targets.count(walk[m]))
      throw std::domain_error("loop_erase: walk visits targets before its end");

  // last occurrence of every vertex
  std::unordered_map<int, std::size_t> last;
  for (std::size_t m = 0; m < walk.size(); ++m) last[walk[m]] = m;

  std::vector<int> beta;
  beta.push_back(walk[0]);
  while (!targets.count(beta.back())) {
    const std::size_t m = last.at(beta.back());
    beta.push_back(walk[m + 1]);
  }
  return beta;
}

std::vector<int> lerw(const LatticeGraph& g, int u,
                      const std::unordered_set<int>& targets,
                      std::uint64_t seed) {
  if (targets.empty()) throw std::domain_error("lerw: empty target set");
  if (u < 0 || u >= g.n) throw std::domain_error("lerw: bad start vertex");
  if (targets.count(u)) return {u};

  // reachability guard
  {
    std::vector<char> seen(g.n, 0);
    std::queue<int> q;
    q.push(u);
    seen[u] = 1;
    bool ok = false;
    while (!q.empty() && !ok) {
      const int v = q.front();
      q.pop();
      for (int w : g.adj[v]) {
        if (targets.count(w)) {
          ok = true;
          break;
        }
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    if (!ok) throw std::domain_error("lerw: targets unreachable from u");
  }

  rng::Stream rnd(seed);
  std::vector<int> walk{u};
  int v = u;
  while (!targets.count(v)) {
    const auto& nb = g.adj[v];
    v = nb[rnd.below(nb.size())];
    walk.push_back(v);
  }
  return loop_erase(walk, targets);
}

std::vector<std::pair<int, int>> SpanningTree::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < static_cast<int>(parent.size()); ++v)
    if (v != root) out.emplace_back(v, parent[v]);
  return out;
}

bool SpanningTree::is_spanning_tree_of(const LatticeGraph& g) const {
  if (static_cast<int>(parent.size()) != g.n) return false;
  if (root < 0 || root >= g.n || parent[root] != root) return false;
  // every vertex must reach the root without repetition
  for (int v = 0; v < g.n; ++v) {
    int steps = 0, w = v;
    while (w != root) {
      if (!g.has_edge(w, parent[w])) return false;
      w = parent[w];
      if (++steps > g.n) return false;  // cycle
    }
  }
  return true;
}

SpanningTree wilson_ust(const LatticeGraph& g, std::uint64_t seed) {
  if (!g.connected()) throw std::domain_error("wilson_ust: graph disconnected");
  SpanningTree t;
  t.root = 0;
  t.parent.assign(g.n, -1);
  t.parent[0] = 0;

  rng::Stream rnd(seed);
  std::vector<int> walk;
  for (int v0 = 1; v0 < g.n; ++v0) {
    if (t.parent[v0] >= 0) continue;
    walk.clear();
    walk.push_back(v0);
    int v = v0;
    while (t.parent[v] < 0) {
      const auto& nb = g.adj[v];
      v = nb[rnd.below(nb.size())];
      walk.push_back(v);
    }
    // loop-erase the walk and attach it
    std::unordered_set<int> tgt{walk.back()};
    const auto path = loop_erase(walk, tgt);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      t.parent[path[i]] = path[i + 1];
  }
  return t;
}

std::vector<int> tree_path(const SpanningTree& t, int u, int v) {
  std::vector<int> up{u};
  std::unordered_map<int, std::size_t> pos{{u, 0}};
  int w = u;
  while (w != t.root) {
    w = t.parent[w];
    pos[w] = up.size();
    up.push_back(w);
  }
  // climb from v until we meet u's root path
  std::vector<int> down;
  w = v;
  while (!pos.count(w)) {
    down.push_back(w);
    w = t.parent[w];
  }
  std::vector<int> out(up.begin(), up.begin() + pos[w] + 1);
  std::reverse(down.begin(), down.end());
  out.insert(out.end(), down.begin(), down.end());
  return out;
}

}  // namespace sle::discrete
