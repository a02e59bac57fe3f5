#include <algorithm>
#include <cmath>
#include <limits>

#include "lcm/measures.hpp"

namespace lcm {

// Transportation problem by successive shortest paths with Dijkstra on reduced costs.
// Dense bipartite graph: the middle arcs have unbounded capacity.
double wasserstein1(const std::vector<Vec>& a, const std::vector<double>& wa, const std::vector<Vec>& b,
                    const std::vector<double>& wb) {
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) return 0;
  double sa = 0, sb = 0;
  for (double w : wa) sa += w;
  for (double w : wb) sb += w;
  std::vector<double> supply(na), demand(nb);
  for (std::size_t i = 0; i < na; ++i) supply[i] = wa[i] / sa;
  for (std::size_t j = 0; j < nb; ++j) demand[j] = wb[j] / sb;
  std::vector<double> cost(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) cost[i * nb + j] = (a[i] - b[j]).norm();
  std::vector<double> flow(na * nb, 0.0);
  // Potentials on the bipartite nodes (sources 0..na-1, sinks na..na+nb-1).
  std::vector<double> pot(na + nb, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  const double eps = 1e-15;
  double remaining = 1;
  for (int iter = 0; iter < static_cast<int>(4 * (na + nb) + 100) && remaining > 1e-14; ++iter) {
    // Multi-source Dijkstra from all sources with positive supply.
    const std::size_t V = na + nb;
    std::vector<double> dist(V, inf);
    std::vector<long> prev(V, -1);
    std::vector<char> done(V, 0);
    for (std::size_t i = 0; i < na; ++i)
      if (supply[i] > eps) dist[i] = 0;
    for (std::size_t step = 0; step < V; ++step) {
      std::size_t u = V;
      for (std::size_t v = 0; v < V; ++v)
        if (!done[v] && dist[v] < inf && (u == V || dist[v] < dist[u])) u = v;
      if (u == V) break;
      done[u] = 1;
      if (u < na) {
        for (std::size_t j = 0; j < nb; ++j) {
          const double rc = cost[u * nb + j] + pot[u] - pot[na + j];
          const double nd = dist[u] + std::max(rc, 0.0);
          if (nd < dist[na + j]) dist[na + j] = nd, prev[na + j] = static_cast<long>(u);
        }
      } else {
        const std::size_t j = u - na;
        for (std::size_t i = 0; i < na; ++i) {
          if (flow[i * nb + j] <= eps) continue;
          const double rc = -cost[i * nb + j] + pot[u] - pot[i];
          const double nd = dist[u] + std::max(rc, 0.0);
          if (nd < dist[i]) dist[i] = nd, prev[i] = static_cast<long>(u);
        }
      }
    }
    // Cheapest reachable sink with remaining demand.
    std::size_t t = V;
    for (std::size_t j = 0; j < nb; ++j)
      if (demand[j] > eps && dist[na + j] < inf && (t == V || dist[na + j] < dist[t])) t = na + j;
    if (t == V) break;
    const double dt = dist[t];
    for (std::size_t v = 0; v < V; ++v) pot[v] += std::min(dist[v], dt);
    // Bottleneck along the path.
    double delta = demand[t - na];
    std::size_t v = t;
    while (prev[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(prev[v]);
      if (u >= na) delta = std::min(delta, flow[v * nb + (u - na)]);
      v = u;
    }
    delta = std::min(delta, supply[v]);
    v = t;
    while (prev[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(prev[v]);
      if (u < na)
        flow[u * nb + (v - na)] += delta;
      else
        flow[v * nb + (u - na)] -= delta;
      v = u;
    }
    supply[v] -= delta;
    demand[t - na] -= delta;
    remaining -= delta;
  }
  double total = 0;
  for (std::size_t k = 0; k < flow.size(); ++k) total += flow[k] * cost[k];
  return total;
}

}  // namespace lcm
