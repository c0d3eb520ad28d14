#ifndef FOGPLACE_GRAPH_HPP
#define FOGPLACE_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplace/matrix.hpp"

namespace fogplace {

/// Undirected network link between two devices, weighted by latency.
struct Link {
  int a = 0;
  int b = 0;
  double latency_ms = 0.0;
};

/// All-pairs shortest-path latency matrix (Floyd–Warshall).
/// Throws if the link graph does not connect every device pair.
inline Matrix<double> compute_distances(const std::vector<Link>& links, int device_count) {
  const double inf = std::numeric_limits<double>::infinity();
  Matrix<double> d(device_count, device_count, inf);
  for (int i = 0; i < device_count; ++i) d(i, i) = 0.0;
  for (const Link& l : links) {
    if (l.a < 0 || l.a >= device_count || l.b < 0 || l.b >= device_count)
      throw std::invalid_argument("compute_distances: link endpoint out of range");
    if (l.latency_ms <= 0.0)
      throw std::invalid_argument("compute_distances: link latency must be positive");
    d(l.a, l.b) = std::min(d(l.a, l.b), l.latency_ms);
    d(l.b, l.a) = d(l.a, l.b);
  }
  for (int k = 0; k < device_count; ++k)
    for (int i = 0; i < device_count; ++i) {
      const double dik = d(i, k);
      if (dik == inf) continue;
      for (int j = 0; j < device_count; ++j) {
        const double via = dik + d(k, j);
        if (via < d(i, j)) d(i, j) = via;
      }
    }
  for (int i = 0; i < device_count; ++i)
    for (int j = 0; j < device_count; ++j)
      if (d(i, j) == inf)
        throw std::runtime_error("compute_distances: devices " + std::to_string(i) + " and " +
                                 std::to_string(j) + " are not connected");
  return d;
}

/// Shortest-path betweenness centrality over unweighted (hop-count) paths,
/// Brandes' accumulation. Each unordered pair is counted once; endpoints are
/// excluded, so leaves score 0.
inline std::vector<double> betweenness_centrality(const std::vector<Link>& links,
                                                  int device_count) {
  std::vector<std::vector<int>> adj(device_count);
  for (const Link& l : links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::vector<double> score(device_count, 0.0);
  std::vector<int> dist(device_count), order;
  std::vector<double> sigma(device_count), delta(device_count);
  std::vector<std::vector<int>> pred(device_count);
  order.reserve(device_count);

  for (int s = 0; s < device_count; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : pred) p.clear();
    order.clear();

    dist[s] = 0;
    sigma[s] = 1.0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      order.push_back(v);
      for (int w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) score[w] += delta[w];
    }
  }
  // Brandes counts each unordered pair from both endpoints.
  for (double& v : score) v /= 2.0;
  return score;
}

}  // namespace fogplace

#endif  // FOGPLACE_GRAPH_HPP
