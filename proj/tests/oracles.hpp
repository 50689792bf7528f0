#pragma once

// Brute-force reference implementations. They share no code with the
// library paths they check.

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct Rec {
  double confidence;
  bool correct;
};

// Bin m (1-based) holds confidences in ((m-1)/M, m/M]; 0 goes to bin 1.
inline double ece(const std::vector<Rec>& recs, int bins) {
  const double n = static_cast<double>(recs.size());
  double total = 0;
  for (int m = 1; m <= bins; ++m) {
    const double lo = static_cast<double>(m - 1) / bins;
    const double hi = static_cast<double>(m) / bins;
    double count = 0, conf = 0, hits = 0;
    for (const auto& r : recs) {
      const bool inside = (r.confidence > lo && r.confidence <= hi) || (m == 1 && r.confidence == 0.0);
      if (!inside) continue;
      count += 1;
      conf += r.confidence;
      hits += r.correct ? 1 : 0;
    }
    if (count > 0) total += (count / n) * std::fabs(hits / count - conf / count);
  }
  return total;
}

inline double brier(const std::vector<Rec>& recs) {
  double s = 0;
  for (const auto& r : recs) {
    const double y = r.correct ? 1.0 : 0.0;
    s += (r.confidence - y) * (r.confidence - y);
  }
  return s / static_cast<double>(recs.size());
}

// Rank of record i: how many records precede it when sorted by confidence
// descending with ties kept in input order. Top-k = records with rank < k.
inline double selective_auc(const std::vector<Rec>& recs) {
  const std::size_t n = recs.size();
  std::vector<std::size_t> rank(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (recs[j].confidence > recs[i].confidence ||
          (recs[j].confidence == recs[i].confidence && j < i))
        ++rank[i];
  double area = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double hits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (rank[i] < k && recs[i].correct) hits += 1;
    area += hits / static_cast<double>(k);
  }
  return area / static_cast<double>(n);
}

// Every simple path from `start` with 1..max_hops edges, following edges in
// either direction. A path is the sequence of (triple index, forward?) it
// used; entity revisits are forbidden.
struct Edge {
  std::string s, r, o;
};

inline void dfs(const std::vector<Edge>& edges, std::vector<std::string>& visited,
                std::vector<std::pair<std::size_t, bool>>& cur, int max_hops,
                std::set<std::vector<std::pair<std::size_t, bool>>>& out) {
  if (static_cast<int>(cur.size()) == max_hops) return;
  const std::string here = visited.back();
  auto seen = [&](const std::string& e) {
    for (const auto& v : visited)
      if (v == e) return true;
    return false;
  };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (bool fwd : {true, false}) {
      const std::string& from = fwd ? edges[i].s : edges[i].o;
      const std::string& to = fwd ? edges[i].o : edges[i].s;
      if (from != here || seen(to)) continue;
      cur.emplace_back(i, fwd);
      visited.push_back(to);
      out.insert(cur);
      dfs(edges, visited, cur, max_hops, out);
      visited.pop_back();
      cur.pop_back();
    }
  }
}

inline std::set<std::vector<std::pair<std::size_t, bool>>> simple_paths(
    const std::vector<Edge>& edges, const std::string& start, int max_hops) {
  std::set<std::vector<std::pair<std::size_t, bool>>> out;
  std::vector<std::string> visited{start};
  std::vector<std::pair<std::size_t, bool>> cur;
  dfs(edges, visited, cur, max_hops, out);
  return out;
}

}  // namespace oracle
