#include "idnc/clique.hpp"

#include <algorithm>
#include <stdexcept>

namespace idnc {

double clique_weight(const CodingGraph& g, const Clique& c) {
  double w = 0.0;
  for (int v : c.members) w += g.vertex(v).weight;
  return w;
}

bool is_valid_clique(const CodingGraph& g, const Clique& c) {
  for (std::size_t a = 0; a < c.members.size(); ++a) {
    for (std::size_t b = a + 1; b < c.members.size(); ++b) {
      if (!g.adjacent(c.members[a], c.members[b])) return false;
      if (g.vertex(c.members[a]).user == g.vertex(c.members[b]).user)
        return false;
    }
  }
  return true;
}

bool is_maximal_clique(const CodingGraph& g, const Clique& c) {
  if (!is_valid_clique(g, c)) return false;
  for (int v = 0; v < g.size(); ++v) {
    if (std::find(c.members.begin(), c.members.end(), v) != c.members.end())
      continue;
    bool extends = !c.members.empty();
    for (int m : c.members)
      if (!g.adjacent(v, m)) { extends = false; break; }
    if (extends) return false;
  }
  return true;
}

Clique greedy_max_weight_clique(const CodingGraph& g) {
  Clique clique;
  if (g.size() == 0) return clique;

  std::size_t words = g.adjacency_words();
  std::vector<std::uint64_t> cand(words, 0);
  for (int v = 0; v < g.size(); ++v)
    cand[v >> 6] |= 1ULL << (v & 63);

  for (;;) {
    int best = -1;
    double best_w = 0.0;
    for (int v = 0; v < g.size(); ++v) {
      if (!((cand[v >> 6] >> (v & 63)) & 1)) continue;
      if (best < 0 || g.vertex(v).weight > best_w) {
        best = v;
        best_w = g.vertex(v).weight;
      }
    }
    if (best < 0) break;
    clique.members.push_back(best);
    const std::uint64_t* row = g.row(best);
    for (std::size_t w = 0; w < words; ++w) cand[w] &= row[w];
  }
  std::sort(clique.members.begin(), clique.members.end());
  return clique;
}

Clique greedy_max_weight_clique(GraphMode mode, const BeliefTables& tables,
                                const FeedbackMatrix& F,
                                const std::vector<Vertex>& verts) {
  Clique clique;
  std::vector<int> cand(verts.size());
  for (std::size_t v = 0; v < verts.size(); ++v) cand[v] = static_cast<int>(v);

  while (!cand.empty()) {
    int best_at = 0;
    for (std::size_t a = 1; a < cand.size(); ++a)
      if (verts[cand[a]].weight > verts[cand[best_at]].weight) best_at = a;
    int chosen = cand[best_at];
    clique.members.push_back(chosen);

    std::vector<int> next;
    next.reserve(cand.size());
    for (int v : cand)
      if (v != chosen &&
          edge_allowed(mode, tables, F, verts[chosen], verts[v]))
        next.push_back(v);
    cand.swap(next);
  }
  std::sort(clique.members.begin(), clique.members.end());
  return clique;
}

namespace {

// Exhaustive expansion state for the exact solver.
struct ExactSearch {
  const CodingGraph* g = nullptr;
  std::vector<int> current;
  std::vector<int> best;
  double best_weight = -1.0;

  void consider(double weight) {
    if (weight > best_weight) {
      best_weight = weight;
      best = current;
    } else if (weight == best_weight &&
               std::lexicographical_compare(current.begin(), current.end(),
                                            best.begin(), best.end())) {
      best = current;
    }
  }

  void expand(const std::vector<int>& cand, double weight) {
    consider(weight);
    double remaining = 0.0;
    for (int v : cand) remaining += g->vertex(v).weight;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (weight + remaining < best_weight - 1e-9) return;  // cannot beat it
      int v = cand[a];
      std::vector<int> next;
      next.reserve(cand.size() - a);
      for (std::size_t b = a + 1; b < cand.size(); ++b)
        if (g->adjacent(v, cand[b])) next.push_back(cand[b]);
      current.push_back(v);
      expand(next, weight + g->vertex(v).weight);
      current.pop_back();
      remaining -= g->vertex(v).weight;
    }
  }
};

}  // namespace

Clique exact_max_weight_clique(const CodingGraph& g, int max_vertices) {
  if (g.size() > max_vertices)
    throw std::runtime_error(
        "exact_max_weight_clique: graph exceeds the exact-solver cap (" +
        std::to_string(g.size()) + " > " + std::to_string(max_vertices) +
        "); use the greedy heuristic");
  ExactSearch search;
  search.g = &g;
  search.best_weight = 0.0;  // the empty clique
  std::vector<int> cand(g.size());
  for (int v = 0; v < g.size(); ++v) cand[v] = v;
  search.expand(cand, 0.0);
  Clique out;
  out.members = std::move(search.best);
  return out;
}

Transmission clique_to_transmission(const Clique& c,
                                    const std::vector<Vertex>& verts) {
  if (c.empty())
    throw std::invalid_argument("clique_to_transmission: empty clique");
  Transmission tx;
  for (int v : c.members) {
    tx.packets.push_back(verts[v].packet);
    tx.targets.emplace_back(verts[v].user, verts[v].packet);
  }
  std::sort(tx.packets.begin(), tx.packets.end());
  tx.packets.erase(std::unique(tx.packets.begin(), tx.packets.end()),
                   tx.packets.end());
  std::sort(tx.targets.begin(), tx.targets.end());
  return tx;
}

Transmission clique_to_transmission(const Clique& c, const CodingGraph& g) {
  return clique_to_transmission(c, g.vertices());
}

Transmission exhaustive_best_combination(const FeedbackMatrix& F,
                                         const ChannelParams& params,
                                         int max_packets) {
  int n = F.packets();
  if (n > max_packets)
    throw std::runtime_error(
        "exhaustive_best_combination: frame exceeds the enumeration cap (" +
        std::to_string(n) + " > " + std::to_string(max_packets) + ")");

  BeliefTables tables(F, params);
  std::vector<UserId> wanting;
  for (UserId i = 0; i < F.users(); ++i)
    if (F.row_wants_nonempty(i)) wanting.push_back(i);

  std::vector<PacketId> kappa, best_kappa;
  double best_delay = 0.0;
  bool have_best = false;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    kappa.clear();
    for (PacketId j = 0; j < n; ++j)
      if (mask & (1u << j)) kappa.push_back(j);
    double total = 0.0;
    for (UserId i : wanting)
      total += expected_delay_combination(tables, kappa, i);
    // Ties go to the smallest combination, then the lowest packet ids.
    if (!have_best || total < best_delay ||
        (total == best_delay && kappa.size() < best_kappa.size())) {
      have_best = true;
      best_delay = total;
      best_kappa = kappa;
    }
  }

  Transmission tx;
  tx.packets = best_kappa;
  for (UserId i : wanting) {
    PacketId pick = -1;
    double pick_innovative = -1.0;
    for (PacketId j : best_kappa) {
      if (F.entry(i, j) == EntryState::Has) continue;
      double x = tables.innovative_at(i, j);
      if (x > pick_innovative) {
        pick_innovative = x;
        pick = j;
      }
    }
    if (pick >= 0) tx.targets.emplace_back(i, pick);
  }
  return tx;
}

}  // namespace idnc
