#pragma once

#include <utility>
#include <vector>

#include "idnc/graph.hpp"

namespace idnc {

// A set of pairwise-adjacent vertices, at most one per user.
struct Clique {
  std::vector<int> members;  // ascending vertex indices

  bool empty() const { return members.empty(); }
};

// One broadcast: the XOR operand set plus the user -> intended packet map
// of the targeted users.
struct Transmission {
  std::vector<PacketId> packets;                     // sorted, distinct
  std::vector<std::pair<UserId, PacketId>> targets;  // sorted by user
};

// Total weight of a clique, accumulated in ascending member order so every
// code path sums identically.
double clique_weight(const CodingGraph& g, const Clique& c);

bool is_valid_clique(const CodingGraph& g, const Clique& c);
bool is_maximal_clique(const CodingGraph& g, const Clique& c);

// Maximal clique grown greedily: repeatedly take, among vertices adjacent
// to all current members, the heaviest one (ties: lowest vertex index).
// An empty graph yields an empty clique.
Clique greedy_max_weight_clique(const CodingGraph& g);

// Same selection without materializing the adjacency; the edge predicate is
// evaluated on demand. `verts` must come from enumerate_vertices so member
// indices agree with the explicit builders.
Clique greedy_max_weight_clique(GraphMode mode, const BeliefTables& tables,
                                const FeedbackMatrix& F,
                                const std::vector<Vertex>& verts);

// Globally maximum-weight clique by branch and bound; ties resolved toward
// the lexicographically smallest member set. Refuses graphs larger than
// `max_vertices` (the problem is NP-hard; this is a small-scale oracle).
Clique exact_max_weight_clique(const CodingGraph& g, int max_vertices = 20);

// XOR of all packets represented by the clique (duplicates collapse), with
// every member user targeted by its own packet.
Transmission clique_to_transmission(const Clique& c,
                                    const std::vector<Vertex>& verts);
Transmission clique_to_transmission(const Clique& c, const CodingGraph& g);

// Enumerates every non-empty packet subset and returns the one minimizing
// the total expected delay over users with unacknowledged rows; ties go to
// the later (larger) subset. Each user whose wanted packets intersect the
// subset is targeted with its most-likely-innovative one. Refuses frames
// larger than `max_packets`.
Transmission exhaustive_best_combination(const FeedbackMatrix& F,
                                         const ChannelParams& params,
                                         int max_packets = 12);

}  // namespace idnc
