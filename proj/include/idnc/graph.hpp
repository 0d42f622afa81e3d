#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "idnc/probability.hpp"
#include "idnc/state.hpp"

namespace idnc {

enum class GraphMode { GIDNC, LGIDNC };

const char* to_string(GraphMode mode);

// One vertex per unacknowledged (user, packet) entry of the belief matrix.
struct Vertex {
  UserId user = 0;
  PacketId packet = 0;
  double weight = 0.0;      // (1 - p_user) * innovative probability
  double innovative = 0.0;  // effective innovative probability of the entry
};

// Coding graph over the vertices; an edge means the two packets may be
// XOR-combined for the two users. Symmetric, no self loops, and never an
// edge between two vertices of the same user.
class CodingGraph {
 public:
  CodingGraph() = default;
  CodingGraph(GraphMode mode, std::vector<Vertex> vertices);

  GraphMode mode() const { return mode_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int v) const { return vertices_[v]; }

  bool adjacent(int a, int b) const {
    return (adj_[static_cast<std::size_t>(a) * words_ + (b >> 6)] >>
            (b & 63)) & 1;
  }

  void add_edge(int a, int b);

  std::size_t edge_count() const { return edges_; }
  std::size_t adjacency_words() const { return words_; }
  const std::uint64_t* row(int v) const {
    return adj_.data() + static_cast<std::size_t>(v) * words_;
  }

 private:
  GraphMode mode_ = GraphMode::GIDNC;
  std::vector<Vertex> vertices_;
  std::vector<std::uint64_t> adj_;
  std::size_t words_ = 0;
  std::size_t edges_ = 0;
};

// Eq.-style vertex weight: delivery probability times the effective
// innovative probability of the entry.
double vertex_weight(const FeedbackMatrix& F, const ChannelParams& params,
                     UserId i, PacketId j);

// Deterministic row-major enumeration of all unacknowledged entries.
std::vector<Vertex> enumerate_vertices(const FeedbackMatrix& F,
                                       const BeliefTables& tables);

// Connectivity test shared by the explicit builders and the on-the-fly
// clique search. GIDNC: same wanted packet, or each packet acknowledged at
// the other user. LGIDNC additionally admits a pair whenever the XOR's
// expected delay is at most (to tolerance) each packet's individual delay.
bool edge_allowed(GraphMode mode, const BeliefTables& tables,
                  const FeedbackMatrix& F, const Vertex& a, const Vertex& b);

CodingGraph build_gidnc_graph(const FeedbackMatrix& F,
                              const ChannelParams& params);
CodingGraph build_lgidnc_graph(const FeedbackMatrix& F,
                               const ChannelParams& params);
CodingGraph build_graph(GraphMode mode, const FeedbackMatrix& F,
                        const ChannelParams& params);

// Plain-text edge list, one "u v" pair per line, vertex indices as ids.
void write_edge_list(const CodingGraph& g, std::ostream& out);
std::string edge_list_string(const CodingGraph& g);

}  // namespace idnc
