#include "idnc/graph.hpp"

#include <ostream>
#include <sstream>

namespace idnc {

const char* to_string(GraphMode mode) {
  return mode == GraphMode::GIDNC ? "GIDNC" : "LGIDNC";
}

CodingGraph::CodingGraph(GraphMode mode, std::vector<Vertex> vertices)
    : mode_(mode), vertices_(std::move(vertices)) {
  words_ = (vertices_.size() + 63) / 64;
  adj_.assign(vertices_.size() * words_, 0);
}

void CodingGraph::add_edge(int a, int b) {
  assert(a != b);
  adj_[static_cast<std::size_t>(a) * words_ + (b >> 6)] |= 1ULL << (b & 63);
  adj_[static_cast<std::size_t>(b) * words_ + (a >> 6)] |= 1ULL << (a & 63);
  ++edges_;
}

double vertex_weight(const FeedbackMatrix& F, const ChannelParams& params,
                     UserId i, PacketId j) {
  return (1.0 - params.forward[i]) *
         entry_innovative_probability(F, params, i, j);
}

std::vector<Vertex> enumerate_vertices(const FeedbackMatrix& F,
                                       const BeliefTables& tables) {
  std::vector<Vertex> verts;
  verts.reserve(F.non_has_count());
  for (UserId i = 0; i < F.users(); ++i) {
    for (PacketId j = 0; j < F.packets(); ++j) {
      if (F.entry(i, j) == EntryState::Has) continue;
      double x = tables.innovative_at(i, j);
      verts.push_back(Vertex{i, j, tables.delivery[i] * x, x});
    }
  }
  return verts;
}

bool edge_allowed(GraphMode mode, const BeliefTables& tables,
                  const FeedbackMatrix& F, const Vertex& a, const Vertex& b) {
  if (a.user == b.user) return false;
  if (a.packet == b.packet) return true;  // C1: both want the same packet
  // C2 (doubtless): each packet acknowledged at the other vertex's user.
  if (F.entry(b.user, a.packet) == EntryState::Has &&
      F.entry(a.user, b.packet) == EntryState::Has)
    return true;
  if (mode == GraphMode::GIDNC) return false;
  // C2 (lossy): the XOR's expected delay must not exceed either packet's.
  PairDelays d =
      expected_pair_delays(tables, a.user, a.packet, b.user, b.packet);
  return d.xored <= d.single_j + kDelayTolerance &&
         d.xored <= d.single_l + kDelayTolerance;
}

CodingGraph build_graph(GraphMode mode, const FeedbackMatrix& F,
                        const ChannelParams& params) {
  BeliefTables tables(F, params);
  CodingGraph g(mode, enumerate_vertices(F, tables));
  const auto& verts = g.vertices();
  for (int a = 0; a < g.size(); ++a)
    for (int b = a + 1; b < g.size(); ++b)
      if (edge_allowed(mode, tables, F, verts[a], verts[b])) g.add_edge(a, b);
  return g;
}

CodingGraph build_gidnc_graph(const FeedbackMatrix& F,
                              const ChannelParams& params) {
  return build_graph(GraphMode::GIDNC, F, params);
}

CodingGraph build_lgidnc_graph(const FeedbackMatrix& F,
                               const ChannelParams& params) {
  return build_graph(GraphMode::LGIDNC, F, params);
}

void write_edge_list(const CodingGraph& g, std::ostream& out) {
  for (int a = 0; a < g.size(); ++a)
    for (int b = a + 1; b < g.size(); ++b)
      if (g.adjacent(a, b)) out << a << ' ' << b << '\n';
}

std::string edge_list_string(const CodingGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

}  // namespace idnc
