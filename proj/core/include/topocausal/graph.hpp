#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace topocausal {

using NodeId = std::size_t;

enum class GraphMode { kDirected, kUndirected };

// Directed: from -> to. Undirected edges are reported with from < to.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple graph over nodes [0, n) with sorted adjacency lists. In undirected
// mode (a,b) and (b,a) name the same edge.
class Network {
 public:
  Network() = default;
  Network(std::size_t n_nodes, GraphMode mode);

  std::size_t n_nodes() const { return out_.size(); }
  GraphMode mode() const { return mode_; }
  bool directed() const { return mode_ == GraphMode::kDirected; }
  std::size_t edge_count() const { return edge_count_; }

  // Returns false if the edge already exists. Throws std::invalid_argument on
  // self-loops or out-of-range ids.
  bool add_edge(NodeId from, NodeId to);
  bool remove_edge(NodeId from, NodeId to);
  bool has_edge(NodeId from, NodeId to) const;
  // Edge in either direction.
  bool adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }

  // Undirected mode: both return the neighbour list.
  std::span<const NodeId> out_neighbors(NodeId v) const { return out_.at(v); }
  std::span<const NodeId> in_neighbors(NodeId v) const;
  std::span<const NodeId> neighbors(NodeId v) const { return out_neighbors(v); }

  std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }
  std::size_t out_degree(NodeId v) const { return out_.at(v).size(); }

  // All edges in ascending (from, to) order.
  std::vector<Edge> edges() const;

  // Undirected graph with an edge wherever this graph has one in either direction.
  Network skeleton() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  void check(NodeId a, NodeId b) const;

  GraphMode mode_ = GraphMode::kDirected;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
};

struct Component {
  std::size_t size = 0;
  std::vector<NodeId> members;  // ascending
};

// Largest weakly connected component. Among equal sizes the component holding
// the lowest node id wins.
Component lcc(const Network& net);

// Child with two distinct in-neighbours; parent_a < parent_b.
struct Triad {
  NodeId child = 0;
  NodeId parent_a = 0;
  NodeId parent_b = 0;

  friend auto operator<=>(const Triad&, const Triad&) = default;
};

// Every unordered parent pair of every node, ordered by (child, parent_a,
// parent_b). Throws std::invalid_argument for undirected networks.
std::vector<Triad> triads(const Network& net);

bool is_acyclic(const Network& net);

// Kahn order with smallest-id-first tie breaking. Throws std::invalid_argument
// if the network is undirected or cyclic.
std::vector<NodeId> topological_order(const Network& net);

// Number of node pairs joined in both directions.
std::size_t count_two_cycles(const Network& net);

// Edge-list TSV: one `src<TAB>dst` line per edge (undirected: lower index
// first), names taken from `names`.
void write_edge_list(const Network& net, std::span<const std::string> names, std::ostream& out);
Network read_edge_list(std::istream& in, std::span<const std::string> names, GraphMode mode);

}  // namespace topocausal
