#include "topocausal/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "topocausal/errors.hpp"

namespace topocausal {

namespace {

bool sorted_insert(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it != list.end() && *it == v) return false;
  list.insert(it, v);
  return true;
}

bool sorted_erase(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it == list.end() || *it != v) return false;
  list.erase(it);
  return true;
}

}  // namespace

Network::Network(std::size_t n_nodes, GraphMode mode)
    : mode_(mode), out_(n_nodes), in_(mode == GraphMode::kDirected ? n_nodes : 0) {}

void Network::check(NodeId a, NodeId b) const {
  if (a >= n_nodes() || b >= n_nodes())
    throw std::invalid_argument("node id out of range");
  if (a == b) throw std::invalid_argument("self-loops are not allowed");
}

bool Network::add_edge(NodeId from, NodeId to) {
  check(from, to);
  if (!sorted_insert(out_[from], to)) return false;
  if (directed()) {
    sorted_insert(in_[to], from);
  } else {
    sorted_insert(out_[to], from);
  }
  ++edge_count_;
  return true;
}

bool Network::remove_edge(NodeId from, NodeId to) {
  check(from, to);
  if (!sorted_erase(out_[from], to)) return false;
  if (directed()) {
    sorted_erase(in_[to], from);
  } else {
    sorted_erase(out_[to], from);
  }
  --edge_count_;
  return true;
}

bool Network::has_edge(NodeId from, NodeId to) const {
  if (from >= n_nodes() || to >= n_nodes()) return false;
  return std::binary_search(out_[from].begin(), out_[from].end(), to);
}

std::span<const NodeId> Network::in_neighbors(NodeId v) const {
  return directed() ? std::span<const NodeId>(in_.at(v)) : std::span<const NodeId>(out_.at(v));
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count_);
  for (NodeId a = 0; a < n_nodes(); ++a) {
    for (NodeId b : out_[a]) {
      if (directed() || a < b) result.push_back({a, b});
    }
  }
  return result;
}

Network Network::skeleton() const {
  Network s(n_nodes(), GraphMode::kUndirected);
  for (const Edge& e : edges()) s.add_edge(e.from, e.to);
  return s;
}

Component lcc(const Network& net) {
  const std::size_t n = net.n_nodes();
  Component best;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> members;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    members.clear();
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      members.push_back(v);
      auto visit = [&](NodeId w) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      };
      for (NodeId w : net.out_neighbors(v)) visit(w);
      if (net.directed()) {
        for (NodeId w : net.in_neighbors(v)) visit(w);
      }
    }
    // Components are discovered in order of their lowest id, so strict > keeps
    // the lowest-id component among equal sizes.
    if (members.size() > best.size) {
      best.size = members.size();
      best.members = members;
    }
  }
  std::sort(best.members.begin(), best.members.end());
  return best;
}

std::vector<Triad> triads(const Network& net) {
  if (!net.directed()) throw std::invalid_argument("triads() requires a directed network");
  std::vector<Triad> result;
  for (NodeId child = 0; child < net.n_nodes(); ++child) {
    const auto parents = net.in_neighbors(child);
    for (std::size_t x = 0; x < parents.size(); ++x) {
      for (std::size_t y = x + 1; y < parents.size(); ++y) {
        result.push_back({child, parents[x], parents[y]});
      }
    }
  }
  return result;
}

std::vector<NodeId> topological_order(const Network& net) {
  if (!net.directed()) throw std::invalid_argument("topological_order() requires a directed network");
  const std::size_t n = net.n_nodes();
  std::vector<std::size_t> indegree(n);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v) {
    indegree[v] = net.in_degree(v);
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId w : net.out_neighbors(v)) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) throw std::invalid_argument("network has a directed cycle");
  return order;
}

bool is_acyclic(const Network& net) {
  if (!net.directed()) return net.edge_count() == 0;
  try {
    topological_order(net);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::size_t count_two_cycles(const Network& net) {
  if (!net.directed()) return 0;
  std::size_t count = 0;
  for (const Edge& e : net.edges()) {
    if (e.from < e.to && net.has_edge(e.to, e.from)) ++count;
  }
  return count;
}

void write_edge_list(const Network& net, std::span<const std::string> names, std::ostream& out) {
  if (names.size() != net.n_nodes()) throw std::invalid_argument("name count does not match node count");
  for (const Edge& e : net.edges()) out << names[e.from] << '\t' << names[e.to] << '\n';
}

Network read_edge_list(std::istream& in, std::span<const std::string> names, GraphMode mode) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < names.size(); ++v) ids.emplace(names[v], v);
  Network net(names.size(), mode);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw DataError("edge list line " + std::to_string(line_no) + ": expected two tab-separated names");
    const std::string a = line.substr(0, tab);
    const std::string b = line.substr(tab + 1);
    const auto ia = ids.find(a);
    const auto ib = ids.find(b);
    if (ia == ids.end() || ib == ids.end())
      throw DataError("edge list line " + std::to_string(line_no) + ": unknown node '" +
                      (ia == ids.end() ? a : b) + "'");
    if (ia->second == ib->second)
      throw DataError("edge list line " + std::to_string(line_no) + ": self-loop");
    net.add_edge(ia->second, ib->second);
  }
  return net;
}

}  // namespace topocausal
