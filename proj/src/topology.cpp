#include <deque>
#include <fstream>
#include <sstream>

#include "admire/error.hpp"
#include "admire/grid.hpp"

namespace admire::grid {

void Topology::add_node(const NodeId& id) {
  if (id.empty()) throw Error(Errc::invalid_argument, "empty node id");
  nodes_.insert(id);
  adjacency_[id];
}

void Topology::add_edge(const NodeId& a, const NodeId& b, Tick latency) {
  if (!contains(a)) throw Error(Errc::unknown_node, a);
  if (!contains(b)) throw Error(Errc::unknown_node, b);
  if (a == b) throw Error(Errc::invalid_argument, "self-loop on " + a);
  if (adjacency_[a].count(b)) throw Error(Errc::invalid_argument, "repeated edge " + a + "-" + b);
  adjacency_[a][b] = latency;
  adjacency_[b][a] = latency;
  edges_.push_back({a, b, latency});
}

std::vector<std::pair<NodeId, Tick>> Topology::neighbors(const NodeId& id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw Error(Errc::unknown_node, id);
  return {it->second.begin(), it->second.end()};
}

std::vector<std::set<NodeId>> Topology::components() const {
  std::vector<std::set<NodeId>> out;
  std::set<NodeId> seen;
  for (const auto& start : nodes_) {
    if (seen.count(start)) continue;
    std::set<NodeId> comp{start};
    std::deque<NodeId> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (const auto& [w, _] : adjacency_.at(v)) {
        if (seen.insert(w).second) {
          comp.insert(w);
          queue.push_back(w);
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

Topology Topology::complete(const std::vector<NodeId>& nodes, Tick latency) {
  Topology t;
  for (const auto& n : nodes) t.add_node(n);
  const std::vector<NodeId> sorted(t.nodes().begin(), t.nodes().end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) t.add_edge(sorted[i], sorted[j], latency);
  }
  return t;
}

Topology topology_from_json(const nlohmann::json& j) {
  try {
    Topology t;
    for (const auto& n : j.at("nodes")) t.add_node(n.get<std::string>());
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        t.add_edge(e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.value("latency", Tick{1}));
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("topology: ") + e.what());
  }
}

nlohmann::json topology_to_json(const Topology& t) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : t.edges()) edges.push_back({{"a", e.a}, {"b", e.b}, {"latency", e.latency}});
  return {{"nodes", t.nodes()}, {"edges", edges}};
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
  return topology_from_json(j);
}

}  // namespace admire::grid
