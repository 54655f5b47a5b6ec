#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dagmm/types.hpp"

namespace dagmm {

struct NodeMeta {
  std::string id;
  std::string label;
  std::optional<int> year;
  std::optional<int> month;

  bool operator==(const NodeMeta&) const = default;
};

/// `from` cites `to`.
struct Edge {
  std::string from;
  std::string to;

  auto operator<=>(const Edge&) const = default;
};

using EdgeList = std::vector<Edge>;

/// Reads `id,label,year,month`. Throws DuplicateNode or ParseError.
std::vector<NodeMeta> parse_nodes(std::string_view csv);
/// Reads `from,to`, dropping repeated pairs. Throws SelfLoopError or ParseError.
EdgeList parse_edges(std::string_view csv);
std::string write_nodes_csv(const std::vector<NodeMeta>& nodes);
std::string write_edges_csv(const EdgeList& edges);

/// Nodes, the edge list in input order, and the dense adjacency Y with
/// Y(r, s) = 1 iff node r cites node s. Immutable once built.
class CitationGraph {
 public:
  CitationGraph() = default;
  /// Throws DuplicateNode, UnknownNode or SelfLoopError. Repeated edges are kept once.
  CitationGraph(std::vector<NodeMeta> nodes, const EdgeList& edges);
  /// Node set taken from the edge endpoints in order of first appearance.
  static CitationGraph from_edges(const EdgeList& edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<NodeMeta>& nodes() const noexcept { return nodes_; }
  const NodeMeta& node(std::size_t index) const { return nodes_[index]; }
  const EdgeList& edges() const noexcept { return edges_; }
  const Adjacency& adjacency() const noexcept { return adjacency_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<NodeMeta> nodes_;
  EdgeList edges_;
  Adjacency adjacency_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class RemovalReason { kYearOrder, kTieRandom };
std::string_view to_string(RemovalReason reason);

struct RemovedEdge {
  std::string from;
  std::string to;
  RemovalReason reason;

  bool operator==(const RemovedEdge&) const = default;
};

struct CleanReport {
  std::vector<RemovedEdge> removed;
  std::uint64_t seed = 0;
};

struct CleanResult {
  CitationGraph graph;
  CleanReport report;
};

/// Breaks every 2-cycle by dropping the edge from the chronologically earlier
/// article to the later one (year, then month). Missing or equal dates are a
/// tie, resolved by a fair coin from a generator seeded with `seed`.
CleanResult remove_mutual_edges(const CitationGraph& graph, std::uint64_t seed);

/// Some directed cycle as a closed walk of node ids, or nothing for a DAG.
std::optional<std::vector<std::string>> find_cycle(const CitationGraph& graph);
/// Throws CycleFound with a witness unless the graph is acyclic.
void assert_dag(const CitationGraph& graph);

/// A topological order: every edge runs from an earlier to a later position.
/// Among available nodes the latest year goes first (missing years last),
/// then the lexicographically smallest id. Throws CycleFound.
Ordering topological_order(const CitationGraph& graph);
/// Same on a bare adjacency matrix; ties go to the smallest index.
Ordering topological_order(const Adjacency& y);

enum class DensityMode { kDagHalved, kDirectedFull };

/// dag-halved: m / (n(n-1)/2); directed-full: m / (n(n-1)). Throws TooFewNodes.
double density(std::size_t n, std::size_t m, DensityMode mode);
double density(const CitationGraph& graph, DensityMode mode);

/// Nodes in `keep` (in original order) and the edges between them. Throws UnknownNode.
CitationGraph induced_subgraph(const CitationGraph& graph, const std::set<std::string>& keep);

}  // namespace dagmm
