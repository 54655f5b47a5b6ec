#include "dagmm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <queue>

#include "dagmm/csv.hpp"
#include "dagmm/rng.hpp"

namespace dagmm {

namespace {

constexpr int kMinYear = 1800;
constexpr int kMaxYear = 2100;

std::optional<int> parse_int_field(const std::string& text, std::string_view what, std::size_t row) {
  if (text.empty()) return std::nullopt;
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("malformed " + std::string(what) + " '" + text + "'", row);
  return value;
}

std::string describe_header(const csv::Row& row) { return csv::join(row); }

std::vector<std::string> cycle_witness_ids(const std::vector<int>& cycle,
                                           const std::vector<NodeMeta>* nodes) {
  std::vector<std::string> out;
  out.reserve(cycle.size());
  for (int v : cycle) out.push_back(nodes ? (*nodes)[v].id : std::to_string(v));
  return out;
}

// Iterative three-colour DFS; returns a closed walk v0 .. vk v0 or empty.
std::vector<int> find_cycle_indices(const Adjacency& y) {
  const int n = static_cast<int>(y.rows());
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> colour(n, kWhite);
  std::vector<int> parent(n, -1);
  std::vector<std::pair<int, int>> stack;  // node, next neighbour to scan
  for (int root = 0; root < n; ++root) {
    if (colour[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == n) {
        colour[v] = kBlack;
        stack.pop_back();
        continue;
      }
      const int w = next++;
      if (!y(v, w)) continue;
      if (colour[w] == kGrey) {
        std::vector<int> cycle{v};
        for (int u = v; u != w;) {
          u = parent[u];
          cycle.push_back(u);
        }
        std::reverse(cycle.begin(), cycle.end());
        cycle.push_back(w);
        return cycle;
      }
      if (colour[w] == kWhite) {
        parent[w] = v;
        colour[w] = kGrey;
        stack.emplace_back(w, 0);
      }
    }
  }
  return {};
}

template <typename Less>
std::vector<int> kahn(const Adjacency& y, Less less) {
  const int n = static_cast<int>(y.rows());
  std::vector<int> indegree(n, 0);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) indegree[s] += y(r, s);
  // priority_queue pops the largest; invert the comparator
  auto greater = [&](int a, int b) { return less(b, a); };
  std::priority_queue<int, std::vector<int>, decltype(greater)> ready(greater);
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int s = 0; s < n; ++s)
      if (y(v, s) && --indegree[s] == 0) ready.push(s);
  }
  return order;
}

// Negative: a is earlier than b; positive: later; nullopt: tie or unknown.
std::optional<int> chronology(const NodeMeta& a, const NodeMeta& b) {
  if (!a.year || !b.year) return std::nullopt;
  if (*a.year != *b.year) return *a.year < *b.year ? -1 : 1;
  if (!a.month || !b.month || *a.month == *b.month) return std::nullopt;
  return *a.month < *b.month ? -1 : 1;
}

}  // namespace

CycleFound::CycleFound(std::vector<std::string> witness)
    : Error([&] {
        std::string msg = "cycle found:";
        for (const auto& id : witness) msg += " " + id;
        return msg;
      }()),
      witness_(std::move(witness)) {}

std::vector<NodeMeta> parse_nodes(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != csv::Row{"id", "label", "year", "month"})
    throw ParseError("nodes header must be 'id,label,year,month', got '" +
                     (rows.empty() ? std::string() : describe_header(rows.front())) + "'");
  std::vector<NodeMeta> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 4) throw ParseError("expected 4 fields", i);
    NodeMeta node{row[0], row[1], parse_int_field(row[2], "year", i),
                  parse_int_field(row[3], "month", i)};
    if (node.id.empty()) throw ParseError("empty node id", i);
    if (node.year && (*node.year < kMinYear || *node.year > kMaxYear))
      throw ParseError("implausible year " + row[2], i);
    if (node.month && (!node.year || *node.month < 1 || *node.month > 12))
      throw ParseError("month must be 1-12 and needs a year", i);
    if (!seen.emplace(node.id, i).second) throw DuplicateNode(node.id);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

EdgeList parse_edges(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != csv::Row{"from", "to"})
    throw ParseError("edges header must be 'from,to', got '" +
                     (rows.empty() ? std::string() : describe_header(rows.front())) + "'");
  EdgeList edges;
  std::set<Edge> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 2) throw ParseError("expected 2 fields", i);
    if (row[0].empty() || row[1].empty()) throw ParseError("empty node id", i);
    if (row[0] == row[1]) throw SelfLoopError(row[0]);
    Edge e{row[0], row[1]};
    if (seen.insert(e).second) edges.push_back(std::move(e));
  }
  return edges;
}

std::string write_nodes_csv(const std::vector<NodeMeta>& nodes) {
  std::string out = "id,label,year,month\n";
  for (const auto& node : nodes) {
    out += csv::join({node.id, node.label, node.year ? std::to_string(*node.year) : "",
                      node.month ? std::to_string(*node.month) : ""});
    out.push_back('\n');
  }
  return out;
}

std::string write_edges_csv(const EdgeList& edges) {
  std::string out = "from,to\n";
  for (const auto& e : edges) {
    out += csv::join({e.from, e.to});
    out.push_back('\n');
  }
  return out;
}

CitationGraph::CitationGraph(std::vector<NodeMeta> nodes, const EdgeList& edges)
    : nodes_(std::move(nodes)) {
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (!index_.emplace(nodes_[i].id, i).second) throw DuplicateNode(nodes_[i].id);
  adjacency_ = Adjacency::Zero(n, n);
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    const auto from = index_of(e.from);
    if (!from) throw UnknownNode(e.from);
    const auto to = index_of(e.to);
    if (!to) throw UnknownNode(e.to);
    if (*from == *to) throw SelfLoopError(e.from);
    auto& cell = adjacency_(*from, *to);
    if (cell) continue;
    cell = 1;
    edges_.push_back(e);
  }
}

CitationGraph CitationGraph::from_edges(const EdgeList& edges) {
  std::vector<NodeMeta> nodes;
  std::set<std::string> seen;
  for (const auto& e : edges)
    for (const auto* id : {&e.from, &e.to})
      if (seen.insert(*id).second) nodes.push_back(NodeMeta{*id, {}, {}, {}});
  return CitationGraph(std::move(nodes), edges);
}

std::optional<std::size_t> CitationGraph::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::kYearOrder:
      return "year-order";
    case RemovalReason::kTieRandom:
      return "tie-random";
  }
  return "unknown";
}

CleanResult remove_mutual_edges(const CitationGraph& graph, std::uint64_t seed) {
  Rng rng(seed);
  const auto& y = graph.adjacency();
  CleanReport report;
  report.seed = seed;
  std::set<Edge> dropped;
  for (const auto& e : graph.edges()) {
    const auto r = *graph.index_of(e.from);
    const auto s = *graph.index_of(e.to);
    if (!y(s, r) || r > s) continue;  // visit each mutual pair once
    const auto& a = graph.node(r);
    const auto& b = graph.node(s);
    RemovedEdge removed;
    if (const auto cmp = chronology(a, b)) {
      // an earlier article cannot cite a later one
      removed = *cmp < 0 ? RemovedEdge{a.id, b.id, RemovalReason::kYearOrder}
                         : RemovedEdge{b.id, a.id, RemovalReason::kYearOrder};
    } else {
      removed = draw_bernoulli(rng, 0.5) ? RemovedEdge{a.id, b.id, RemovalReason::kTieRandom}
                                         : RemovedEdge{b.id, a.id, RemovalReason::kTieRandom};
    }
    dropped.insert(Edge{removed.from, removed.to});
    report.removed.push_back(std::move(removed));
  }
  EdgeList kept;
  kept.reserve(graph.edge_count() - dropped.size());
  for (const auto& e : graph.edges())
    if (!dropped.contains(e)) kept.push_back(e);
  return {CitationGraph(graph.nodes(), kept), std::move(report)};
}

std::optional<std::vector<std::string>> find_cycle(const CitationGraph& graph) {
  const auto cycle = find_cycle_indices(graph.adjacency());
  if (cycle.empty()) return std::nullopt;
  return cycle_witness_ids(cycle, &graph.nodes());
}

void assert_dag(const CitationGraph& graph) {
  if (auto witness = find_cycle(graph)) throw CycleFound(std::move(*witness));
}

Ordering topological_order(const CitationGraph& graph) {
  const auto& nodes = graph.nodes();
  auto order = kahn(graph.adjacency(), [&](int a, int b) {
    const auto& x = nodes[a];
    const auto& y = nodes[b];
    if (x.year.has_value() != y.year.has_value()) return x.year.has_value();
    if (x.year && *x.year != *y.year) return *x.year > *y.year;
    return x.id < y.id;
  });
  if (order.size() != graph.size()) assert_dag(graph);
  return Ordering(std::move(order));
}

Ordering topological_order(const Adjacency& y) {
  auto order = kahn(y, std::less<int>());
  if (order.size() != static_cast<std::size_t>(y.rows()))
    throw CycleFound(cycle_witness_ids(find_cycle_indices(y), nullptr));
  return Ordering(std::move(order));
}

double density(std::size_t n, std::size_t m, DensityMode mode) {
  if (n < 2) throw TooFewNodes("density needs at least 2 nodes, got " + std::to_string(n));
  const double ordered_pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  const double denom = mode == DensityMode::kDagHalved ? ordered_pairs / 2.0 : ordered_pairs;
  return static_cast<double>(m) / denom;
}

double density(const CitationGraph& graph, DensityMode mode) {
  return density(graph.size(), graph.edge_count(), mode);
}

CitationGraph induced_subgraph(const CitationGraph& graph, const std::set<std::string>& keep) {
  for (const auto& id : keep)
    if (!graph.index_of(id)) throw UnknownNode(id);
  std::vector<NodeMeta> nodes;
  for (const auto& node : graph.nodes())
    if (keep.contains(node.id)) nodes.push_back(node);
  EdgeList edges;
  for (const auto& e : graph.edges())
    if (keep.contains(e.from) && keep.contains(e.to)) edges.push_back(e);
  return CitationGraph(std::move(nodes), edges);
}

}  // namespace dagmm
