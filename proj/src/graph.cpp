#include "stdgm/graph.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"

#include "stdgm/csv.hpp"
#include "stdgm/error.hpp"

namespace stdgm {

using nlohmann::json;

bool DependenceGraph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::find(edges.begin(), edges.end(), std::make_pair(i, j)) != edges.end();
}

EdgeSet DependenceGraph::edge_set() const { return {edges.begin(), edges.end()}; }

std::vector<int> DependenceGraph::isolated_nodes() const {
  std::vector<int> out;
  for (int v = 0; v < nodes(); ++v)
    if (std::none_of(edges.begin(), edges.end(), [v](const auto& e) { return e.first == v || e.second == v; }))
      out.push_back(v);
  return out;
}

const EdgeStatistic& DependenceGraph::statistic(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& s : statistics)
    if (s.i == i && s.j == j) return s;
  throw Error(ErrorKind::parameter, "no statistic for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

std::vector<EdgeStatistic> edge_statistics(const PartialField& partial) {
  std::vector<EdgeStatistic> out;
  const auto& grid = partial.grid;
  const bool any_singular = std::any_of(partial.singular.begin(), partial.singular.end(), [](char c) { return c != 0; });
  for (const auto& pair : partial.pairs) {
    EdgeStatistic s{pair.i, pair.j, 0.0, {}, !any_singular};
    bool first = true;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!grid.counts_in_statistics(g) || partial.singular[g]) continue;
      if (first || pair.abs_d[g] > s.sup) {
        s.sup = pair.abs_d[g];
        s.argmax = grid.point(g);
        first = false;
      }
    }
    out.push_back(s);
  }
  return out;
}

DependenceGraph with_threshold(DependenceGraph graph, double xi) {
  graph.xi = xi;
  graph.edges.clear();
  if (graph.degenerate) return graph;
  for (const auto& s : graph.statistics)
    if (s.sup >= xi) graph.edges.emplace_back(s.i, s.j);
  return graph;
}

DependenceGraph build_dependence_graph(const PartialField& partial, double xi, std::vector<std::string> labels) {
  if (static_cast<int>(labels.size()) != partial.dim)
    throw Error(ErrorKind::parameter, "label count does not match the partial field dimension");
  if (!std::isfinite(xi)) throw Error(ErrorKind::parameter, "threshold xi must be finite");
  DependenceGraph g;
  g.labels = std::move(labels);
  g.grid = partial.grid;
  g.statistics = edge_statistics(partial);
  g.degenerate = partial.degenerate;
  g.warnings = partial.warnings;
  if (g.degenerate) g.warnings.push_back("graph is degenerate: no edge statistics could be formed");
  for (const auto& s : g.statistics)
    if (!s.reliable && !g.degenerate)
      g.warnings.push_back("statistic for pair (" + g.labels[static_cast<std::size_t>(s.i)] + "," +
                           g.labels[static_cast<std::size_t>(s.j)] + ") excludes singular grid points");
  return with_threshold(std::move(g), xi);
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

json grid_json(const FrequencyGrid& g) {
  return {{"p_max", g.p_max}, {"q_min", g.q_min}, {"q_max", g.q_max}, {"u_min", g.u_min},
          {"u_max", g.u_max}, {"steps", g.steps}, {"include_dc", g.include_dc}};
}

json statistic_json(const DependenceGraph& g, const EdgeStatistic& s) {
  return {{"i", s.i},
          {"j", s.j},
          {"source", g.labels[static_cast<std::size_t>(s.i)]},
          {"target", g.labels[static_cast<std::size_t>(s.j)]},
          {"S", s.sup},
          {"argmax", {{"p", s.argmax.p}, {"q", s.argmax.q}, {"u", s.argmax.u}}},
          {"reliable", s.reliable}};
}

}  // namespace

std::string to_dot(const DependenceGraph& g) {
  std::string out = "graph STDGM {\n";
  out += "  // xi=" + csv::fmt(g.xi) + " grid=" + g.grid.describe() + "\n";
  for (const auto& [key, value] : g.provenance) out += "  // " + key + "=" + value + "\n";
  if (g.degenerate) out += "  // degenerate=true\n";
  out += "  graph [xi=" + dot_quote(csv::fmt(g.xi)) + "];\n";
  for (int v = 0; v < g.nodes(); ++v)
    out += "  n" + std::to_string(v) + " [label=" + dot_quote(g.labels[static_cast<std::size_t>(v)]) + "];\n";
  for (const auto& [i, j] : g.edges) {
    const EdgeStatistic& s = g.statistic(i, j);
    out += "  n" + std::to_string(i) + " -- n" + std::to_string(j) + " [S=" + dot_quote(csv::fmt(s.sup)) +
           ", p=" + std::to_string(s.argmax.p) + ", q=" + std::to_string(s.argmax.q) +
           ", u=" + std::to_string(s.argmax.u) + (s.reliable ? "" : ", reliable=false") + "];\n";
  }
  return out + "}\n";
}

std::string to_json(const DependenceGraph& g) {
  json nodes = json::array(), edges = json::array(), stats = json::array();
  const auto isolated = g.isolated_nodes();
  for (int v = 0; v < g.nodes(); ++v)
    nodes.push_back({{"id", v},
                     {"label", g.labels[static_cast<std::size_t>(v)]},
                     {"isolated", std::find(isolated.begin(), isolated.end(), v) != isolated.end()}});
  for (const auto& [i, j] : g.edges) edges.push_back(statistic_json(g, g.statistic(i, j)));
  for (const auto& s : g.statistics) stats.push_back(statistic_json(g, s));
  json doc = {{"nodes", nodes},          {"edges", edges},           {"statistics", stats},
              {"xi", g.xi},              {"grid", grid_json(g.grid)}, {"degenerate", g.degenerate},
              {"warnings", g.warnings}, {"provenance", g.provenance}};
  return doc.dump(2) + "\n";
}

DependenceGraph graph_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    DependenceGraph g;
    for (const auto& n : doc.at("nodes")) g.labels.push_back(n.at("label").get<std::string>());
    g.xi = doc.at("xi").get<double>();
    const auto& gr = doc.at("grid");
    g.grid = FrequencyGrid{gr.at("p_max").get<int>(), gr.at("q_min").get<int>(), gr.at("q_max").get<int>(),
                           gr.at("u_min").get<int>(), gr.at("u_max").get<int>(), gr.at("steps").get<int>(),
                           gr.at("include_dc").get<bool>()};
    for (const auto& s : doc.at("statistics")) {
      const auto& a = s.at("argmax");
      g.statistics.push_back({s.at("i").get<int>(), s.at("j").get<int>(), s.at("S").get<double>(),
                              {a.at("p").get<int>(), a.at("q").get<int>(), a.at("u").get<int>()},
                              s.at("reliable").get<bool>()});
    }
    for (const auto& e : doc.at("edges")) g.edges.emplace_back(e.at("i").get<int>(), e.at("j").get<int>());
    g.degenerate = doc.at("degenerate").get<bool>();
    g.warnings = doc.at("warnings").get<std::vector<std::string>>();
    g.provenance = doc.at("provenance").get<std::map<std::string, std::string>>();
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("graph JSON: ") + e.what());
  }
}

std::string export_graph(const DependenceGraph& graph, const std::string& format) {
  if (format == "dot") return to_dot(graph);
  if (format == "json") return to_json(graph);
  throw Error(ErrorKind::usage, "unknown graph format '" + format + "' (expected dot or json)");
}

SliceGraphs per_slice_graphs(const MultiPattern& pattern, const AnalysisOptions& options,
                             const std::vector<double>& xi_per_slice) {
  if (static_cast<int>(xi_per_slice.size()) != pattern.steps())
    throw Error(ErrorKind::parameter, "need one threshold per time slice");
  SliceGraphs out;
  AnalysisOptions slice_options = options;
  if (slice_options.widths) slice_options.widths->u = 0;
  for (int t = 1; t <= pattern.steps(); ++t) {
    const MultiPattern slice = pattern.slice(t);
    const Analysis a = analyse(slice, slice_options);
    DependenceGraph g = build_dependence_graph(a.partial, xi_per_slice[static_cast<std::size_t>(t - 1)], slice.labels);
    g.provenance["slice"] = std::to_string(t);
    out.slices.push_back(std::move(g));
  }
  if (!out.slices.empty()) {
    const auto& stats = out.slices.front().statistics;
    out.persistence.resize(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k)
      for (std::size_t t = 0; t < out.slices.size(); ++t)
        if (out.slices[t].has_edge(stats[k].i, stats[k].j)) out.persistence[k].push_back(static_cast<int>(t) + 1);
  }
  return out;
}

}  // namespace stdgm
