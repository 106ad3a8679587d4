#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <graphcurv/graph.hpp>
#include <graphcurv/report.hpp>

namespace graphcurv {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedGraph {
  WeightedGraph graph;
  VertexMeasure measure;
};

// Canonical JSON graph format:
//   { "n": int, "labels": [...]?, "edges": [[x, y, w_xy], ...],
//     "symmetric": bool, "measure": {"kind": "unit"|"degree"|"explicit",
//                                    "values": [...]?} }
// With "symmetric": true each listed edge materializes both directions.

inline ojson graph_to_json(const WeightedGraph& g, const VertexMeasure& mu) {
  ojson j;
  j["n"] = g.num_vertices();
  if (!g.labels().empty()) j["labels"] = g.labels();
  ojson edges = ojson::array();
  for (int x = 0; x < g.num_vertices(); ++x)
    for (const Edge& e : g.neighbors(x)) {
      if (g.symmetric() && e.to < x) continue;  // one entry per undirected edge
      edges.push_back(ojson::array({x, e.to, e.weight}));
    }
  j["edges"] = std::move(edges);
  j["symmetric"] = g.symmetric();
  ojson m;
  switch (mu.kind()) {
    case VertexMeasure::Kind::unit:
      m["kind"] = "unit";
      break;
    case VertexMeasure::Kind::degree:
      m["kind"] = "degree";
      break;
    case VertexMeasure::Kind::explicit_values:
      m["kind"] = "explicit";
      m["values"] = mu.values();
      break;
  }
  j["measure"] = std::move(m);
  return j;
}

inline LoadedGraph graph_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw parse_error("graph json: need an object with \"n\" and \"edges\"");
  const int n = j.at("n").get<int>();
  if (n < 0) throw parse_error("graph json: n must be nonnegative");
  const bool symmetric = j.value("symmetric", true);
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();

  std::vector<DirectedEdge> edges;
  std::size_t idx = 0;
  for (const auto& item : j.at("edges")) {
    if (!item.is_array() || item.size() != 3)
      throw parse_error("graph json: edge " + std::to_string(idx) + " must be [x, y, w]");
    const int x = item[0].get<int>();
    const int y = item[1].get<int>();
    const double w = item[2].get<double>();
    if (x < 0 || x >= n || y < 0 || y >= n)
      throw parse_error("graph json: edge " + std::to_string(idx) + " has a dangling endpoint");
    if (!(w > 0.0))
      throw parse_error("graph json: edge " + std::to_string(idx) + " has nonpositive weight");
    edges.emplace_back(x, y, w);
    if (symmetric) edges.emplace_back(y, x, w);
    ++idx;
  }
  LoadedGraph out;
  try {
    out.graph = WeightedGraph(n, edges, std::move(labels));
  } catch (const domain_error& e) {
    throw parse_error(std::string("graph json: ") + e.what());
  }

  std::string kind = "unit";
  if (j.contains("measure")) kind = j.at("measure").value("kind", "unit");
  if (kind == "unit") {
    out.measure = VertexMeasure::unit(n);
  } else if (kind == "degree") {
    out.measure = VertexMeasure::degree(out.graph);
  } else if (kind == "explicit") {
    if (!j.at("measure").contains("values"))
      throw parse_error("graph json: explicit measure needs \"values\"");
    auto vals = j.at("measure").at("values").get<std::vector<double>>();
    if (static_cast<int>(vals.size()) != n)
      throw parse_error("graph json: measure values size mismatch");
    out.measure = VertexMeasure::explicit_values(std::move(vals));
  } else {
    throw parse_error("graph json: unknown measure kind \"" + kind + "\"");
  }
  return out;
}

inline void save_graph(const std::string& path, const WeightedGraph& g, const VertexMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out << graph_to_json(g, mu).dump(2) << "\n";
}

inline LoadedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open: " + path);
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return graph_from_json(j);
}

// Edge-list text format: header line "# n=<N> symmetric=<bool>" followed by
// one "x y w" line per edge.

inline void save_edge_list(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out.precision(17);
  out << "# n=" << g.num_vertices() << " symmetric=" << (g.symmetric() ? "true" : "false")
      << "\n";
  for (int x = 0; x < g.num_vertices(); ++x)
    for (const Edge& e : g.neighbors(x)) {
      if (g.symmetric() && e.to < x) continue;
      out << x << " " << e.to << " " << e.weight << "\n";
    }
}

inline WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open: " + path);
  std::string header;
  std::getline(in, header);
  int n = -1;
  bool symmetric = true;
  {
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;
    if (tok != "#") throw parse_error(path + ":1: expected header '# n=<N> symmetric=<bool>'");
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      if (tok.rfind("symmetric=", 0) == 0) symmetric = tok.substr(10) == "true";
    }
    if (n < 0) throw parse_error(path + ":1: header missing n=<N>");
  }
  std::vector<DirectedEdge> edges;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int x, y;
    double w;
    if (!(ls >> x >> y >> w))
      throw parse_error(path + ":" + std::to_string(lineno) + ": expected 'x y w'");
    if (x < 0 || x >= n || y < 0 || y >= n)
      throw parse_error(path + ":" + std::to_string(lineno) + ": dangling vertex index");
    if (!(w > 0.0))
      throw parse_error(path + ":" + std::to_string(lineno) + ": nonpositive weight");
    edges.emplace_back(x, y, w);
    if (symmetric) edges.emplace_back(y, x, w);
  }
  try {
    return WeightedGraph(n, edges);
  } catch (const domain_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

}  // namespace graphcurv
