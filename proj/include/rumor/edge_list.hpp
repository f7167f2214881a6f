#pragma once

// Plain-text edge list:
//
//   # comment
//   n 5
//   0 1
//   1 2
//
// The optional "n <count>" header must precede every edge line and fixes the
// node count, so isolated nodes survive a round trip. Without it n is one
// more than the largest identifier. LF and CRLF are accepted; the writer
// emits LF, the header, and each edge once as "u v" with u < v.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/graph.hpp"

namespace rumor {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "malformed token '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace detail

inline Graph read_edge_list(std::istream& in) {
  std::optional<std::uint64_t> declared_n;
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;
  bool any_edge = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.front() == "n") {
      if (tokens.size() != 2) throw ParseError(line_no, "header must be 'n <count>'");
      if (declared_n) throw ParseError(line_no, "duplicate 'n' header");
      if (any_edge) throw ParseError(line_no, "'n' header must precede edges");
      declared_n = detail::parse_id(tokens[1], line_no);
      if (*declared_n == 0) throw ParseError(line_no, "node count must be positive");
      if (*declared_n > UINT32_MAX) throw ParseError(line_no, "node count too large");
      continue;
    }
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'u v', got " + std::to_string(tokens.size()) + " tokens");
    const auto u = detail::parse_id(tokens[0], line_no);
    const auto v = detail::parse_id(tokens[1], line_no);
    if (u == v) throw ParseError(line_no, "self-loop at node " + std::to_string(u));
    if (declared_n && (u >= *declared_n || v >= *declared_n)) {
      throw ParseError(line_no, "node id " + std::to_string(std::max(u, v)) + " >= n=" + std::to_string(*declared_n));
    }
    if (u >= UINT32_MAX || v >= UINT32_MAX) throw ParseError(line_no, "node id too large");
    max_id = std::max({max_id, u, v});
    any_edge = true;
    edges.push_back({static_cast<node_id>(u), static_cast<node_id>(v)});
  }
  const std::uint64_t n = declared_n ? *declared_n : (any_edge ? max_id + 1 : 0);
  if (n == 0) throw ParseError(line_no, "empty graph: no header and no edges");
  return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

inline Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.n() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

inline Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

inline void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file '" + path + "'");
  write_edge_list(g, out);
}

}  // namespace rumor
