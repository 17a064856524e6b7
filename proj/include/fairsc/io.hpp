#pragma once

// Text formats and experiment plumbing:
//   edge list   optional "n <count>" header, then "i j w" lines (0-based,
//               each undirected edge once; w defaults to 1)
//   labels      "i c" lines, one per vertex (groups, assignments, truth)
//   config      "key = value" lines, lists comma separated
//   run records CSV with a header row
// '#' starts a comment everywhere.

#include "fairsc/error.hpp"
#include "fairsc/graph.hpp"
#include "fairsc/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fairsc {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string_view strip_comment(std::string_view s) {
  const auto p = s.find('#');
  return trim(p == std::string_view::npos ? s : s.substr(0, p));
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  Index i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
      ++i;
    const Index start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t')
      ++i;
    if (i > start)
      out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] inline void parse_fail(const std::string &source, Index line, const std::string &msg) {
  throw Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + msg);
}

inline Index parse_index(std::string_view tok, const std::string &source, Index line) {
  Index v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    parse_fail(source, line, "expected a nonnegative integer, got '" + std::string(tok) + "'");
  return v;
}

inline double parse_real(std::string_view tok, const std::string &source, Index line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
    parse_fail(source, line, "expected a real number, got '" + std::string(tok) + "'");
  return v;
}

inline std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string &path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return out;
}

// Shortest text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// Numeric tokens compare numerically (without leading zeros), others
// lexicographically.
inline bool id_less(const std::string &a, const std::string &b) {
  auto numeric = [](const std::string &s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (numeric(a) && numeric(b) && a.size() != b.size())
    return a.size() < b.size();
  return a < b;
}

} // namespace detail

/// Parses an edge list into a symmetric adjacency matrix. Repeats of the
/// same oriented line are summed; a pair listed in both orientations must
/// carry the same total weight and counts once.
inline CsrMatrix parse_edge_list(std::istream &in, const std::string &source = "<edges>") {
  std::optional<Index> declared;
  std::map<std::pair<Index, Index>, std::pair<double, double>> pairs; // (fwd, bwd) totals
  std::map<std::pair<Index, Index>, Index> first_line;
  Index max_id = 0;
  bool any = false;
  std::string raw;
  for (Index line = 1; std::getline(in, raw); ++line) {
    const auto s = detail::strip_comment(raw);
    if (s.empty())
      continue;
    const auto tok = detail::split_ws(s);
    if (tok[0] == "n") {
      if (tok.size() != 2 || declared || any)
        detail::parse_fail(source, line, "header must be a single leading 'n <count>' line");
      declared = detail::parse_index(tok[1], source, line);
      continue;
    }
    if (tok.size() < 2 || tok.size() > 3)
      detail::parse_fail(source, line, "expected 'i j [w]'");
    const Index i = detail::parse_index(tok[0], source, line);
    const Index j = detail::parse_index(tok[1], source, line);
    const double w = tok.size() == 3 ? detail::parse_real(tok[2], source, line) : 1.0;
    if (i == j)
      detail::parse_fail(source, line, "self-loop on vertex " + std::to_string(i));
    if (!(w > 0.0))
      detail::parse_fail(source, line, "edge weight must be positive");
    if (declared && std::max(i, j) >= *declared)
      detail::parse_fail(source, line, "vertex id exceeds declared n = " + std::to_string(*declared));
    const auto key = std::minmax(i, j);
    auto &entry = pairs[key];
    (i < j ? entry.first : entry.second) += w;
    first_line.try_emplace(key, line);
    max_id = std::max({max_id, i, j});
    any = true;
  }
  const Index n = declared ? *declared : (any ? max_id + 1 : 0);
  std::vector<Triplet> t;
  t.reserve(2 * pairs.size());
  for (const auto &[key, w] : pairs) {
    double v = w.first;
    if (w.first > 0.0 && w.second > 0.0) {
      if (w.first != w.second)
        detail::parse_fail(source, first_line[key],
                           "edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
                               " listed in both directions with different weights");
    } else {
      v = w.first + w.second;
    }
    t.push_back({key.first, key.second, v});
    t.push_back({key.second, key.first, v});
  }
  return csr_from_coo(t, n, n);
}

inline WeightedGraph load_graph(const std::string &path) {
  auto in = detail::open_in(path);
  return WeightedGraph(parse_edge_list(in, path));
}

inline void write_edge_list(std::ostream &out, const CsrMatrix &w) {
  out << "n " << w.rows() << '\n';
  for (Index i = 0; i < w.rows(); ++i)
    for (Index p = w.row_offsets()[i]; p < w.row_offsets()[i + 1]; ++p)
      if (w.col_indices()[p] > i)
        out << i << ' ' << w.col_indices()[p] << ' ' << detail::format_real(w.values()[p]) << '\n';
}

inline void save_graph(const std::string &path, const WeightedGraph &g) {
  auto out = detail::open_out(path);
  write_edge_list(out, g.adjacency());
}

/// "i c" lines covering every vertex exactly once. n defaults to the
/// number of lines; count defaults to max label + 1.
inline std::vector<int> parse_labels(std::istream &in, const std::string &source,
                                     std::optional<Index> n = std::nullopt) {
  std::vector<std::pair<Index, Index>> rows;
  std::string raw;
  std::set<Index> seen;
  for (Index line = 1; std::getline(in, raw); ++line) {
    const auto s = detail::strip_comment(raw);
    if (s.empty())
      continue;
    const auto tok = detail::split_ws(s);
    if (tok.size() != 2)
      detail::parse_fail(source, line, "expected 'i label'");
    const Index i = detail::parse_index(tok[0], source, line);
    const Index c = detail::parse_index(tok[1], source, line);
    if (!seen.insert(i).second)
      detail::parse_fail(source, line, "vertex " + std::to_string(i) + " listed twice");
    rows.emplace_back(i, c);
  }
  const Index size = n.value_or(rows.size());
  if (rows.size() != size)
    throw Error(ErrorKind::DimensionMismatch, source + ": " + std::to_string(rows.size()) +
                                                  " labels for " + std::to_string(size) +
                                                  " vertices");
  std::vector<int> labels(size, -1);
  for (const auto &[i, c] : rows) {
    if (i >= size)
      throw Error(ErrorKind::Parse, source + ": vertex id " + std::to_string(i) +
                                        " out of range for n = " + std::to_string(size));
    labels[i] = static_cast<int>(c);
  }
  return labels;
}

inline int label_count(const std::vector<int> &labels) {
  return labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end()) + 1;
}

inline GroupPartition load_groups(const std::string &path, std::optional<Index> n = std::nullopt) {
  auto in = detail::open_in(path);
  auto labels = parse_labels(in, path, n);
  const int h = label_count(labels);
  return GroupPartition(std::move(labels), h);
}

inline Clustering load_clustering(const std::string &path, std::optional<Index> n = std::nullopt,
                                  std::optional<int> k = std::nullopt) {
  auto in = detail::open_in(path);
  auto labels = parse_labels(in, path, n);
  const int count = k.value_or(label_count(labels));
  return Clustering(std::move(labels), count);
}

inline void save_labels(const std::string &path, const Labeling &labels) {
  auto out = detail::open_out(path);
  for (Index i = 0; i < labels.size(); ++i)
    out << i << ' ' << labels[i] << '\n';
}

/// Flat "key = value" configuration. Values stay text until read with a
/// typed getter; lists are comma separated.
class Config {
public:
  Config() = default;

  static Config parse(std::istream &in, const std::string &source = "<config>") {
    Config c;
    std::string raw;
    for (Index line = 1; std::getline(in, raw); ++line) {
      const auto s = detail::strip_comment(raw);
      if (s.empty())
        continue;
      const auto eq = s.find('=');
      if (eq == std::string_view::npos)
        detail::parse_fail(source, line, "expected 'key = value'");
      const std::string key(detail::trim(s.substr(0, eq)));
      if (key.empty())
        detail::parse_fail(source, line, "empty key");
      if (c.values_.count(key))
        detail::parse_fail(source, line, "duplicate key '" + key + "'");
      c.values_[key] = std::string(detail::trim(s.substr(eq + 1)));
      c.lines_[key] = line;
    }
    c.source_ = source;
    return c;
  }

  static Config load(const std::string &path) {
    auto in = detail::open_in(path);
    return parse(in, path);
  }

  bool has(const std::string &key) const { return values_.count(key) > 0; }
  void set(const std::string &key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string> &entries() const { return values_; }

  /// Rejects keys outside `allowed` so typos fail before any run.
  void validate_keys(const std::set<std::string> &allowed) const {
    for (const auto &[key, _] : values_)
      if (!allowed.count(key))
        fail(key, "unknown key '" + key + "'");
  }

  std::string get(const std::string &key, std::optional<std::string> fallback = {}) const {
    const auto it = values_.find(key);
    if (it != values_.end())
      return it->second;
    if (!fallback)
      throw Error(ErrorKind::InvalidArgument, source_ + ": missing required key '" + key + "'");
    return *fallback;
  }

  double get_real(const std::string &key, std::optional<double> fallback = {}) const {
    if (!has(key) && fallback)
      return *fallback;
    return detail::parse_real(detail::trim(get(key)), source_, line_of(key));
  }

  Index get_index(const std::string &key, std::optional<Index> fallback = {}) const {
    if (!has(key) && fallback)
      return *fallback;
    return detail::parse_index(detail::trim(get(key)), source_, line_of(key));
  }

  std::vector<std::string> get_list(const std::string &key,
                                    std::vector<std::string> fallback = {}) const {
    if (!has(key))
      return fallback;
    std::vector<std::string> out;
    const std::string text = get(key);
    std::string_view rest = text;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = detail::trim(rest.substr(0, comma));
      if (!item.empty())
        out.emplace_back(item);
      if (comma == std::string_view::npos)
        break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  std::vector<Index> get_index_list(const std::string &key, std::vector<Index> fallback = {}) const {
    if (!has(key))
      return fallback;
    std::vector<Index> out;
    for (const auto &s : get_list(key))
      out.push_back(detail::parse_index(s, source_, line_of(key)));
    return out;
  }

private:
  Index line_of(const std::string &key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }
  [[noreturn]] void fail(const std::string &key, const std::string &msg) const {
    detail::parse_fail(source_, line_of(key), msg);
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, Index> lines_;
  std::string source_ = "<config>";
};

/// Seed and thread count from the environment, when set.
struct EnvOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

inline EnvOverrides read_env_overrides() {
  EnvOverrides e;
  auto read = [](const char *name) -> std::optional<Index> {
    const char *v = std::getenv(name);
    if (!v || !*v)
      return std::nullopt;
    return detail::parse_index(detail::trim(v), std::string("$") + name, 0);
  };
  if (auto s = read("FAIRSC_SEED"))
    e.seed = *s;
  if (auto t = read("FAIRSC_THREADS"))
    e.threads = static_cast<int>(std::max<Index>(1, *t));
  return e;
}

/// One CSV row per (algorithm, instance, seed).
struct RunRecord {
  std::string algorithm;
  Index n = 0, nnz = 0, h = 0, k = 0;
  std::uint64_t seed = 0;
  double t_build = 0.0, t_eigs = 0.0, t_kmeans = 0.0;
  Index matvecs = 0;
  std::optional<double> err, misclustered, average_balance, ncut;
  std::string status = "ok";

  static std::string csv_header() {
    return "algorithm,n,nnz,h,k,seed,t_build,t_eigs,t_kmeans,t_total,matvecs,err,"
           "misclustered,average_balance,ncut,status";
  }

  std::string csv_row() const {
    auto opt = [](const std::optional<double> &v) { return v ? detail::format_real(*v) : ""; };
    std::ostringstream s;
    s << algorithm << ',' << n << ',' << nnz << ',' << h << ',' << k << ',' << seed << ','
      << detail::format_real(t_build) << ',' << detail::format_real(t_eigs) << ','
      << detail::format_real(t_kmeans) << ',' << detail::format_real(t_build + t_eigs + t_kmeans)
      << ',' << matvecs << ',' << opt(err) << ',' << opt(misclustered) << ','
      << opt(average_balance) << ',' << opt(ncut) << ',' << status;
    return s.str();
  }
};

/// Appends a record, writing the header first when the file is new or empty.
inline void append_run_record(const std::string &path, const RunRecord &r) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::app);
  if (!out)
    throw Error(ErrorKind::Io, "cannot open '" + path + "' for appending");
  if (fresh)
    out << RunRecord::csv_header() << '\n';
  out << r.csv_row() << '\n';
}

/// Raw undirected graph with arbitrary vertex ids, reduced to its largest
/// connected component with unit weights. New ids 0..n-1 follow the order
/// of the original ids (numeric when they are all digits).
struct ConvertedGraph {
  CsrMatrix adjacency;
  std::vector<std::string> original_ids; // new id -> original token
};

inline ConvertedGraph convert_raw_edges(std::istream &in, const std::string &source = "<raw>") {
  std::unordered_map<std::string, Index> ids;
  std::vector<std::string> names;
  std::set<std::pair<Index, Index>> edges;
  auto id_of = [&](std::string_view tok) {
    const auto [it, inserted] = ids.try_emplace(std::string(tok), names.size());
    if (inserted)
      names.emplace_back(tok);
    return it->second;
  };
  std::string raw;
  for (Index line = 1; std::getline(in, raw); ++line) {
    auto s = detail::strip_comment(raw);
    if (s.empty() || s.front() == '%')
      continue;
    std::string buf(s);
    std::replace(buf.begin(), buf.end(), ',', ' ');
    const auto tok = detail::split_ws(buf);
    if (tok.size() < 2)
      detail::parse_fail(source, line, "expected at least two vertex ids");
    const Index a = id_of(tok[0]), b = id_of(tok[1]);
    if (a != b)
      edges.insert(std::minmax(a, b)); // self-loops dropped, duplicates merged
  }
  // Components by union-find.
  std::vector<Index> parent(names.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto &[a, b] : edges)
    parent[find(a)] = find(b);
  std::vector<Index> size(names.size(), 0);
  for (Index v = 0; v < names.size(); ++v)
    ++size[find(v)];
  require(!names.empty(), ErrorKind::Parse, source + ": no edges");
  // Largest component; ties go to the one containing the earliest vertex.
  Index best_root = find(0);
  for (Index v = 0; v < names.size(); ++v)
    if (size[find(v)] > size[best_root])
      best_root = find(v);

  std::vector<Index> keep;
  for (Index v = 0; v < names.size(); ++v)
    if (find(v) == best_root)
      keep.push_back(v);
  std::sort(keep.begin(), keep.end(),
            [&](Index x, Index y) { return detail::id_less(names[x], names[y]); });
  std::vector<Index> remap(names.size(), static_cast<Index>(-1));
  ConvertedGraph out;
  for (Index i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = i;
    out.original_ids.push_back(names[keep[i]]);
  }
  std::vector<Triplet> t;
  for (const auto &[a, b] : edges)
    if (remap[a] != static_cast<Index>(-1)) {
      t.push_back({remap[a], remap[b], 1.0});
      t.push_back({remap[b], remap[a], 1.0});
    }
  out.adjacency = csr_from_coo(t, keep.size(), keep.size());
  return out;
}

/// Maps a raw "id group" attribute file onto converted vertex ids. Group
/// tokens are relabeled 0..h-1 in id_less order.
inline std::vector<int> convert_raw_groups(std::istream &in, const ConvertedGraph &g,
                                           const std::string &source = "<raw groups>") {
  std::unordered_map<std::string, std::string> group_of;
  std::string raw;
  for (Index line = 1; std::getline(in, raw); ++line) {
    auto s = detail::strip_comment(raw);
    if (s.empty() || s.front() == '%')
      continue;
    std::string buf(s);
    std::replace(buf.begin(), buf.end(), ',', ' ');
    const auto tok = detail::split_ws(buf);
    if (tok.size() < 2)
      detail::parse_fail(source, line, "expected 'id group'");
    group_of[std::string(tok[0])] = std::string(tok.back());
  }
  std::set<std::string, decltype(&detail::id_less)> distinct(&detail::id_less);
  for (const auto &id : g.original_ids) {
    const auto it = group_of.find(id);
    if (it == group_of.end())
      throw Error(ErrorKind::Parse, source + ": no group for vertex '" + id + "'");
    distinct.insert(it->second);
  }
  std::map<std::string, int> code;
  for (const auto &d : distinct)
    code.emplace(d, static_cast<int>(code.size()));
  std::vector<int> out;
  for (const auto &id : g.original_ids)
    out.push_back(code[group_of[id]]);
  return out;
}

} // namespace fairsc
