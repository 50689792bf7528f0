#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgcal {

struct Question;

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class Direction { Forward, Backward };

/// Adjacency entry. `neighbor` is the object for out-edges and the subject
/// for in-edges.
struct Edge {
  std::string relation;
  std::string neighbor;
  std::size_t triple_index;
};

struct Hop {
  std::string relation;
  Direction direction;
  std::string entity;  // entity reached by this hop

  friend bool operator==(const Hop&, const Hop&) = default;
};

struct Path {
  std::string start;
  std::vector<Hop> hops;
  std::vector<std::size_t> source_triples;

  const std::string& tail() const { return hops.empty() ? start : hops.back().entity; }
  friend bool operator==(const Path&, const Path&) = default;
};

class KgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable triple store with out/in adjacency in file order.
class KnowledgeGraph {
 public:
  const std::vector<Triple>& triples() const { return triples_; }
  /// Entities in first-appearance order.
  const std::vector<std::string>& entities() const { return entities_; }

  const std::vector<Edge>& out_edges(const std::string& entity) const;
  const std::vector<Edge>& in_edges(const std::string& entity) const;
  bool contains(const std::string& entity) const { return out_.count(entity) > 0; }

  /// Canonical surface string for a normalized key, or nullptr.
  const std::string* lookup(std::string_view text) const;

  /// Dedups identical triples (first occurrence wins).
  static KnowledgeGraph from_triples(const std::vector<Triple>& triples);

 private:
  void add(const Triple& t);

  std::vector<Triple> triples_;
  std::vector<std::string> entities_;
  std::unordered_map<std::string, std::vector<Edge>> out_;
  std::unordered_map<std::string, std::vector<Edge>> in_;
  std::unordered_map<std::string, std::string> entity_index_;
};

/// One triple per line, fields split on `delimiter`. Blank lines are skipped.
/// Throws KgError("line N: ...") for malformed lines and
/// KgError("empty knowledge graph") when nothing was read.
KnowledgeGraph load_triples(std::istream& source, char delimiter = '|');
KnowledgeGraph load_triples_file(const std::string& path, char delimiter = '|');

/// Canonical KG strings for the question's topic entities, in question order,
/// without duplicates. Throws KgError("no linked entity") if none resolve.
std::vector<std::string> link_entities(const KnowledgeGraph& kg, const Question& question);

/// Breadth-first simple paths of 1..max_hops hops from `start`, following
/// edges in both directions. Ordered by hop count, then adjacency order (out
/// edges before in edges). At most `cap` paths.
std::vector<Path> enumerate_paths(const KnowledgeGraph& kg, const std::string& start,
                                  int max_hops, std::size_t cap);

/// One line per path, hops rendered "subject relation object." (backward hops
/// as "entity inverse relation next.") and joined by spaces.
std::string serialize_paths(const std::vector<Path>& paths);

}  // namespace kgcal
