#include "kgcal/kg_store.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <unordered_set>

#include "kgcal/canonicalize.hpp"
#include "kgcal/dataset.hpp"

namespace kgcal {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

const std::vector<Edge> kNoEdges;

}  // namespace

const std::vector<Edge>& KnowledgeGraph::out_edges(const std::string& entity) const {
  auto it = out_.find(entity);
  return it == out_.end() ? kNoEdges : it->second;
}

const std::vector<Edge>& KnowledgeGraph::in_edges(const std::string& entity) const {
  auto it = in_.find(entity);
  return it == in_.end() ? kNoEdges : it->second;
}

const std::string* KnowledgeGraph::lookup(std::string_view text) const {
  auto it = entity_index_.find(normalize(text));
  return it == entity_index_.end() ? nullptr : &it->second;
}

void KnowledgeGraph::add(const Triple& t) {
  const std::size_t index = triples_.size();
  triples_.push_back(t);
  for (const auto* e : {&t.subject, &t.object}) {
    if (out_.try_emplace(*e).second) {
      in_.try_emplace(*e);
      entities_.push_back(*e);
      // First entity to claim a key keeps it.
      entity_index_.try_emplace(normalize(*e), *e);
    }
  }
  out_[t.subject].push_back({t.relation, t.object, index});
  in_[t.object].push_back({t.relation, t.subject, index});
}

KnowledgeGraph KnowledgeGraph::from_triples(const std::vector<Triple>& triples) {
  KnowledgeGraph kg;
  std::unordered_set<std::string> seen;
  for (const auto& t : triples) {
    std::string key = t.subject + '\0' + t.relation + '\0' + t.object;
    if (seen.insert(std::move(key)).second) kg.add(t);
  }
  return kg;
}

KnowledgeGraph load_triples(std::istream& source, char delimiter) {
  std::vector<Triple> triples;
  std::string line;
  for (long line_no = 1; std::getline(source, line); ++line_no) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
      const auto next = line.find(delimiter, pos);
      fields.push_back(trim(std::string_view(line).substr(pos, next - pos)));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (fields.size() != 3)
      throw KgError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                    std::to_string(fields.size()));
    for (const auto& f : fields)
      if (f.empty()) throw KgError("line " + std::to_string(line_no) + ": empty field");
    triples.push_back({fields[0], fields[1], fields[2]});
  }
  if (triples.empty()) throw KgError("empty knowledge graph");
  return KnowledgeGraph::from_triples(triples);
}

KnowledgeGraph load_triples_file(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw KgError("cannot open " + path);
  return load_triples(in, delimiter);
}

std::vector<std::string> link_entities(const KnowledgeGraph& kg, const Question& question) {
  std::vector<std::string> linked;
  for (const auto& topic : question.topic_entities) {
    const std::string* hit = kg.lookup(topic);
    if (hit && std::find(linked.begin(), linked.end(), *hit) == linked.end())
      linked.push_back(*hit);
  }
  if (linked.empty()) throw KgError("no linked entity");
  return linked;
}

std::vector<Path> enumerate_paths(const KnowledgeGraph& kg, const std::string& start,
                                  int max_hops, std::size_t cap) {
  std::vector<Path> result;
  if (max_hops < 1 || cap == 0 || !kg.contains(start)) return result;

  std::deque<Path> frontier;
  frontier.push_back(Path{start, {}, {}});
  while (!frontier.empty()) {
    Path path = std::move(frontier.front());
    frontier.pop_front();
    if (static_cast<int>(path.hops.size()) >= max_hops) continue;

    auto visited = [&path](const std::string& e) {
      if (e == path.start) return true;
      for (const auto& h : path.hops)
        if (h.entity == e) return true;
      return false;
    };
    auto extend = [&](const Edge& edge, Direction dir) {
      if (visited(edge.neighbor)) return false;
      Path next = path;
      next.hops.push_back({edge.relation, dir, edge.neighbor});
      next.source_triples.push_back(edge.triple_index);
      result.push_back(next);
      if (result.size() >= cap) return true;
      frontier.push_back(std::move(next));
      return false;
    };

    const std::string tail = path.tail();
    for (const auto& e : kg.out_edges(tail))
      if (extend(e, Direction::Forward)) return result;
    for (const auto& e : kg.in_edges(tail))
      if (extend(e, Direction::Backward)) return result;
  }
  return result;
}

std::string serialize_paths(const std::vector<Path>& paths) {
  std::string out;
  for (const auto& p : paths) {
    if (!out.empty()) out += '\n';
    std::string from = p.start;
    for (std::size_t i = 0; i < p.hops.size(); ++i) {
      const auto& h = p.hops[i];
      if (i > 0) out += ' ';
      out += from;
      out += h.direction == Direction::Backward ? " inverse " : " ";
      out += h.relation + ' ' + h.entity + '.';
      from = h.entity;
    }
  }
  return out;
}

}  // namespace kgcal
