#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgcal {

struct Question {
  std::string id;
  std::string text;  // brackets around the topic entity removed
  std::vector<std::string> topic_entities;
  std::vector<std::string> gold_answers;
  int hops = 1;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DatasetError if a Question invariant is violated.
void check_question(const Question& q);

/// MetaQA QA file: "text with [entity]<TAB>a|b|c" per line.
std::vector<Question> load_metaqa(std::istream& source, int hops);

/// One JSON object per line with keys question, topic_entity (string or
/// list), answers (list), and optional id / hops. A line holding an object
/// with "hops" but no "question" is a file header. Hop precedence:
/// override, record, header, then 1.
std::vector<Question> load_webqsp(std::istream& source, std::optional<int> hops_override = {});

}  // namespace kgcal
