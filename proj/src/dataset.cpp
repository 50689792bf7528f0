#include "kgcal/dataset.hpp"

#include "json.hpp"

namespace kgcal {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string at_line(long line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

void check_question(const Question& q) {
  if (q.gold_answers.empty()) throw DatasetError(q.id + ": empty gold answers");
  if (q.topic_entities.empty()) throw DatasetError(q.id + ": no topic entity");
  if (q.hops != 1 && q.hops != 3) throw DatasetError(q.id + ": hops must be 1 or 3");
}

std::vector<Question> load_metaqa(std::istream& source, int hops) {
  if (hops != 1 && hops != 3) throw DatasetError("hops must be 1 or 3");
  std::vector<Question> out;
  std::string line;
  for (long line_no = 1; std::getline(source, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DatasetError(at_line(line_no, "missing tab"));
    std::string text = line.substr(0, tab);
    const auto open = text.find('[');
    const auto close = open == std::string::npos ? open : text.find(']', open);
    if (close == std::string::npos)
      throw DatasetError(at_line(line_no, "missing bracketed topic entity"));

    Question q;
    q.id = "metaqa-" + std::to_string(hops) + "hop-" + std::to_string(line_no);
    q.hops = hops;
    const std::string entity = trim(std::string_view(text).substr(open + 1, close - open - 1));
    if (entity.empty()) throw DatasetError(at_line(line_no, "empty topic entity"));
    q.topic_entities.push_back(entity);
    text.erase(close, 1);
    text.erase(open, 1);
    q.text = trim(text);

    const std::string answers = line.substr(tab + 1);
    std::size_t pos = 0;
    for (;;) {
      const auto bar = answers.find('|', pos);
      std::string a = trim(std::string_view(answers).substr(pos, bar - pos));
      if (!a.empty()) q.gold_answers.push_back(std::move(a));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    if (q.gold_answers.empty()) throw DatasetError(at_line(line_no, "empty gold answers"));
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Question> load_webqsp(std::istream& source, std::optional<int> hops_override) {
  std::vector<Question> out;
  std::optional<int> header_hops;
  std::string line;
  long record = 0;
  for (long line_no = 1; std::getline(source, line); ++line_no) {
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(at_line(line_no, std::string("invalid JSON: ") + e.what()));
    }
    if (!obj.is_object()) throw DatasetError(at_line(line_no, "expected an object"));
    if (!obj.contains("question") && obj.contains("hops")) {
      header_hops = obj.at("hops").get<int>();
      continue;
    }
    const std::string where = "record " + std::to_string(record);
    auto require = [&](const char* field) -> const json& {
      if (!obj.contains(field))
        throw DatasetError(where + ": missing field '" + field + "'");
      return obj.at(field);
    };
    try {
      Question q;
      q.id = obj.contains("id") ? obj.at("id").get<std::string>()
                                : "webqsp-" + std::to_string(record);
      q.text = trim(require("question").get<std::string>());
      const json& topic = require("topic_entity");
      if (topic.is_string()) {
        q.topic_entities.push_back(topic.get<std::string>());
      } else {
        for (const auto& t : topic) q.topic_entities.push_back(t.get<std::string>());
      }
      for (const auto& a : require("answers")) q.gold_answers.push_back(a.get<std::string>());
      if (q.gold_answers.empty()) throw DatasetError(where + ": empty gold answers");
      if (q.topic_entities.empty()) throw DatasetError(where + ": empty topic_entity");
      q.hops = hops_override.value_or(
          obj.contains("hops") ? obj.at("hops").get<int>() : header_hops.value_or(1));
      if (q.hops != 1 && q.hops != 3) throw DatasetError(where + ": hops must be 1 or 3");
      out.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw DatasetError(where + ": " + e.what());
    }
    ++record;
  }
  return out;
}

}  // namespace kgcal
