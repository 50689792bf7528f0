#include <random>
#include <sstream>

#include "doctest.h"
#include "kgcal/dataset.hpp"

using namespace kgcal;

namespace {

std::vector<Question> metaqa(const std::string& text, int hops = 3) {
  std::istringstream in(text);
  return load_metaqa(in, hops);
}

std::vector<Question> webqsp(const std::string& text, std::optional<int> hops = {}) {
  std::istringstream in(text);
  return load_webqsp(in, hops);
}

}  // namespace

TEST_CASE("load_metaqa") {
  SUBCASE("case study II line") {
    const auto qs = metaqa(
        "The films that share directors with the films [Tiresia] are written by who?\tBertrand Bonello\n");
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].id == "metaqa-3hop-1");
    CHECK(qs[0].topic_entities == std::vector<std::string>{"Tiresia"});
    CHECK(qs[0].gold_answers == std::vector<std::string>{"Bertrand Bonello"});
    CHECK(qs[0].text == "The films that share directors with the films Tiresia are written by who?");
    CHECK(qs[0].hops == 3);
  }
  SUBCASE("multiple answers") {
    const auto qs = metaqa("who acted in [X]\ta|b|c\n", 1);
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].gold_answers.size() == 3);
    CHECK(qs[0].id == "metaqa-1hop-1");
  }
  SUBCASE("ids follow line numbers") {
    const auto qs = metaqa("[a] x\t1\n\n[b] y\t2\n", 1);
    REQUIRE(qs.size() == 2);
    CHECK(qs[1].id == "metaqa-1hop-3");
  }
  SUBCASE("errors carry the line number") {
    CHECK_THROWS_WITH(metaqa("[a] ok\tx\nno tab here [b]\n"), doctest::Contains("line 2"));
    CHECK_THROWS_WITH(metaqa("no entity\tx\n"), doctest::Contains("line 1"));
    CHECK_THROWS_WITH(metaqa("[a] q\t | \n"), doctest::Contains("empty gold answers"));
    CHECK_THROWS(metaqa("[a] q\tx\n", 2));
  }
}

TEST_CASE("load_webqsp") {
  SUBCASE("case study I record") {
    const auto qs = webqsp(
        R"({"id":"WebQTest-1","question":"what is the capital of argentina?","topic_entity":"Argentina","answers":["Buenos Aires"]})"
        "\n");
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].id == "WebQTest-1");
    CHECK(qs[0].gold_answers == std::vector<std::string>{"Buenos Aires"});
    CHECK(qs[0].topic_entities == std::vector<std::string>{"Argentina"});
    CHECK(qs[0].hops == 1);
  }
  SUBCASE("topic list and hops precedence") {
    const std::string text =
        "{\"hops\":3}\n"
        R"({"question":"q1","topic_entity":["A","B"],"answers":["x"]})" "\n"
        R"({"question":"q2","topic_entity":"A","answers":["x"],"hops":1})" "\n";
    const auto qs = webqsp(text);
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].topic_entities.size() == 2);
    CHECK(qs[0].hops == 3);
    CHECK(qs[0].id == "webqsp-0");
    CHECK(qs[1].hops == 1);
    CHECK(webqsp(text, 1)[0].hops == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH(webqsp(R"({"question":"q","topic_entity":"A","answers":[]})"),
                      doctest::Contains("empty gold answers"));
    CHECK_THROWS_WITH(webqsp(R"({"question":"q","answers":["x"]})"),
                      doctest::Contains("topic_entity"));
    CHECK_THROWS_WITH(webqsp("{\"question\":\"q\",\"topic_entity\":\"A\",\"answers\":[\"x\"]}\n"
                             "{\"topic_entity\":\"A\",\"answers\":[\"x\"]}\n"),
                      doctest::Contains("record 1"));
    CHECK_THROWS(webqsp("not json\n"));
  }
}

TEST_CASE("loaders are deterministic and produce valid questions on fuzzed files") {
  std::mt19937 rng(11);
  const std::vector<std::string> words{"who", "directed", "the", "film", "starred", "in"};
  const std::vector<std::string> names{"Ann Lee", "Bo", "Cy Young", "Dee"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int lines = 1 + static_cast<int>(rng() % 8);
    for (int l = 0; l < lines; ++l) {
      std::string q;
      for (int w = 0; w < 4; ++w) q += words[rng() % words.size()] + " ";
      q += "[" + names[rng() % names.size()] + "]";
      text += q + "\t";
      const int answers = 1 + static_cast<int>(rng() % 3);
      for (int a = 0; a < answers; ++a) text += (a ? "|" : "") + names[rng() % names.size()];
      text += "\n";
    }
    const int hops = rng() % 2 ? 1 : 3;
    const auto first = metaqa(text, hops);
    const auto second = metaqa(text, hops);
    REQUIRE(first.size() == static_cast<std::size_t>(lines));
    for (std::size_t i = 0; i < first.size(); ++i) {
      CHECK_NOTHROW(check_question(first[i]));
      CHECK(first[i].id == second[i].id);
      CHECK(first[i].text == second[i].text);
      CHECK(first[i].gold_answers == second[i].gold_answers);
    }
  }
}
