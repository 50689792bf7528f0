#include "kgcal/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "kgcal/canonicalize.hpp"
#include "kgcal/cci.hpp"
#include "kgcal/panel.hpp"
#include "kgcal/prompts.hpp"

namespace kgcal {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_tokens(PredictionRecord& r, const CompletionResult& c) {
  r.prompt_tokens += c.prompt_tokens;
  r.completion_tokens += c.completion_tokens;
}

using RecordSink = std::function<void(const PredictionRecord&)>;

// Workers finish out of order; the sink sees records in question order.
void run_ordered(const std::vector<Question>& questions, const KnowledgeGraph& kg,
                 LlmClient& client, const RunConfig& cfg, const RecordSink& sink) {
  const std::size_t n = questions.size();
  std::vector<std::optional<PredictionRecord>> done(n);
  std::size_t next_to_emit = 0;
  std::mutex emit_mutex;
  std::atomic<std::size_t> next_question{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next_question.fetch_add(1);
      if (i >= n) return;
      PredictionRecord rec = run_question(questions[i], kg, client, cfg);
      std::lock_guard lock(emit_mutex);
      done[i] = std::move(rec);
      while (next_to_emit < n && done[next_to_emit]) {
        sink(*done[next_to_emit]);
        done[next_to_emit].reset();
        ++next_to_emit;
      }
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.max_in_flight)), n);
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
}

}  // namespace

std::string panel_mode_name(PanelMode m) {
  return m == PanelMode::Llm ? "llm" : "deterministic";
}

PanelMode parse_panel_mode(const std::string& s) {
  if (s == "llm") return PanelMode::Llm;
  if (s == "deterministic") return PanelMode::Deterministic;
  throw ConfigError("panel_mode must be 'llm' or 'deterministic', got '" + s + "'");
}

void RunConfig::validate() const {
  if (!active.contains(InterventionId::T0)) throw ConfigError("T0 must stay active");
  if (bins < 1) throw ConfigError("bins must be at least 1");
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
  if (path_cap < 1) throw ConfigError("path_cap must be at least 1");
  if (max_hops < 0) throw ConfigError("max_hops must be non-negative");
  if (params.temperature < 0) throw ConfigError("temperature must be non-negative");
  if (params.max_output_tokens < 1) throw ConfigError("max_output_tokens must be positive");
  if (retries < 0) throw ConfigError("retries must be non-negative");
  if (hops && *hops != 1 && *hops != 3) throw ConfigError("hops must be 1 or 3");
  if (dataset_kind == DatasetKind::MetaQa && !hops)
    throw ConfigError("hops is required for MetaQA datasets");
  if (kg_delimiter == '\n' || kg_delimiter == '\r') throw ConfigError("invalid kg delimiter");
}

void apply_config_json(RunConfig& cfg, const std::string& json_text) {
  const json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("config: expected a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "dataset_kind") {
        const auto kind = value.get<std::string>();
        if (kind == "metaqa") cfg.dataset_kind = DatasetKind::MetaQa;
        else if (kind == "webqsp") cfg.dataset_kind = DatasetKind::WebQsp;
        else throw ConfigError("dataset_kind must be 'metaqa' or 'webqsp'");
      } else if (key == "dataset") cfg.dataset_path = value.get<std::string>();
      else if (key == "kg") cfg.kg_path = value.get<std::string>();
      else if (key == "kg_delimiter") {
        const auto d = value.get<std::string>();
        if (d.size() != 1) throw ConfigError("kg_delimiter must be one character");
        cfg.kg_delimiter = d[0];
      } else if (key == "hops") cfg.hops = value.get<int>();
      else if (key == "max_hops") cfg.max_hops = value.get<int>();
      else if (key == "path_cap") cfg.path_cap = value.get<std::size_t>();
      else if (key == "ablate") {
        cfg.active = InterventionSet::all();
        for (const auto& a : value) {
          auto id = parse_intervention(a.get<std::string>());
          if (!id || *id == InterventionId::T0)
            throw ConfigError("ablate accepts t1 and t2 only");
          cfg.active.erase(*id);
        }
      } else if (key == "panel_mode") cfg.panel_mode = parse_panel_mode(value.get<std::string>());
      else if (key == "strict_panel") cfg.strict_panel = value.get<bool>();
      else if (key == "model") cfg.params.model = value.get<std::string>();
      else if (key == "temperature") cfg.params.temperature = value.get<double>();
      else if (key == "max_output_tokens") cfg.params.max_output_tokens = value.get<int>();
      else if (key == "endpoint_url") cfg.endpoint_url = value.get<std::string>();
      else if (key == "retries") cfg.retries = value.get<int>();
      else if (key == "cache_dir") cfg.cache_dir = value.get<std::string>();
      else if (key == "mock_script") cfg.mock_script = value.get<std::string>();
      else if (key == "system_preamble") cfg.system_preamble = value.get<std::string>();
      else if (key == "bins") cfg.bins = value.get<int>();
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "max_in_flight") cfg.max_in_flight = value.get<int>();
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig cfg;
  apply_config_json(cfg, read_file(path));
  return cfg;
}

std::shared_ptr<Backend> make_backend(const RunConfig& cfg) {
  if (cfg.mock_script) return std::make_shared<MockBackend>(MockBackend::from_file(*cfg.mock_script));
  if (cfg.endpoint_url.empty()) throw ConfigError("either endpoint_url or mock_script is required");
  HttpBackend::Options opts;
  opts.endpoint_url = cfg.endpoint_url;
  opts.retries = cfg.retries;
  for (const char* var : {"KGCAL_API_KEY", "OPENAI_API_KEY"}) {
    if (const char* key = std::getenv(var); key && *key) {
      opts.api_key = key;
      break;
    }
  }
  return std::make_shared<HttpBackend>(std::move(opts));
}

PredictionRecord run_question(const Question& q, const KnowledgeGraph& kg, LlmClient& client,
                              const RunConfig& cfg) {
  PredictionRecord rec;
  rec.question_id = q.id;
  try {
    const auto linked = link_entities(kg, q);
    const int max_hops = cfg.max_hops > 0 ? cfg.max_hops : q.hops;
    std::vector<Path> paths;
    for (const auto& entity : linked) {
      if (paths.size() >= cfg.path_cap) break;
      auto more = enumerate_paths(kg, entity, max_hops, cfg.path_cap - paths.size());
      paths.insert(paths.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
    }

    const Conversation base = render_initial(q, serialize_paths(paths), cfg.system_preamble);
    const auto initial = client.complete(base, cfg.params);
    add_tokens(rec, initial);
    std::array<std::string, 3> answers;
    answers[0] = parse_answer_line(initial.text);
    rec.a0 = answers[0];

    for (auto id : {InterventionId::T1, InterventionId::T2}) {
      if (!cfg.active.contains(id)) continue;
      const auto result = client.complete(render_counterfactual(base, answers[0], id), cfg.params);
      add_tokens(rec, result);
      answers[index_of(id)] = parse_answer_line(result.text);
      (id == InterventionId::T1 ? rec.a1 : rec.a2) = answers[index_of(id)];
    }

    std::map<InterventionId, std::string> by_id;
    for (auto id : cfg.active.ordered()) by_id[id] = answers[index_of(id)];
    rec.candidates = merge_answers(by_id);

    if (cfg.panel_mode == PanelMode::Llm) {
      const auto panel = client.complete(render_panel(answers, cfg.active), cfg.params);
      add_tokens(rec, panel);
      try {
        rec.matrix = parse_panel_reply(panel.text, rec.candidates, cfg.active);
      } catch (const PanelParseError&) {
        if (cfg.strict_panel) throw;
        rec.fallback_used = true;
        rec.matrix = score_deterministic(rec.candidates, cfg.active);
      }
    } else {
      rec.matrix = score_deterministic(rec.candidates, cfg.active);
    }

    const Selection sel = select(rec.matrix);
    rec.scores = sel.scores;
    rec.chosen = sel.chosen;
    rec.confidence = sel.confidence;
    rec.tie_broken = sel.tie_broken;
    rec.correct = exact_match(rec.chosen, q.gold_answers);
  } catch (const std::exception& e) {
    rec.chosen.clear();
    rec.confidence = 0.0;
    rec.correct = false;
    rec.error = e.what();
  }
  return rec;
}

std::vector<PredictionRecord> run_questions(const std::vector<Question>& questions,
                                            const KnowledgeGraph& kg, LlmClient& client,
                                            const RunConfig& cfg) {
  std::vector<PredictionRecord> out;
  out.reserve(questions.size());
  run_ordered(questions, kg, client, cfg, [&](const PredictionRecord& r) { out.push_back(r); });
  return out;
}

RunResult run_dataset(const RunConfig& cfg, std::shared_ptr<Backend> backend) {
  cfg.validate();
  const KnowledgeGraph kg = load_triples_file(cfg.kg_path.string(), cfg.kg_delimiter);

  std::ifstream data(cfg.dataset_path);
  if (!data) throw ConfigError("cannot open dataset " + cfg.dataset_path.string());
  const std::vector<Question> questions = cfg.dataset_kind == DatasetKind::MetaQa
                                              ? load_metaqa(data, *cfg.hops)
                                              : load_webqsp(data, cfg.hops);
  if (questions.empty()) throw ConfigError("dataset holds no questions");

  if (!backend) backend = make_backend(cfg);
  LlmClient client(std::move(backend), {cfg.cache_dir, cfg.max_in_flight});

  std::filesystem::create_directories(cfg.out_dir);
  RunResult result;
  result.records_path = cfg.out_dir / cfg.records_filename();
  result.report_path = cfg.out_dir / cfg.report_filename();
  result.bins_path = cfg.out_dir / cfg.bins_filename();

  std::vector<PredictionRecord> records;
  {
    std::ofstream out(result.records_path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + result.records_path.string());
    run_ordered(questions, kg, client, cfg, [&](const PredictionRecord& r) {
      out << record_to_line(r) << '\n';
      out.flush();
      records.push_back(r);
    });
  }

  for (const auto& r : records)
    if (!r.error.empty()) ++result.question_errors;
  result.backend_calls = client.backend_calls();
  result.report = report_from_records(records, cfg.bins);
  std::ofstream(result.report_path, std::ios::binary | std::ios::trunc)
      << report_to_json(result.report);
  std::ofstream(result.bins_path, std::ios::binary | std::ios::trunc)
      << bins_to_csv(result.report.bins);
  return result;
}

CalibrationReport replay(const std::filesystem::path& records_path, int m) {
  std::ifstream in(records_path);
  if (!in) throw RecordError("cannot open " + records_path.string());
  const auto records = read_records(in);
  if (records.empty()) throw RecordError(records_path.string() + ": no records");
  return report_from_records(records, m);
}

}  // namespace kgcal
