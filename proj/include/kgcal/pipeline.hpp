#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcal/dataset.hpp"
#include "kgcal/kg_store.hpp"
#include "kgcal/llm_client.hpp"
#include "kgcal/records.hpp"

namespace kgcal {

enum class PanelMode { Llm, Deterministic };
enum class DatasetKind { MetaQa, WebQsp };

std::string panel_mode_name(PanelMode m);
PanelMode parse_panel_mode(const std::string& s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  DatasetKind dataset_kind = DatasetKind::MetaQa;
  std::filesystem::path dataset_path;
  std::filesystem::path kg_path;
  char kg_delimiter = '|';
  std::optional<int> hops;  // dataset hop count (required for MetaQA)
  int max_hops = 0;         // 0: use each question's hop count
  std::size_t path_cap = 30;
  InterventionSet active = InterventionSet::all();
  PanelMode panel_mode = PanelMode::Llm;
  bool strict_panel = false;
  CompletionParams params;
  std::string endpoint_url;
  int retries = 3;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> mock_script;
  std::string system_preamble;
  int bins = 10;
  std::filesystem::path out_dir = "runs";
  int max_in_flight = 4;

  /// Throws ConfigError.
  void validate() const;
  std::string records_filename() const { return "records_" + active.suffix() + ".jsonl"; }
  std::string report_filename() const { return "report_" + active.suffix() + ".json"; }
  std::string bins_filename() const { return "bins_" + active.suffix() + ".csv"; }
};

/// Flat JSON object whose keys mirror RunConfig (see README).
RunConfig load_config(const std::filesystem::path& path);
void apply_config_json(RunConfig& cfg, const std::string& json_text);

/// Retrieval, t0 -> t1/t2, panel, CCI selection and scoring for one
/// question. Never throws for per-question failures: they are recorded in
/// `error` with an empty answer and zero confidence.
PredictionRecord run_question(const Question& q, const KnowledgeGraph& kg, LlmClient& client,
                              const RunConfig& cfg);

/// Runs every question on up to max_in_flight workers; records come back in
/// question order.
std::vector<PredictionRecord> run_questions(const std::vector<Question>& questions,
                                            const KnowledgeGraph& kg, LlmClient& client,
                                            const RunConfig& cfg);

struct RunResult {
  std::filesystem::path records_path;
  std::filesystem::path report_path;
  std::filesystem::path bins_path;
  CalibrationReport report;
  long question_errors = 0;
  long backend_calls = 0;
};

/// Loads data, runs, writes records/report/bins under cfg.out_dir. A null
/// backend is built from the config (mock script or HTTP endpoint).
RunResult run_dataset(const RunConfig& cfg, std::shared_ptr<Backend> backend = nullptr);

/// Report recomputed from a records file.
CalibrationReport replay(const std::filesystem::path& records_path, int m);

std::shared_ptr<Backend> make_backend(const RunConfig& cfg);

}  // namespace kgcal
