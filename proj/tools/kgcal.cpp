// kgcal: run the calibrated KG-RAG pipeline, or recompute metrics from records.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "kgcal/pipeline.hpp"
#include "kgcal/prompts.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitQuestionErrors = 2;

void print_summary(const kgcal::CalibrationReport& r, std::ostream& os) {
  os << std::fixed << std::setprecision(4) << "n=" << r.n << "  acc=" << r.accuracy
     << "  ece=" << r.ece << "  brier=" << r.brier << "  auc=" << r.selective_auc
     << "  tokens/correct=";
  if (r.tokens_per_correct_defined)
    os << std::setprecision(2) << r.tokens_per_correct;
  else
    os << "n/a";
  os << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causality-aware calibration for knowledge-graph RAG"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Answer a dataset and write records + report");
  std::string config_path, dataset, dataset_kind, kg, panel_mode, cache_dir, out_dir, mock_script;
  std::vector<std::string> ablate;
  int hops = 0, bins = 0, max_in_flight = 0;
  bool strict_panel = false;
  run->add_option("--config", config_path, "Flat JSON config")->check(CLI::ExistingFile);
  run->add_option("--dataset", dataset, "Question file");
  run->add_option("--dataset-kind", dataset_kind, "metaqa | webqsp")
      ->check(CLI::IsMember({"metaqa", "webqsp"}));
  run->add_option("--kg", kg, "Triple file");
  run->add_option("--hops", hops, "Dataset hop count (1 or 3)")->check(CLI::IsMember({1, 3}));
  run->add_option("--panel-mode", panel_mode, "llm | deterministic")
      ->check(CLI::IsMember({"llm", "deterministic"}));
  run->add_option("--ablate", ablate, "Drop an intervention (t1 | t2); repeatable")
      ->check(CLI::IsMember({"t1", "t2"}));
  run->add_option("--bins", bins, "Reliability bins")->check(CLI::PositiveNumber);
  run->add_option("--cache-dir", cache_dir, "Response cache directory");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--mock-script", mock_script, "Scripted mock backend (JSON)")
      ->check(CLI::ExistingFile);
  run->add_option("--max-in-flight", max_in_flight, "Concurrent questions")
      ->check(CLI::PositiveNumber);
  run->add_flag("--strict-panel", strict_panel, "Fail the question instead of falling back");

  // replay / report
  auto* replay = app.add_subcommand("replay", "Recompute the report from a records file");
  auto* report = app.add_subcommand("report", "Print metrics for a records file");
  std::string records_path;
  int replay_bins = 10;
  std::string replay_out;
  for (auto* sub : {replay, report}) {
    sub->add_option("records", records_path, "records_*.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("--bins", replay_bins, "Reliability bins")->check(CLI::PositiveNumber);
  }
  replay->add_option("--out", replay_out, "Directory for report/bins (default: next to records)");

  auto* prompts = app.add_subcommand("prompts", "Write the prompt catalog (markdown)");
  std::string catalog_out;
  prompts->add_option("--out", catalog_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      kgcal::RunConfig cfg;
      if (!config_path.empty()) cfg = kgcal::load_config(config_path);
      if (!dataset.empty()) cfg.dataset_path = dataset;
      if (dataset_kind == "metaqa") cfg.dataset_kind = kgcal::DatasetKind::MetaQa;
      if (dataset_kind == "webqsp") cfg.dataset_kind = kgcal::DatasetKind::WebQsp;
      if (!kg.empty()) cfg.kg_path = kg;
      if (hops != 0) cfg.hops = hops;
      if (!panel_mode.empty()) cfg.panel_mode = kgcal::parse_panel_mode(panel_mode);
      for (const auto& a : ablate) cfg.active.erase(*kgcal::parse_intervention(a));
      if (bins != 0) cfg.bins = bins;
      if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (!mock_script.empty()) cfg.mock_script = mock_script;
      if (max_in_flight != 0) cfg.max_in_flight = max_in_flight;
      if (strict_panel) cfg.strict_panel = true;

      const auto result = kgcal::run_dataset(cfg);
      std::cout << "records: " << result.records_path.string() << '\n'
                << "report:  " << result.report_path.string() << '\n'
                << "backend calls: " << result.backend_calls << '\n';
      print_summary(result.report, std::cout);
      if (result.question_errors > 0) {
        std::cerr << result.question_errors << " question(s) failed; see the error field\n";
        return kExitQuestionErrors;
      }
      return kExitOk;
    }

    if (*replay || *report) {
      const auto r = kgcal::replay(records_path, replay_bins);
      if (*report) {
        print_summary(r, std::cout);
        return kExitOk;
      }
      std::filesystem::path dir =
          replay_out.empty() ? std::filesystem::path(records_path).parent_path()
                             : std::filesystem::path(replay_out);
      if (!dir.empty()) std::filesystem::create_directories(dir);
      std::string stem = std::filesystem::path(records_path).stem().string();
      if (stem.rfind("records_", 0) == 0) stem = stem.substr(8);
      const auto report_path = dir / ("report_" + stem + ".json");
      std::ofstream(report_path, std::ios::binary | std::ios::trunc) << kgcal::report_to_json(r);
      std::ofstream(dir / ("bins_" + stem + ".csv"), std::ios::binary | std::ios::trunc)
          << kgcal::bins_to_csv(r.bins);
      std::cout << "report: " << report_path.string() << '\n';
      print_summary(r, std::cout);
      return kExitOk;
    }

    if (*prompts) {
      if (catalog_out.empty()) {
        std::cout << kgcal::prompt_catalog();
      } else {
        std::ofstream(catalog_out, std::ios::binary | std::ios::trunc) << kgcal::prompt_catalog();
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitOk;
}
