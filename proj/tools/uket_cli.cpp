// uket: command-line front end for the tribunal-judgment extraction pipeline.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "uket/annotation_service.hpp"
#include "uket/corpus.hpp"
#include "uket/dataset.hpp"
#include "uket/error.hpp"
#include "uket/extraction.hpp"
#include "uket/llm_gateway.hpp"
#include "uket/pipeline.hpp"
#include "uket/prompting.hpp"
#include "uket/quality_check.hpp"
#include "uket/stats.hpp"
#include "uket/text_util.hpp"

namespace fs = std::filesystem;
using namespace uket;

namespace {

PromptRegistry open_registry(const std::string& prompts_dir) {
  return prompts_dir.empty() ? PromptRegistry::with_builtin() : PromptRegistry::from_directory(prompts_dir);
}

std::vector<CaseDocument> sampled_cases(const std::vector<CaseDocument>& corpus, const SampleManifest& sample) {
  std::map<std::string, const CaseDocument*> by_id;
  for (const auto& d : corpus) by_id[d.case_id] = &d;
  std::vector<CaseDocument> out;
  for (const auto& id : sample.case_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorCode::kDanglingReference, "sampled case " + id + " not in corpus");
    out.push_back(*it->second);
  }
  return out;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file_atomic(path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extraction, quality-check and dataset tooling for employment tribunal judgments"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load a corpus directory and report its page-count strata");
  std::string corpus_dir;
  ingest->add_option("--corpus-dir", corpus_dir, "Directory with manifest.json and <case>.txt files")
      ->required();

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw a seeded stratified sample");
  std::string plan_name = "table1";
  std::uint64_t seed = 0;
  std::string sample_out;
  sample_cmd->add_option("--corpus-dir", corpus_dir)->required();
  sample_cmd->add_option("--plan", plan_name, "Sample plan")->check(CLI::IsMember({"table1"}));
  sample_cmd->add_option("--seed", seed)->required();
  sample_cmd->add_option("--out", sample_out, "Sample manifest path")->required();

  // prompts
  auto* prompts = app.add_subcommand("prompts", "Inspect the prompt registry");
  prompts->require_subcommand(1);
  std::string prompts_dir;
  prompts->add_option("--prompts-dir", prompts_dir, "prompts/<id>/<version>.txt tree");
  auto* prompts_list = prompts->add_subcommand("list", "List templates");
  auto* prompts_show = prompts->add_subcommand("show", "Print a template's text");
  std::string template_ref;
  prompts_show->add_option("ref", template_ref, "<id>/<version>")->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Run extraction over a sample");
  std::string mode_name = "replay-strict", cache_dir, records_dir, responses_dir, config_path,
              sample_path;
  std::string extract_template = std::string(kFinalTemplateId) + "/" + std::string(kFinalTemplateVersion);
  int workers = 0;
  extract->add_option("--corpus-dir", corpus_dir)->required();
  extract->add_option("--sample", sample_path, "Sample manifest")->required();
  extract->add_option("--mode", mode_name)->check(CLI::IsMember({"live", "replay-strict", "record"}));
  extract->add_option("--cache", cache_dir, "Replay cache directory")->required();
  extract->add_option("--records", records_dir, "Output records directory")->required();
  extract->add_option("--responses", responses_dir, "Also keep raw responses here");
  extract->add_option("--config", config_path, "LLM endpoint config (JSON)");
  extract->add_option("--template", extract_template, "<id>/<version>");
  extract->add_option("--prompts-dir", prompts_dir);
  extract->add_option("--workers", workers, "Parallel requests (default: config max_in_flight)");

  // parse
  auto* parse = app.add_subcommand("parse", "Parse raw responses into records");
  std::string parse_in, parse_out;
  parse->add_option("--in", parse_in)->required();
  parse->add_option("--out", parse_out)->required();

  // lint
  auto* lint = app.add_subcommand("lint", "Lint extraction records");
  std::string lint_dir;
  bool lint_json = false;
  lint->add_option("records", lint_dir)->required();
  lint->add_flag("--json", lint_json, "Print findings as JSON lines");

  // qc
  auto* qc = app.add_subcommand("qc", "Quality-check annotation workflow");
  qc->require_subcommand(1);
  auto* qc_serve = qc->add_subcommand("serve", "Serve the review API");
  std::string annotations_dir = "annotations", ui_dir;
  int port = kDefaultServicePort;
  std::string host = "127.0.0.1";
  qc_serve->add_option("--sample", sample_path)->required();
  qc_serve->add_option("--corpus-dir", corpus_dir)->required();
  qc_serve->add_option("--records", records_dir)->required();
  qc_serve->add_option("--annotations", annotations_dir);
  qc_serve->add_option("--port", port);
  qc_serve->add_option("--host", host);
  qc_serve->add_option("--ui-dir", ui_dir, "Static review UI assets");
  auto* qc_export = qc->add_subcommand("export", "Export annotations as JSONL");
  std::string qc_out;
  qc_export->add_option("--annotations", annotations_dir)->required();
  qc_export->add_option("--out", qc_out, "Output file (default stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "Accuracy and occurrence statistics");
  stats->require_subcommand(1);
  auto* table2 = stats->add_subcommand("table2", "Per-aspect accuracy with 95% intervals");
  std::string subset, ci = "reference", json_out;
  table2->add_option("--annotations", annotations_dir)->required();
  table2->add_option("--records", records_dir)->required();
  table2->add_option("--subset", subset)->check(CLI::IsMember({"all", "suitable"}));
  table2->add_option("--ci", ci, "reference | wald")->check(CLI::IsMember({"reference", "wald"}));
  table2->add_option("--json-out", json_out, "Write the JSON twin here ('-' for stdout)");
  auto* suitability = stats->add_subcommand("suitability", "Suitable-for-prediction counts");
  suitability->add_option("--annotations", annotations_dir)->required();
  suitability->add_option("--corpus-dir", corpus_dir)->required();
  auto* rule21 = stats->add_subcommand("rule21", "Where Rule 21 citations appear");
  bool rule21_json = false;
  rule21->add_option("--records", records_dir)->required();
  rule21->add_flag("--json", rule21_json);

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Prediction dataset export");
  dataset->require_subcommand(1);
  auto* ds_export = dataset->add_subcommand("export", "Write a leakage-guarded JSONL dataset");
  std::string policy = "procedural-inclusive", ds_out;
  ds_export->add_option("--records", records_dir)->required();
  ds_export->add_option("--annotations", annotations_dir)->required();
  ds_export->add_option("--policy", policy)
      ->check(CLI::IsMember({"procedural-inclusive", "substantive-only"}));
  ds_export->add_option("--out", ds_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      const auto corpus = load_corpus(corpus_dir);
      const auto strata = stratify(corpus);
      std::cout << "cases: " << corpus.size() << "\n";
      for (const auto& [bucket, ids] : strata)
        if (!ids.empty()) std::cout << "  pages " << bucket.label() << ": " << ids.size() << "\n";
      return 0;
    }

    if (sample_cmd->parsed()) {
      const auto corpus = load_corpus(corpus_dir);
      const auto plan = SamplePlan::table1();
      const auto outcome = uket::sample(corpus, plan, seed);
      SampleManifest m{plan_name, seed, plan.strata(), outcome.case_ids, outcome.shortfalls};
      write_file_atomic(sample_out, sample_manifest_to_json(m));
      for (const auto& s : outcome.shortfalls)
        std::cerr << "warning: bucket " << s.bucket.label() << " has " << s.available << " cases, plan wants "
                  << s.target << "\n";
      std::cout << "sampled " << outcome.case_ids.size() << " cases -> " << sample_out << "\n";
      return 0;
    }

    if (prompts->parsed()) {
      const auto registry = open_registry(prompts_dir);
      if (prompts_list->parsed()) {
        for (const auto& t : registry.list_templates())
          std::cout << t.template_id << "/" << t.version << "\t" << t.summary << "\n";
      } else if (prompts_show->parsed()) {
        const auto [id, version] = PromptRegistry::split_ref(template_ref);
        std::cout << registry.get(id, version).text << "\n";
      }
      return 0;
    }

    if (extract->parsed()) {
      const Mode mode = parse_mode(mode_name);
      LlmConfig config = config_path.empty() ? llm_config_from_json("{}") : load_llm_config(config_path);
      const auto registry = open_registry(prompts_dir);
      const auto corpus = load_corpus(corpus_dir);
      const auto cases = sampled_cases(corpus, load_sample_manifest(sample_path));
      // Replay-strict never gets a transport, so it cannot reach the network.
      std::shared_ptr<Transport> transport;
      if (mode != Mode::kReplayStrict) transport = std::make_shared<HttpTransport>();
      Gateway gateway(config.gateway, transport, std::make_shared<ReplayCache>(cache_dir));

      ExtractionJob job;
      std::tie(job.template_id, job.version) = PromptRegistry::split_ref(extract_template);
      job.model = config.model;
      job.mode = mode;
      job.records_dir = records_dir;
      job.responses_dir = responses_dir;
      job.workers = workers > 0 ? workers : config.gateway.max_in_flight;
      const auto summary = run_extraction(cases, registry, gateway, job);
      for (const auto& f : summary.failures) std::cerr << f.case_id << ": " << f.error << "\n";
      const auto spend = gateway.spend_report();
      std::cout << "records: " << summary.succeeded << ", failures: " << summary.failures.size()
                << ", lint warnings: " << summary.lint_warnings << ", lint errors: " << summary.lint_errors
                << "\n";
      std::printf("live requests: %lld, replay hits: %lld, tokens: %lld, estimated cost: %.4f\n",
                  static_cast<long long>(spend.live_requests), static_cast<long long>(spend.replay_hits),
                  static_cast<long long>(spend.prompt_tokens + spend.completion_tokens), spend.estimated_cost);
      return summary.failures.empty() ? 0 : 2;
    }

    if (parse->parsed()) {
      const auto summary = parse_response_dir(parse_in, parse_out);
      for (const auto& f : summary.failures) std::cerr << f.case_id << ": " << f.error << "\n";
      std::cout << "records: " << summary.succeeded << ", failures: " << summary.failures.size() << "\n";
      return summary.failures.empty() ? 0 : 2;
    }

    if (lint->parsed()) {
      int errors = 0;
      for (const auto& r : load_records(lint_dir)) {
        for (const auto& f : lint_record(r)) {
          if (f.severity == Severity::kError) ++errors;
          if (lint_json) {
            nlohmann::ordered_json j{{"case_id", r.case_id},
                                     {"rule_id", f.rule_id},
                                     {"severity", severity_name(f.severity)},
                                     {"section", aspect_key(f.section)},
                                     {"message", f.message}};
            std::cout << j.dump() << "\n";
          } else {
            std::cout << r.case_id << "\t" << f.rule_id << "\t" << severity_name(f.severity) << "\t"
                      << aspect_key(f.section) << "\t" << f.message << "\n";
          }
        }
      }
      return errors == 0 ? 0 : 1;
    }

    if (qc_serve->parsed()) {
      const auto corpus = load_corpus(corpus_dir);
      auto cases = sampled_cases(corpus, load_sample_manifest(sample_path));
      AnnotationStore store(annotations_dir);
      AnnotationService service(std::move(cases), load_records(records_dir), store);
      httplib::Server server;
      service.bind(server, ui_dir.empty() ? std::nullopt : std::optional<fs::path>(ui_dir));
      std::cout << "listening on http://" << host << ":" << port << "\n" << std::flush;
      if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }

    if (qc_export->parsed()) {
      AnnotationStore store(annotations_dir);
      write_or_print(qc_out, store.export_jsonl());
      return 0;
    }

    if (table2->parsed()) {
      const auto annotations = load_annotations(annotations_dir);
      const auto records = load_records(records_dir);
      const auto table = summarize(annotations, records, parse_ci_convention(ci));
      std::optional<Subset> only;
      if (subset == "all") only = Subset::kAll;
      if (subset == "suitable") only = Subset::kSuitableOnly;
      if (json_out != "-") std::cout << render_table_text(table, only);
      if (!json_out.empty()) write_or_print(json_out, table_to_json(table, only));
      return 0;
    }

    if (suitability->parsed()) {
      const auto annotations = load_annotations(annotations_dir);
      std::map<std::string, int> pages;
      for (const auto& d : load_corpus(corpus_dir)) pages[d.case_id] = d.page_count;
      const auto rate = suitability_rate(annotations, pages);
      std::cout << "suitable: " << rate.count << " of " << rate.total << " (" << rate.percent_display
                << "), more than one page: " << rate.multipage_count << "\n";
      return 0;
    }

    if (rule21->parsed()) {
      const auto report = rule21_report(load_records(records_dir));
      std::cout << (rule21_json ? rule21_to_json(report) : render_rule21_text(report));
      return 0;
    }

    if (ds_export->parsed()) {
      const auto result =
          export_dataset(load_records(records_dir), load_annotations(annotations_dir), parse_policy(policy), ds_out);
      for (const auto& s : result.skipped) std::cerr << "skipped " << s.case_id << ": " << s.reason << "\n";
      std::cout << "exported " << result.examples.size() << " examples -> " << ds_out << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return 1;
  }
  return 0;
}
