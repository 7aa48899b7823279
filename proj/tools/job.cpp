// job run --input <file_name> --mapper ... --workers N --out <dir>

#include <iostream>

#include "cli_common.hpp"
#include "dnlp/engine.hpp"

int main(int argc, char** argv) {
  using namespace dnlp;
  CLI::App app{"Run a map-only (or word count) job over stored files"};
  app.require_subcommand(1);
  std::string root = cli::default_store_root();
  app.add_option("--store", root, "Store root directory (env DNLP_STORE)");

  std::vector<std::string> inputs;
  mr::JobSpec spec;
  std::string out;
  long overhead_ms = 0;
  std::optional<std::size_t> fail_worker, after_tasks;
  auto* run = app.add_subcommand("run", "Run a job");
  run->add_option("--input", inputs, "Stored file name (repeatable)")->required();
  run->add_option("--mapper", spec.mapper, "simplify | identity | wordcount-map")
      ->check(CLI::IsMember({"simplify", "identity", "wordcount-map"}));
  run->add_option("--reducer", spec.reducer, "none | wordcount")->check(CLI::IsMember({"none", "wordcount"}));
  run->add_option("--workers", spec.workers, "Concurrent workers")->required()->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output directory (must be empty or absent)")->required();
  run->add_option("--task-overhead-ms", overhead_ms, "Fixed per-task dispatch delay")->check(CLI::NonNegativeNumber);
  auto* fw = run->add_option("--fail-worker", fail_worker, "Inject a failure on this worker ordinal");
  auto* at = run->add_option("--after-tasks", after_tasks, "... midway through its task after N completions");
  fw->needs(at);
  at->needs(fw);
  std::string stopwords, suffixes;
  run->add_option("--stopwords", stopwords, "Stopword file")->check(CLI::ExistingFile);
  run->add_option("--suffixes", suffixes, "Suffix rule file")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  return cli::guarded([&] {
    corpus::Store store(root);
    for (const auto& name : inputs) spec.inputs.push_back(store.manifest(name));
    spec.output_dir = out;
    spec.task_overhead = std::chrono::milliseconds(overhead_ms);
    if (fail_worker) spec.failure_plan = mr::FailurePlan{*fail_worker, *after_tasks};
    const text::SimplifierConfig config = cli::load_simplifier(stopwords, suffixes);
    auto r = mr::run_job(store, spec, config);
    std::cout << r.job_id << " tasks=" << r.tasks_total << " retried=" << r.tasks_retried
              << " wall_ms=" << std::chrono::duration_cast<std::chrono::milliseconds>(r.wall_time).count() << '\n';
    return 0;
  });
}
