// bench scaling | bench split | bench report

#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_common.hpp"
#include "dnlp/bench.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw dnlp::IoError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dnlp;
  CLI::App app{"Console-vs-parallel and split-count benchmarks"};
  app.require_subcommand(1);

  bench::BenchOptions options;
  std::string work_dir = (std::filesystem::temp_directory_path() / "dnlp-bench").string();
  std::string unit = "MiB";
  std::size_t repeats = 10;
  std::string csv;
  bool keep = false;
  std::uint64_t block_size = options.store.block_size;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--unit", unit, "Unit for sizes: B, KiB, MiB, GiB");
    sub->add_option("--repeats", repeats, "Runs per cell (fastest and slowest dropped)")->check(CLI::Range(3, 1000));
    sub->add_option("--csv", csv, "Write records to this CSV file");
    sub->add_option("--work-dir", work_dir, "Scratch directory for corpora, store and outputs");
    sub->add_option("--block-size", block_size, "Store block size in bytes");
    sub->add_option("--seed", options.seed, "Corpus seed");
    sub->add_flag("--keep", keep, "Keep the scratch directory");
  };

  std::vector<std::uint64_t> sizes = {1, 4, 16, 64};
  std::vector<std::size_t> scaling_workers = {4};
  auto* scaling = app.add_subcommand("scaling", "Console vs parallel over a size ladder");
  scaling->add_option("--sizes", sizes, "Comma separated sizes")->delimiter(',');
  scaling->add_option("--workers", scaling_workers, "Worker count(s), comma separated")->delimiter(',');
  common(scaling);

  std::uint64_t split_size = 64;
  std::vector<std::size_t> files = {1, 16, 256, 1024};
  std::size_t split_workers = 4;
  long overhead_ms = 5;
  auto* split = app.add_subcommand("split", "One file vs many files of the same total size");
  split->add_option("--size", split_size, "Total size");
  split->add_option("--files", files, "Comma separated file counts")->delimiter(',');
  split->add_option("--workers", split_workers, "Workers")->check(CLI::PositiveNumber);
  split->add_option("--task-overhead-ms", overhead_ms, "Per-task dispatch delay")->check(CLI::NonNegativeNumber);
  common(split);

  std::string report_csv;
  auto* report = app.add_subcommand("report", "Render tables from a CSV file");
  report->add_option("--csv", report_csv, "CSV written by scaling/split")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  return cli::guarded([&] {
    if (*report) {
      std::ifstream in(report_csv, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      std::cout << bench::render_report(bench::parse_csv(ss.str()));
      return 0;
    }

    const std::uint64_t scale = cli::unit_bytes(unit);
    options.work_dir = work_dir;
    options.store.block_size = block_size;
    options.log = [](const std::string& msg) { std::cerr << "[bench] " << msg << '\n'; };
    // only ever wipe a directory this tool created
    const auto marker = options.work_dir / ".dnlp-bench";
    if (std::filesystem::exists(options.work_dir) && !std::filesystem::is_empty(options.work_dir) &&
        !std::filesystem::exists(marker))
      throw ConfigError("--work-dir " + options.work_dir.string() + " is not empty and was not created by bench");
    std::filesystem::remove_all(options.work_dir);
    std::filesystem::create_directories(options.work_dir);
    write_text(marker.string(), "");

    std::vector<bench::ExperimentRecord> records;
    if (*scaling) {
      std::vector<std::uint64_t> bytes;
      for (auto s : sizes) bytes.push_back(s * scale);
      records = bench::experiment_scaling(bytes, scaling_workers, repeats, options);
    } else {
      auto result = bench::experiment_split(split_size * scale, files, split_workers, repeats,
                                            std::chrono::milliseconds(overhead_ms), options);
      for (std::size_t i = 0; i < result.records.size(); ++i)
        std::cerr << "[bench] files=" << result.records[i].file_count << " tasks=" << result.planned_tasks[i] << '\n';
      records = std::move(result.records);
    }
    if (!keep) std::filesystem::remove_all(options.work_dir);

    const std::string text = bench::to_csv(records);
    if (!csv.empty()) write_text(csv, text);
    std::cout << text << '\n' << bench::render_report(records);
    return 0;
  });
}
