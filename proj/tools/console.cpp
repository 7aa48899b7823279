// console run --input <path>... --out <path>

#include <iostream>

#include "cli_common.hpp"
#include "dnlp/console.hpp"

int main(int argc, char** argv) {
  using namespace dnlp;
  CLI::App app{"Sequential single-threaded simplification baseline"};
  app.require_subcommand(1);
  std::vector<std::string> inputs;
  std::string out, stopwords, suffixes;
  auto* run = app.add_subcommand("run", "Simplify input files into one output file");
  run->add_option("--input", inputs, "Input files, processed in order")->required()->expected(1, -1);
  run->add_option("--out", out, "Output file")->required();
  run->add_option("--stopwords", stopwords, "Stopword file")->check(CLI::ExistingFile);
  run->add_option("--suffixes", suffixes, "Suffix rule file")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  return cli::guarded([&] {
    const text::SimplifierConfig config = cli::load_simplifier(stopwords, suffixes);
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    auto run_info = console::run_sequential(paths, config, out);
    std::cout << "lines=" << run_info.lines_processed
              << " wall_ms=" << std::chrono::duration_cast<std::chrono::milliseconds>(run_info.wall_time).count()
              << '\n';
    return 0;
  });
}
