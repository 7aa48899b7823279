// simplify --stdin | simplify --file <path>

#include <fstream>
#include <iostream>

#include "cli_common.hpp"
#include "dnlp/simplifier.hpp"

int main(int argc, char** argv) {
  using namespace dnlp;
  CLI::App app{"Simplify Turkish text line by line"};
  bool from_stdin = false;
  std::string file, stopwords, suffixes;
  auto* in_opt = app.add_flag("--stdin", from_stdin, "Read lines from standard input");
  app.add_option("--file", file, "Read lines from a file")->check(CLI::ExistingFile)->excludes(in_opt);
  app.add_option("--stopwords", stopwords, "Stopword file (one entry per line, bigrams allowed)")
      ->check(CLI::ExistingFile);
  app.add_option("--suffixes", suffixes, "Suffix rule file (suffix<TAB>min_stem_chars)")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);
  if (!from_stdin && file.empty()) {
    std::cerr << "one of --stdin or --file is required\n";
    return 1;
  }

  return cli::guarded([&] {
    const text::SimplifierConfig config = cli::load_simplifier(stopwords, suffixes);
    std::ifstream fin;
    if (!file.empty()) fin.open(file, std::ios::binary);
    std::istream& in = file.empty() ? std::cin : fin;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::cout << text::simplify_line(line, config) << '\n';
    }
    return 0;
  });
}
