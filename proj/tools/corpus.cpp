// corpus put <path> | corpus ls | corpus cat <file>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_common.hpp"
#include "dnlp/corpus_store.hpp"

int main(int argc, char** argv) {
  using namespace dnlp;
  CLI::App app{"Line-aligned block store with replicated placement"};
  app.require_subcommand(1);
  std::string root = cli::default_store_root();
  app.add_option("--store", root, "Store root directory (env DNLP_STORE)");

  std::string path, name, config_file;
  std::optional<std::uint64_t> block_size;
  std::optional<std::uint32_t> replication, nodes;
  auto* put = app.add_subcommand("put", "Split a UTF-8 text file into blocks and store replicas");
  put->add_option("path", path, "Input file")->required()->check(CLI::ExistingFile);
  put->add_option("--name", name, "Stored name (default: input file name)");
  put->add_option("--config", config_file, "key=value file (dfs.block.size, dfs.replication, store.nodes)");
  put->add_option("--block-size", block_size, "Block size in bytes");
  put->add_option("--replication", replication, "Replicas per block");
  put->add_option("--nodes", nodes, "Number of store nodes");

  auto* ls = app.add_subcommand("ls", "List stored files");
  bool long_format = false;
  ls->add_flag("-l,--long", long_format, "Show sizes and block counts");

  std::string cat_name;
  auto* cat = app.add_subcommand("cat", "Write a stored file to stdout");
  cat->add_option("file", cat_name, "Stored name")->required();

  CLI11_PARSE(app, argc, argv);

  return cli::guarded([&] {
    corpus::Store store(root);
    if (*put) {
      corpus::StoreConfig config;
      if (!config_file.empty()) config = corpus::StoreConfig::load(config_file);
      if (block_size) config.block_size = *block_size;
      if (replication) config.replication = *replication;
      if (nodes) config.node_count = *nodes;
      std::ifstream in(path, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      if (name.empty()) name = std::filesystem::path(path).filename().string();
      auto m = store.put_file(name, ss.str(), config);
      std::cout << name << ": " << m.total_bytes << " bytes, " << m.blocks.size() << " blocks, "
                << config.effective_replication() << " replicas each\n";
    } else if (*ls) {
      for (const auto& f : store.list()) {
        if (long_format) {
          auto m = store.manifest(f);
          std::cout << f << '\t' << m.total_bytes << '\t' << m.blocks.size() << '\n';
        } else {
          std::cout << f << '\n';
        }
      }
    } else if (*cat) {
      std::cout << store.read_file(cat_name);
    }
    return 0;
  });
}
