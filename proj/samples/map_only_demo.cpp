// Ingest a small generated corpus, run a map-only simplify job with four
// workers, and check the result against the sequential baseline.

#include <filesystem>
#include <iostream>

#include "dnlp/dnlp.hpp"

namespace fs = std::filesystem;

int main() {
  const fs::path work = fs::temp_directory_path() / "dnlp-map-only-demo";
  fs::remove_all(work);

  const auto paths = dnlp::bench::generate_corpus({256 * 1024, 1, 7}, work / "corpus");
  dnlp::corpus::Store store(work / "store");
  const auto manifest =
      store.put_file("demo", dnlp::corpus::detail::read_all(paths[0]), {32 * 1024, 3, 7});

  dnlp::mr::JobSpec spec;
  spec.inputs = {manifest};
  spec.workers = 4;
  spec.output_dir = work / "out";
  const auto result = dnlp::mr::run_job(store, spec);

  dnlp::console::run_sequential(paths, dnlp::text::default_config(), work / "console.out");
  const bool same =
      dnlp::mr::read_canonical_output(spec.output_dir) == dnlp::corpus::detail::read_all(work / "console.out");

  std::cout << result.tasks_total << " tasks, " << result.output_files.size() << " part files, output "
            << (same ? "matches" : "DIFFERS FROM") << " the sequential baseline\n";
  fs::remove_all(work);
  return same ? 0 : 1;
}
