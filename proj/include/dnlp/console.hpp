#pragma once

// Sequential baseline: read each input line by line, simplify, write.
// Single-threaded on purpose; this is the reference output for the engine.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dnlp/error.hpp"
#include "dnlp/simplifier.hpp"
#include "dnlp/utf8.hpp"

namespace dnlp::console {

namespace fs = std::filesystem;

inline constexpr std::size_t kBufferSize = 64 * 1024;

struct ConsoleRun {
  std::vector<fs::path> input_paths;
  fs::path output_path;
  std::size_t lines_processed = 0;
  std::chrono::nanoseconds wall_time{0};
};

inline ConsoleRun run_sequential(const std::vector<fs::path>& input_paths, const text::SimplifierConfig& config,
                                 const fs::path& output_path) {
  const auto started = std::chrono::steady_clock::now();
  ConsoleRun run{input_paths, output_path, 0, {}};

  std::vector<char> out_buf(kBufferSize);
  std::ofstream out;
  out.rdbuf()->pubsetbuf(out_buf.data(), static_cast<std::streamsize>(out_buf.size()));
  out.open(output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + output_path.string());

  std::vector<char> in_buf(kBufferSize);
  std::string line;
  for (const auto& path : input_paths) {
    std::ifstream in;
    in.rdbuf()->pubsetbuf(in_buf.data(), static_cast<std::streamsize>(in_buf.size()));
    in.open(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::size_t offset = 0;
    while (std::getline(in, line)) {
      const std::size_t consumed = line.size() + (in.eof() ? 0 : 1);
      // CRLF input: drop the CR, as the store does on ingest
      if (!in.eof() && !line.empty() && line.back() == '\r') line.pop_back();
      if (auto bad = utf8::find_invalid(line); bad != std::string::npos) throw DecodeError(path.string(), offset + bad);
      const std::string simplified = text::simplify_line(line, config);
      out.write(simplified.data(), static_cast<std::streamsize>(simplified.size()));
      out.put('\n');
      ++run.lines_processed;
      offset += consumed;
    }
    if (in.bad()) throw IoError("read error on " + path.string());
  }
  out.close();
  if (!out) throw IoError("write failed: " + output_path.string());
  run.wall_time = std::chrono::steady_clock::now() - started;
  return run;
}

}  // namespace dnlp::console
