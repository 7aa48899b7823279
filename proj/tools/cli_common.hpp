#pragma once

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iterator>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnlp/error.hpp"
#include "dnlp/simplifier.hpp"

namespace dnlp::cli {

inline std::string default_store_root() {
  const char* env = std::getenv("DNLP_STORE");
  return env && *env ? env : "dnlp-store";
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const dnlp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 2;
  }
}

inline std::uint64_t unit_bytes(const std::string& unit) {
  if (unit == "B") return 1;
  if (unit == "KiB") return 1024;
  if (unit == "MiB") return 1024ull * 1024;
  if (unit == "GiB") return 1024ull * 1024 * 1024;
  throw dnlp::ConfigError("unknown unit '" + unit + "' (use B, KiB, MiB or GiB)");
}

// Either file may be omitted; the built-in copy is used in its place.
inline dnlp::text::SimplifierConfig load_simplifier(const std::string& stopwords, const std::string& suffixes) {
  auto slurp = [](const std::string& path, std::string_view fallback) {
    if (path.empty()) return std::string(fallback);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw dnlp::IoError("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  return dnlp::text::SimplifierConfig::from_text(slurp(stopwords, dnlp::text::shipped::kStopwords),
                                                 slurp(suffixes, dnlp::text::shipped::kSuffixes));
}

}  // namespace dnlp::cli
