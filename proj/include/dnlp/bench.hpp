#pragma once

// Benchmark harness: synthetic Turkish corpora, repeated timing with the
// drop-fastest-and-slowest protocol, console-vs-parallel scaling and
// one-file-vs-many-files split experiments, CSV and text report output.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dnlp/console.hpp"
#include "dnlp/corpus_store.hpp"
#include "dnlp/engine.hpp"
#include "dnlp/error.hpp"
#include "dnlp/simplifier.hpp"

namespace dnlp::bench {

namespace fs = std::filesystem;
using Millis = double;

inline Millis trimmed_mean(const std::vector<Millis>& samples) {
  if (samples.size() < 3) throw ConfigError("trimmed mean needs at least 3 samples");
  // drop exactly one occurrence of the minimum and one of the maximum
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const auto skip_lo = lo - samples.begin();
  const auto skip_hi = hi - samples.begin();
  Millis total = 0;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(samples.size()); ++i)
    if (i != skip_lo && i != skip_hi) total += samples[static_cast<std::size_t>(i)];
  return total / static_cast<Millis>(samples.size() - 2);
}

struct RunningTime {
  std::vector<Millis> samples;
  Millis trimmed_mean = 0;

  static RunningTime from_samples(std::vector<Millis> samples) {
    const Millis mean = bench::trimmed_mean(samples);
    return {std::move(samples), mean};
  }
};

template <class R>
concept TimedRunner = requires(R& r) {
  r.run();
  { r.output() } -> std::convertible_to<std::string>;
};

struct TimedResult {
  RunningTime time;
  std::string output;  // canonical output shared by every repeat
};

// Runs `repeats` times, timing only run(). output() (and cleanup(), if the
// runner has one) are called untimed after each repeat; every repeat must
// produce the same bytes or the measurement is rejected.
template <TimedRunner R, class Clock = std::chrono::steady_clock>
TimedResult time_run_with_output(R& runner, std::size_t repeats) {
  if (repeats < 3) throw ConfigError("repeats must be >= 3");
  std::vector<Millis> samples;
  samples.reserve(repeats);
  std::string reference;
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    runner.run();
    const auto t1 = Clock::now();
    samples.push_back(std::chrono::duration<Millis, std::milli>(t1 - t0).count());
    std::string out = runner.output();
    if constexpr (requires { runner.cleanup(); }) runner.cleanup();
    if (i == 0) {
      reference = std::move(out);
    } else if (out != reference) {
      throw DeterminismError("repeat " + std::to_string(i) + " produced different output; benchmark aborted");
    }
  }
  return {RunningTime::from_samples(std::move(samples)), std::move(reference)};
}

template <TimedRunner R, class Clock = std::chrono::steady_clock>
RunningTime time_run(R& runner, std::size_t repeats) {
  return time_run_with_output<R, Clock>(runner, repeats).time;
}

// Vocabulary for synthetic corpora. Starts with every surface form of the
// sample sentence so the stemmer's golden pairs show up in benchmark input.
inline const std::vector<std::string>& shipped_words() {
  static const std::vector<std::string> words = {
      "Feshe", "itiraz", "davası", "işverence", "geçerli", "sebep", "gösterilmeden", "ya", "da", "kanunda",
      "öngörülen", "usule", "uyulmadan", "yapılan", "fesihlere", "karşı", "işçilerin", "başvurabileceği", "bir",
      "yolu", "olarak", "karşımıza", "çıkmaktadır",
      "ve", "ile", "için", "bu", "şu", "o", "gibi", "daha", "çok", "en", "ancak", "ise", "de", "ki",
      "çalışmada", "çalışmanın", "araştırma", "araştırmalar", "araştırmacılar", "yöntem", "yöntemler",
      "yöntemleri", "sonuç", "sonuçlar", "sonuçları", "sonucunda", "veri", "veriler", "verilerin", "verileri",
      "analiz", "analizi", "analizinde", "model", "modeli", "modelin", "modelde", "sistem", "sistemler",
      "sistemin", "sistemde", "bilgi", "bilgiler", "bilginin", "bilgisayar", "bilgisayarlar", "üniversite",
      "üniversitesi", "üniversitede", "öğrenci", "öğrenciler", "öğrencilerin", "öğretmen", "öğretmenler",
      "eğitim", "eğitimde", "eğitimin", "toplum", "toplumun", "toplumda", "kültür", "kültürü", "kültürel",
      "tarih", "tarihi", "tarihinde", "ekonomi", "ekonomik", "ekonominin", "hukuk", "hukuku", "hukukta",
      "kanun", "kanunlar", "kanunun", "madde", "maddesi", "maddeler", "mahkeme", "mahkemesi", "mahkemede",
      "karar", "kararı", "kararlar", "kararda", "dava", "davalar", "davada", "işçi", "işçiler", "işveren",
      "işverenler", "sözleşme", "sözleşmesi", "sözleşmeler", "hak", "hakkı", "haklar", "hakları", "ülke",
      "ülkeler", "ülkede", "ülkenin", "dünya", "dünyada", "dünyanın", "insan", "insanlar", "insanların",
      "zaman", "zamanda", "süre", "süreç", "süreci", "süreçte", "gelişme", "gelişmeler", "gelişmek",
      "gelişmektedir", "kullanmak", "kullanılan", "kullanılarak", "kullanmaktadır", "incelemek", "incelenen",
      "incelenmiştir", "değerlendirmek", "değerlendirilen", "değerlendirerek", "belirlemek", "belirlenen",
      "göstermek", "gösteren", "göstermektedir", "oluşturmak", "oluşturan", "oluşturulan", "yapmak",
      "yapılmıştır", "yaparak", "bulunmak", "bulunan", "bulunmaktadır", "ilişki", "ilişkisi", "ilişkiler",
      "ilişkin", "önemli", "farklı", "yeni", "büyük", "küçük", "genel", "temel", "sosyal", "bilimsel",
      "teknik", "doğal", "kamu", "kamuda", "devlet", "devletin", "devlette", "yönetim", "yönetimi",
      "yönetimde", "kurum", "kurumlar", "kurumların", "kurumsal", "alan", "alanda", "alanlar", "alanında",
      "konu", "konusu", "konular", "konusunda", "durum", "durumu", "durumda", "durumlar", "örnek", "örneği",
      "örnekler", "örneğin", "Türkiye", "Türkiyede", "İstanbul", "İstanbulda", "Ankara", "Ankarada", "İnsan",
      "Işık", "ışığında", "şekilde", "şekli", "biçimde", "açısından", "yönünden", "tarafından", "üzerinde",
      "üzerine", "arasında", "içinde", "sonra", "önce", "2015", "1990", "3.5", "%20"};
  return words;
}

struct CorpusSpec {
  std::uint64_t total_bytes = 0;
  std::size_t file_count = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> lexicon_sample = shipped_words();
};

namespace detail {

// mt19937_64 output is fixed by the standard; reducing it by modulo keeps the
// corpus identical across standard libraries (distributions are not).
class WordSampler {
 public:
  WordSampler(std::uint64_t seed, const std::vector<std::string>& words) : rng_(seed), words_(words) {
    if (words_.empty()) throw ConfigError("lexicon_sample is empty");
  }

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  std::string line() {
    const std::size_t count = 6 + below(11);
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
      if (i) out.push_back(' ');
      out += words_[below(words_.size())];
      if (i + 1 < count && below(10) == 0) out.push_back(',');
    }
    out += ".\n";
    return out;
  }

 private:
  std::mt19937_64 rng_;
  const std::vector<std::string>& words_;
};

}  // namespace detail

inline std::vector<fs::path> generate_corpus(const CorpusSpec& spec, const fs::path& dir) {
  if (spec.file_count < 1) throw ConfigError("file_count must be >= 1");
  if (spec.total_bytes < spec.file_count) throw ConfigError("total_bytes must be >= file_count");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  detail::WordSampler sampler(spec.seed, spec.lexicon_sample);
  std::vector<fs::path> paths;
  std::uint64_t written = 0;
  for (std::size_t i = 0; i < spec.file_count; ++i) {
    // cumulative targets keep the total within one line of total_bytes
    const auto goal = static_cast<std::uint64_t>((static_cast<unsigned __int128>(spec.total_bytes) * (i + 1)) /
                                                 spec.file_count);
    std::string content;
    do {
      content += sampler.line();
    } while (written + content.size() < goal);
    char name[32];
    std::snprintf(name, sizeof name, "corpus-%05zu.txt", i);
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("cannot write " + p.string());
    written += content.size();
    paths.push_back(p);
  }
  return paths;
}

enum class Experiment { scaling, split };
enum class Mode { console, parallel };

inline std::string_view to_string(Experiment e) { return e == Experiment::scaling ? "scaling" : "split"; }
inline std::string_view to_string(Mode m) { return m == Mode::console ? "console" : "parallel"; }

struct ExperimentRecord {
  Experiment experiment = Experiment::scaling;
  std::uint64_t size_bytes = 0;
  Mode mode = Mode::parallel;
  std::size_t workers = 1;
  std::size_t file_count = 1;
  RunningTime running_time;

  void validate() const {
    if (mode == Mode::console && workers != 1) throw ConfigError("console records must have workers == 1");
    if (file_count < 1) throw ConfigError("file_count must be >= 1");
  }
};

struct BenchOptions {
  fs::path work_dir = fs::temp_directory_path() / "dnlp-bench";
  corpus::StoreConfig store{1 * corpus::kMiB, 3, 7};
  std::uint64_t seed = 20150306;
  const text::SimplifierConfig* simplifier = &text::default_config();
  std::function<void(const std::string&)> log = [](const std::string&) {};
};

class ConsoleRunner {
 public:
  ConsoleRunner(std::vector<fs::path> inputs, fs::path out, const text::SimplifierConfig& config)
      : inputs_(std::move(inputs)), out_(std::move(out)), config_(config) {}

  void run() { last_ = console::run_sequential(inputs_, config_, out_); }
  std::string output() const { return corpus::detail::read_all(out_); }
  void cleanup() { fs::remove(out_); }
  const console::ConsoleRun& last() const { return last_; }

 private:
  std::vector<fs::path> inputs_;
  fs::path out_;
  const text::SimplifierConfig& config_;
  console::ConsoleRun last_;
};

class JobRunner {
 public:
  JobRunner(const corpus::Store& store, mr::JobSpec spec, fs::path out_base, const text::SimplifierConfig& config)
      : store_(store), spec_(std::move(spec)), out_base_(std::move(out_base)), config_(config) {}

  void run() {
    spec_.output_dir = out_base_ / ("run-" + std::to_string(runs_++));
    last_ = mr::run_job(store_, spec_, config_);
  }
  std::string output() const { return mr::read_canonical_output(spec_.output_dir); }
  void cleanup() { fs::remove_all(spec_.output_dir); }
  const mr::JobResult& last() const { return last_; }

 private:
  const corpus::Store& store_;
  mr::JobSpec spec_;
  fs::path out_base_;
  const text::SimplifierConfig& config_;
  std::size_t runs_ = 0;
  mr::JobResult last_;
};

namespace detail {

inline std::string human_bytes(std::uint64_t b) {
  if (b % corpus::kMiB == 0) return std::to_string(b / corpus::kMiB) + " MiB";
  if (b % 1024 == 0) return std::to_string(b / 1024) + " KiB";
  return std::to_string(b) + " B";
}

inline std::vector<corpus::BlockManifest> ingest(corpus::Store& store, const std::vector<fs::path>& paths,
                                                 const std::string& prefix, const corpus::StoreConfig& config) {
  std::vector<corpus::BlockManifest> manifests;
  manifests.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string name = prefix + "-" + std::to_string(i);
    manifests.push_back(store.contains(name) ? store.manifest(name)
                                             : store.put_file(name, corpus::detail::read_all(paths[i]), config));
  }
  return manifests;
}

}  // namespace detail

// One console record and one parallel record per worker count, per size.
// Parallel output must match the console output byte for byte.
inline std::vector<ExperimentRecord> experiment_scaling(const std::vector<std::uint64_t>& sizes,
                                                        const std::vector<std::size_t>& workers, std::size_t repeats,
                                                        const BenchOptions& options = {}) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw ConfigError("sizes must be ascending");
  std::vector<ExperimentRecord> records;
  corpus::Store store(options.work_dir / "store");
  for (std::uint64_t size : sizes) {
    const std::string tag = "scaling-" + std::to_string(size);
    options.log("generating " + detail::human_bytes(size) + " corpus");
    const auto paths = generate_corpus({size, 1, options.seed}, options.work_dir / tag);
    const auto manifests = detail::ingest(store, paths, tag, options.store);

    options.log("timing console run on " + detail::human_bytes(size));
    ConsoleRunner console(paths, options.work_dir / (tag + ".console.out"), *options.simplifier);
    auto baseline = time_run_with_output(console, repeats);
    records.push_back({Experiment::scaling, size, Mode::console, 1, 1, baseline.time});

    for (std::size_t w : workers) {
      options.log("timing parallel run on " + detail::human_bytes(size) + " with " + std::to_string(w) + " workers");
      mr::JobSpec spec;
      spec.inputs = manifests;
      spec.workers = w;
      JobRunner job(store, spec, options.work_dir / (tag + ".out-w" + std::to_string(w)), *options.simplifier);
      auto parallel = time_run_with_output(job, repeats);
      if (parallel.output != baseline.output)
        throw DeterminismError("parallel output differs from console output at " + detail::human_bytes(size));
      records.push_back({Experiment::scaling, size, Mode::parallel, w, 1, parallel.time});
    }
  }
  return records;
}

struct SplitResult {
  std::vector<ExperimentRecord> records;
  std::vector<std::size_t> planned_tasks;  // parallel to records
};

// Same total bytes regenerated as each file count; each variant is ingested
// file by file and processed by one parallel job over all of its files.
inline SplitResult experiment_split(std::uint64_t total_bytes, const std::vector<std::size_t>& file_counts,
                                    std::size_t workers, std::size_t repeats, std::chrono::milliseconds task_overhead,
                                    const BenchOptions& options = {}) {
  SplitResult result;
  corpus::Store store(options.work_dir / "store");
  std::string reference;
  for (std::size_t files : file_counts) {
    if (files < 1) throw ConfigError("file counts must be >= 1");
    const std::string tag = "split-" + std::to_string(total_bytes) + "-" + std::to_string(files);
    options.log("generating " + detail::human_bytes(total_bytes) + " as " + std::to_string(files) + " files");
    const auto paths = generate_corpus({total_bytes, files, options.seed}, options.work_dir / tag);
    const auto manifests = detail::ingest(store, paths, tag, options.store);

    mr::JobSpec spec;
    spec.inputs = manifests;
    spec.workers = workers;
    spec.task_overhead = task_overhead;
    const std::size_t tasks = mr::plan_tasks(spec.inputs).size();
    options.log("timing " + std::to_string(tasks) + " tasks on " + std::to_string(workers) + " workers");
    JobRunner job(store, spec, options.work_dir / (tag + ".out"), *options.simplifier);
    auto timed = time_run_with_output(job, repeats);
    result.records.push_back({Experiment::split, total_bytes, Mode::parallel, workers, files, timed.time});
    result.planned_tasks.push_back(tasks);
  }
  return result;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("bad number in CSV: '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("bad integer in CSV: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

inline constexpr std::string_view kCsvHeader = "experiment,size_bytes,mode,workers,file_count,trimmed_mean_ms,samples";

inline std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const auto& r : records) {
    out += std::string(to_string(r.experiment)) + ',' + std::to_string(r.size_bytes) + ',' +
           std::string(to_string(r.mode)) + ',' + std::to_string(r.workers) + ',' + std::to_string(r.file_count) +
           ',' + detail::format_double(r.running_time.trimmed_mean) + ',';
    for (std::size_t i = 0; i < r.running_time.samples.size(); ++i) {
      if (i) out.push_back(';');
      out += detail::format_double(r.running_time.samples[i]);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::vector<ExperimentRecord> parse_csv(std::string_view csv) {
  std::vector<ExperimentRecord> records;
  auto lines = detail::split(csv, '\n');
  if (lines.empty() || lines[0] != kCsvHeader) throw ConfigError("CSV header mismatch");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = detail::split(lines[i], ',');
    if (f.size() != 7) throw ConfigError("CSV row " + std::to_string(i) + ": expected 7 fields");
    ExperimentRecord r;
    if (f[0] == "scaling") {
      r.experiment = Experiment::scaling;
    } else if (f[0] == "split") {
      r.experiment = Experiment::split;
    } else {
      throw ConfigError("CSV row " + std::to_string(i) + ": unknown experiment '" + std::string(f[0]) + "'");
    }
    r.size_bytes = detail::parse_uint(f[1]);
    if (f[2] == "console") {
      r.mode = Mode::console;
    } else if (f[2] == "parallel") {
      r.mode = Mode::parallel;
    } else {
      throw ConfigError("CSV row " + std::to_string(i) + ": unknown mode '" + std::string(f[2]) + "'");
    }
    r.workers = detail::parse_uint(f[3]);
    r.file_count = detail::parse_uint(f[4]);
    r.running_time.trimmed_mean = detail::parse_double(f[5]);
    for (auto s : detail::split(f[6], ';')) r.running_time.samples.push_back(detail::parse_double(s));
    r.validate();
    records.push_back(std::move(r));
  }
  return records;
}

struct ScalingRow {
  std::uint64_t size_bytes;
  std::size_t workers;
  Millis console_ms;
  Millis parallel_ms;
  double speedup;
};

inline std::vector<ScalingRow> scaling_rows(const std::vector<ExperimentRecord>& records) {
  std::vector<ScalingRow> rows;
  for (const auto& c : records) {
    if (c.experiment != Experiment::scaling || c.mode != Mode::console) continue;
    for (const auto& p : records) {
      if (p.experiment != Experiment::scaling || p.mode != Mode::parallel || p.size_bytes != c.size_bytes) continue;
      rows.push_back({c.size_bytes, p.workers, c.running_time.trimmed_mean, p.running_time.trimmed_mean,
                      c.running_time.trimmed_mean / p.running_time.trimmed_mean});
    }
  }
  return rows;
}

inline std::string render_report(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw ConfigError("no records to report");
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);

  const auto rows = scaling_rows(records);
  if (!rows.empty()) {
    out << "Scaling: console vs parallel (trimmed mean, ms)\n"
        << "Reference cluster cell, 16 GB on 7 nodes: console 383.9 min, parallel 33.3 min (11.5x)\n\n"
        << std::left << std::setw(12) << "size" << std::right << std::setw(14) << "console_ms" << std::setw(10)
        << "workers" << std::setw(14) << "parallel_ms" << std::setw(10) << "speedup" << '\n';
    for (const auto& r : rows) {
      out << std::left << std::setw(12) << detail::human_bytes(r.size_bytes) << std::right << std::setw(14)
          << r.console_ms << std::setw(10) << r.workers << std::setw(14) << r.parallel_ms << std::setw(9)
          << std::setprecision(2) << r.speedup << "x" << std::setprecision(1) << '\n';
    }
    out << '\n';
  }

  std::vector<const ExperimentRecord*> split;
  for (const auto& r : records)
    if (r.experiment == Experiment::split) split.push_back(&r);
  if (!split.empty()) {
    out << "Split count: one file vs many files of equal total (trimmed mean, ms)\n"
        << "Reference cells: 16 GB single 33.3 vs multi 36.045; the reference multi-file runs were\n"
        << "faster at 0.1 GB (1.33 vs 1.1) and 1 GB (3.35 vs 1.29)\n\n"
        << std::left << std::setw(12) << "size" << std::right << std::setw(10) << "workers" << std::setw(8)
        << "files" << std::setw(14) << "mean_ms" << std::setw(14) << "vs_1_file" << '\n';
    for (const auto* r : split) {
      const ExperimentRecord* single = nullptr;
      for (const auto* s : split)
        if (s->file_count == 1 && s->size_bytes == r->size_bytes && s->workers == r->workers) single = s;
      out << std::left << std::setw(12) << detail::human_bytes(r->size_bytes) << std::right << std::setw(10)
          << r->workers << std::setw(8) << r->file_count << std::setw(14) << r->running_time.trimmed_mean;
      if (single) {
        out << std::setw(13) << std::setprecision(2)
            << r->running_time.trimmed_mean / single->running_time.trimmed_mean << "x" << std::setprecision(1);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace dnlp::bench
