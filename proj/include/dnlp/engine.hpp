#pragma once

// Map-only job execution over stored blocks.
//
// One Task per block. A Scheduler owns every piece of mutable job state;
// workers only talk to it through claim/complete/fail messages. Worker k is
// co-located with store node k, so a failed worker also takes that node's
// replicas out of service for the rest of the job.
//
// Output: <out>/part-NNNNN per map task (task ordinal across all inputs),
// written to a temp file and renamed on commit, plus a `_JOB` summary.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dnlp/corpus_store.hpp"
#include "dnlp/error.hpp"
#include "dnlp/simplifier.hpp"

namespace dnlp::mr {

namespace fs = std::filesystem;
using corpus::Block;
using corpus::BlockId;
using corpus::BlockManifest;
using corpus::NodeId;

struct KeyValuePair {
  std::string key;
  std::string value;
  auto operator<=>(const KeyValuePair&) const = default;
};

enum class Mapper { simplify, identity, wordcount_map };
enum class Reducer { none, wordcount };

inline Mapper parse_mapper(std::string_view name) {
  if (name == "simplify") return Mapper::simplify;
  if (name == "identity") return Mapper::identity;
  if (name == "wordcount-map") return Mapper::wordcount_map;
  throw ConfigError("unknown mapper: " + std::string(name));
}

inline Reducer parse_reducer(std::string_view name) {
  if (name == "none" || name.empty()) return Reducer::none;
  if (name == "wordcount") return Reducer::wordcount;
  throw ConfigError("unknown reducer: " + std::string(name));
}

struct FailurePlan {
  std::size_t worker = 0;       // ordinal of the worker that dies
  std::size_t after_tasks = 0;  // it dies midway through the task after this many completions
};

struct JobSpec {
  std::vector<BlockManifest> inputs;
  std::string mapper = "simplify";
  std::string reducer = "none";
  std::size_t workers = 1;
  fs::path output_dir;
  std::chrono::milliseconds task_overhead{0};
  std::optional<FailurePlan> failure_plan;
  std::set<NodeId> unavailable_nodes;  // nodes already down when the job starts
};

enum class TaskStatus { pending, running, done, failed };

struct Task {
  std::size_t task_id = 0;  // also the output part index
  BlockId block_id;
  std::size_t input = 0;  // index into JobSpec::inputs
  std::size_t attempt = 1;
  std::optional<std::size_t> assigned_worker;
  TaskStatus status = TaskStatus::pending;
  std::optional<fs::path> output;
};

struct JobResult {
  std::string job_id;
  std::size_t tasks_total = 0;
  std::size_t tasks_retried = 0;
  std::size_t worker_failures = 0;
  std::chrono::nanoseconds wall_time{0};
  std::vector<fs::path> output_files;
};

inline std::vector<Task> plan_tasks(const BlockManifest& manifest, std::size_t first_id = 0, std::size_t input = 0) {
  std::vector<Task> tasks;
  tasks.reserve(manifest.blocks.size());
  for (std::size_t i = 0; i < manifest.blocks.size(); ++i) {
    Task t;
    t.task_id = first_id + i;
    t.block_id = manifest.block_id(i);
    t.input = input;
    tasks.push_back(std::move(t));
  }
  return tasks;
}

// Inputs in the given order, blocks in index order.
inline std::vector<Task> plan_tasks(const std::vector<BlockManifest>& manifests) {
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < manifests.size(); ++m) {
    auto part = plan_tasks(manifests[m], tasks.size(), m);
    std::move(part.begin(), part.end(), std::back_inserter(tasks));
  }
  return tasks;
}

inline std::string line_key(const BlockId& id, std::size_t line) {
  return id.file_name + ":" + std::to_string(id.index) + ":" + std::to_string(line);
}

// Streams the mapper over the block's lines. `stop(line)` is polled before
// each line; returns false if it asked to stop.
template <class Emit, class Stop>
bool map_block(const Block& block, Mapper mapper, const text::SimplifierConfig& config, Emit&& emit, Stop&& stop) {
  std::string_view rest = block.content;
  std::size_t line_no = 0;
  while (!rest.empty()) {
    if (stop(line_no)) return false;
    const auto nl = rest.find('\n');
    const std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    switch (mapper) {
      case Mapper::identity:
        emit(line_key(block.id, line_no), std::string(line));
        break;
      case Mapper::simplify:
        emit(line_key(block.id, line_no), text::simplify_line(line, config));
        break;
      case Mapper::wordcount_map:
        for (auto& tok : text::tokenize(line)) emit(std::move(tok.normalized), std::string("1"));
        break;
    }
    ++line_no;
  }
  return true;
}

inline std::vector<KeyValuePair> map_task(const Block& block, Mapper mapper,
                                          const text::SimplifierConfig& config = text::default_config()) {
  utf8::validate(block.content);
  std::vector<KeyValuePair> out;
  map_block(
      block, mapper, config, [&](std::string k, std::string v) { out.push_back({std::move(k), std::move(v)}); },
      [](std::size_t) { return false; });
  return out;
}

inline std::vector<KeyValuePair> map_task(const Block& block, std::string_view mapper,
                                          const text::SimplifierConfig& config = text::default_config()) {
  return map_task(block, parse_mapper(mapper), config);
}

// Groups by key, reduces each group, returns records sorted by key.
inline std::vector<KeyValuePair> shuffle_reduce(std::vector<KeyValuePair> pairs, Reducer reducer) {
  if (reducer == Reducer::none) throw ConfigError("shuffle_reduce needs a reducer");
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const KeyValuePair& a, const KeyValuePair& b) { return a.key < b.key; });
  std::vector<KeyValuePair> out;
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::size_t j = i;
    unsigned long long sum = 0;
    for (; j < pairs.size() && pairs[j].key == pairs[i].key; ++j) {
      const auto& v = pairs[j].value;
      unsigned long long n = 0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
      if (ec != std::errc{} || ptr != v.data() + v.size())
        throw JobFailure("wordcount: non-numeric value '" + v + "' for key '" + pairs[j].key + "'");
      sum += n;
    }
    out.push_back({pairs[i].key, std::to_string(sum)});
    i = j;
  }
  return out;
}

// Every in-flight task of the failed worker goes back to pending with its
// attempt bumped. Tasks owned by other workers are left out.
inline std::vector<Task> handle_worker_failure(std::size_t failed_worker, const std::vector<Task>& in_flight,
                                               std::size_t surviving_workers) {
  if (surviving_workers == 0)
    throw JobFailure("worker " + std::to_string(failed_worker) + " failed and no workers survive");
  std::vector<Task> rescheduled;
  for (const Task& t : in_flight) {
    if (t.assigned_worker != failed_worker) continue;
    Task r = t;
    r.status = TaskStatus::pending;
    r.assigned_worker.reset();
    ++r.attempt;
    rescheduled.push_back(std::move(r));
  }
  return rescheduled;
}

enum class OutputFormat { values, key_value };

inline std::string part_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part-%05zu", index);
  return buf;
}

// Streams one part file into a temp name and renames it into place on commit.
class PartWriter {
 public:
  PartWriter(const fs::path& dir, std::size_t part, std::size_t attempt)
      : final_(dir / part_name(part)),
        temp_(dir / ("." + part_name(part) + ".attempt-" + std::to_string(attempt) + ".tmp")) {
    out_.rdbuf()->pubsetbuf(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot create " + temp_.string());
  }

  PartWriter(const PartWriter&) = delete;
  PartWriter& operator=(const PartWriter&) = delete;

  ~PartWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(temp_, ec);
    }
  }

  void write(const KeyValuePair& kv, OutputFormat format) {
    if (format == OutputFormat::key_value) {
      out_ << kv.key << '\t' << kv.value << '\n';
    } else {
      out_ << kv.value << '\n';
    }
  }

  void write_value(std::string_view v) {
    out_.write(v.data(), static_cast<std::streamsize>(v.size()));
    out_.put('\n');
  }

  fs::path commit() {
    out_.close();
    if (!out_) throw IoError("write failed: " + temp_.string());
    fs::rename(temp_, final_);
    committed_ = true;
    return final_;
  }

  // Leaves the temp file behind, as a crashed process would.
  void abandon() {
    out_.close();
    committed_ = true;
  }

 private:
  std::vector<char> buffer_ = std::vector<char>(64 * 1024);
  fs::path final_;
  fs::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

inline void prepare_output_dir(const fs::path& dir) {
  if (dir.empty()) throw ConfigError("output_dir is required");
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw IoError("output path is not a directory: " + dir.string());
    if (!fs::is_empty(dir)) throw AlreadyExistsError("output directory not empty: " + dir.string());
  }
  fs::create_directories(dir);
}

inline std::vector<fs::path> write_output(const fs::path& dir, const std::vector<std::vector<KeyValuePair>>& parts,
                                          OutputFormat format) {
  prepare_output_dir(dir);
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    PartWriter w(dir, i, 1);
    for (const auto& kv : parts[i]) w.write(kv, format);
    files.push_back(w.commit());
  }
  return files;
}

inline std::vector<fs::path> list_parts(const fs::path& dir) {
  std::vector<fs::path> parts;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.starts_with("part-")) parts.push_back(e.path());
  }
  std::sort(parts.begin(), parts.end());
  return parts;
}

// Concatenation of the part files in part order.
inline std::string read_canonical_output(const fs::path& dir) {
  std::string out;
  for (const auto& p : list_parts(dir)) out += corpus::detail::read_all(p);
  return out;
}

struct Assignment {
  Task task;
  std::set<NodeId> failed_nodes;
};

class Scheduler {
 public:
  Scheduler(std::vector<Task> tasks, std::size_t workers, std::set<NodeId> failed_nodes = {})
      : tasks_(std::move(tasks)), alive_(workers, true), surviving_(workers), failed_nodes_(std::move(failed_nodes)) {
    for (const auto& t : tasks_) pending_.push_back(t.task_id);
  }

  // Blocks until a task is available; nullopt once the job is finished,
  // aborted, or this worker is dead.
  std::optional<Assignment> claim(std::size_t worker) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !pending_.empty() || finished_locked() || !alive_[worker]; });
    if (finished_locked() || !alive_[worker]) return std::nullopt;
    const std::size_t id = pending_.front();
    pending_.pop_front();
    Task& t = tasks_[id];
    t.status = TaskStatus::running;
    t.assigned_worker = worker;
    return Assignment{t, failed_nodes_};
  }

  void complete(std::size_t worker, std::size_t task_id, std::optional<fs::path> output,
                std::vector<KeyValuePair> pairs = {}) {
    std::lock_guard lock(mu_);
    Task& t = tasks_[task_id];
    if (t.assigned_worker != worker || t.status != TaskStatus::running) return;
    t.status = TaskStatus::done;
    t.output = std::move(output);
    if (!pairs.empty()) results_[task_id] = std::move(pairs);
    ++done_;
    cv_.notify_all();
  }

  void worker_failed(std::size_t worker) {
    std::lock_guard lock(mu_);
    if (!alive_[worker]) return;
    alive_[worker] = false;
    --surviving_;
    ++worker_failures_;
    failed_nodes_.insert(NodeId{static_cast<std::uint32_t>(worker)});
    std::vector<Task> in_flight;
    for (const auto& t : tasks_)
      if (t.status == TaskStatus::running && t.assigned_worker == worker) in_flight.push_back(t);
    try {
      for (Task& r : handle_worker_failure(worker, in_flight, surviving_)) {
        tasks_[r.task_id] = r;
        pending_.push_front(r.task_id);
        ++retried_;
      }
    } catch (...) {
      if (!error_) error_ = std::current_exception();
    }
    cv_.notify_all();
  }

  void abort(std::exception_ptr e) {
    std::lock_guard lock(mu_);
    if (!error_) error_ = e;
    cv_.notify_all();
  }

  std::exception_ptr error() const {
    std::lock_guard lock(mu_);
    return error_;
  }

  std::size_t retried() const {
    std::lock_guard lock(mu_);
    return retried_;
  }

  std::size_t worker_failures() const {
    std::lock_guard lock(mu_);
    return worker_failures_;
  }

  std::vector<Task> tasks() const {
    std::lock_guard lock(mu_);
    return tasks_;
  }

  std::map<std::size_t, std::vector<KeyValuePair>> take_results() {
    std::lock_guard lock(mu_);
    return std::move(results_);
  }

 private:
  bool finished_locked() const { return error_ || done_ == tasks_.size(); }

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Task> tasks_;
  std::deque<std::size_t> pending_;
  std::vector<bool> alive_;
  std::size_t surviving_;
  std::set<NodeId> failed_nodes_;
  std::size_t done_ = 0;
  std::size_t retried_ = 0;
  std::size_t worker_failures_ = 0;
  std::map<std::size_t, std::vector<KeyValuePair>> results_;
  std::exception_ptr error_;
};

namespace detail {

inline std::string next_job_id() {
  static std::atomic<unsigned> counter{0};
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return "job-" + std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(now).count()) + "-" +
         std::to_string(counter++);
}

inline void write_summary(const fs::path& dir, const JobResult& r) {
  std::ofstream out(dir / "_JOB", std::ios::binary | std::ios::trunc);
  out << "job_id=" << r.job_id << '\n'
      << "tasks_total=" << r.tasks_total << '\n'
      << "tasks_retried=" << r.tasks_retried << '\n'
      << "wall_time_ms=" << std::chrono::duration_cast<std::chrono::milliseconds>(r.wall_time).count() << '\n';
  if (!out) throw IoError("cannot write job summary in " + dir.string());
}

inline void remove_stale_temps(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().starts_with(".part-")) fs::remove(e.path());
}

}  // namespace detail

inline JobResult run_job(const corpus::Store& store, const JobSpec& spec,
                         const text::SimplifierConfig& config = text::default_config()) {
  const auto started = std::chrono::steady_clock::now();
  const Mapper mapper = parse_mapper(spec.mapper);
  const Reducer reducer = parse_reducer(spec.reducer);
  if (spec.workers < 1) throw ConfigError("workers must be >= 1");
  if (spec.failure_plan && spec.failure_plan->worker >= spec.workers)
    throw ConfigError("failure plan names worker " + std::to_string(spec.failure_plan->worker) + " but only " +
                      std::to_string(spec.workers) + " workers run");
  prepare_output_dir(spec.output_dir);

  JobResult result;
  result.job_id = detail::next_job_id();
  std::vector<Task> tasks = plan_tasks(spec.inputs);
  result.tasks_total = tasks.size();
  Scheduler scheduler(std::move(tasks), spec.workers, spec.unavailable_nodes);

  auto worker_main = [&](std::size_t me) {
    std::size_t completed = 0;
    const bool doomed = spec.failure_plan && spec.failure_plan->worker == me;
    while (auto assignment = scheduler.claim(me)) {
      const Task& task = assignment->task;
      try {
        if (spec.task_overhead.count() > 0) std::this_thread::sleep_for(spec.task_overhead);
        const Block block = store.get_block(spec.inputs[task.input], task.block_id.index, assignment->failed_nodes);
        const bool fail_here = doomed && completed == spec.failure_plan->after_tasks;
        const std::size_t fail_line = block.line_count / 2;
        auto stop = [&](std::size_t line) { return fail_here && line == fail_line; };

        if (reducer == Reducer::none) {
          PartWriter writer(spec.output_dir, task.task_id, task.attempt);
          const bool finished = map_block(
              block, mapper, config, [&](const std::string&, const std::string& value) { writer.write_value(value); },
              stop);
          if (!finished) {
            writer.abandon();
            scheduler.worker_failed(me);
            return;
          }
          scheduler.complete(me, task.task_id, writer.commit());
        } else {
          std::vector<KeyValuePair> pairs;
          const bool finished = map_block(
              block, mapper, config, [&](std::string k, std::string v) { pairs.push_back({std::move(k), std::move(v)}); },
              stop);
          if (!finished) {
            scheduler.worker_failed(me);
            return;
          }
          scheduler.complete(me, task.task_id, std::nullopt, std::move(pairs));
        }
        ++completed;
      } catch (...) {
        scheduler.abort(std::current_exception());
        return;
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(spec.workers);
    for (std::size_t w = 0; w < spec.workers; ++w) pool.emplace_back(worker_main, w);
  }

  detail::remove_stale_temps(spec.output_dir);
  if (auto error = scheduler.error()) {
    try {
      std::rethrow_exception(error);
    } catch (const BlockUnavailableError& e) {
      throw JobFailure("job failed: " + std::string(e.what()));
    } catch (const JobFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw JobFailure(std::string("job failed: ") + e.what());
    }
  }

  result.tasks_retried = scheduler.retried();
  result.worker_failures = scheduler.worker_failures();
  if (reducer == Reducer::none) {
    for (const auto& t : scheduler.tasks()) result.output_files.push_back(*t.output);
  } else {
    // single reduce partition
    std::vector<KeyValuePair> all;
    for (auto& [id, pairs] : scheduler.take_results()) std::move(pairs.begin(), pairs.end(), std::back_inserter(all));
    PartWriter w(spec.output_dir, 0, 1);
    for (const auto& kv : shuffle_reduce(std::move(all), reducer)) w.write(kv, OutputFormat::key_value);
    result.output_files.push_back(w.commit());
  }
  result.wall_time = std::chrono::steady_clock::now() - started;
  detail::write_summary(spec.output_dir, result);
  return result;
}

}  // namespace dnlp::mr
