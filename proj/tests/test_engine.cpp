#include <gtest/gtest.h>

#include <random>

#include "dnlp/console.hpp"
#include "dnlp/engine.hpp"
#include "oracles.hpp"

using namespace dnlp;
using namespace dnlp::mr;
using corpus::Store;
using corpus::StoreConfig;

namespace {

const char* kSentence =
    "Feshe itiraz davası, işverence geçerli sebep gösterilmeden ya da kanunda öngörülen usule uyulmadan yapılan "
    "fesihlere karşı işçilerin başvurabileceği bir itiraz yolu olarak karşımıza çıkmaktadır.";

std::string numbered_lines(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "satır " + std::to_string(i) + " kanunda işçilerin yolu\n";
  return s;
}

}  // namespace

TEST(PlanTasks, EmptyManifestGivesNoTasks) { EXPECT_TRUE(plan_tasks(corpus::BlockManifest{"f", 0, {}}).empty()); }

TEST(PlanTasks, OneTaskPerBlockInOrder) {
  corpus::BlockManifest m{"f", 5, {}};
  for (std::size_t i = 0; i < 5; ++i) m.blocks.push_back({i, 1, {{0}}});
  auto tasks = plan_tasks(m);
  ASSERT_EQ(tasks.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(tasks[i].block_id.index, i);
    EXPECT_EQ(tasks[i].status, TaskStatus::pending);
    EXPECT_EQ(tasks[i].attempt, 1u);
  }
}

TEST(PlanTasks, ThousandSingleBlockFiles) {
  std::vector<corpus::BlockManifest> ms;
  for (int i = 0; i < 1000; ++i) ms.push_back({"f" + std::to_string(i), 1, {{0, 1, {{0}}}}});
  auto tasks = plan_tasks(ms);
  ASSERT_EQ(tasks.size(), 1000u);
  EXPECT_EQ(tasks[999].task_id, 999u);
  EXPECT_EQ(tasks[999].block_id.file_name, "f999");
}

TEST(MapTask, EmptyBlock) { EXPECT_TRUE(map_task(corpus::Block{{"f", 0}, "", 0}, "identity").empty()); }

TEST(MapTask, IdentityEmitsEachLine) {
  auto out = map_task(corpus::Block{{"f", 2}, "a\nb b\n\n", 3}, "identity");
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], (KeyValuePair{"f:2:0", "a"}));
  EXPECT_EQ(out[1].value, "b b");
  EXPECT_EQ(out[2], (KeyValuePair{"f:2:2", ""}));
}

TEST(MapTask, SimplifyOnSampleSentence) {
  auto out = map_task(corpus::Block{{"f", 0}, std::string(kSentence) + "\n", 1}, "simplify");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].value, text::simplify_line(kSentence, text::default_config()));
  EXPECT_NE(out[0].value.find("dava işveren"), std::string::npos);
}

TEST(MapTask, SimplifyKeepsEmptyLines) {
  auto out = map_task(corpus::Block{{"f", 0}, "ve\nbir\n", 2}, "simplify");
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].value, "");
}

TEST(MapTask, WordcountMapEmitsPerToken) {
  auto out = map_task(corpus::Block{{"f", 0}, "Bir iki\nbir\n", 2}, "wordcount-map");
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], (KeyValuePair{"bir", "1"}));
  EXPECT_EQ(out[2], (KeyValuePair{"bir", "1"}));
}

TEST(MapTask, UnknownMapperIsConfigError) {
  EXPECT_THROW(map_task(corpus::Block{{"f", 0}, "x\n", 1}, "grep"), ConfigError);
}

TEST(ShuffleReduce, Empty) { EXPECT_TRUE(shuffle_reduce({}, Reducer::wordcount).empty()); }

TEST(ShuffleReduce, CountsAndSorts) {
  auto out = shuffle_reduce({{"a", "1"}, {"b", "1"}, {"a", "1"}}, Reducer::wordcount);
  EXPECT_EQ(out, (std::vector<KeyValuePair>{{"a", "2"}, {"b", "1"}}));
}

TEST(ShuffleReduce, NoneIsRejected) { EXPECT_THROW(shuffle_reduce({}, Reducer::none), ConfigError); }

TEST(ShuffleReduce, MatchesGroupAndCountOracle) {
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<KeyValuePair> pairs;
    std::vector<std::pair<std::string, std::uint64_t>> raw;
    const std::size_t n = rng() % 5000;
    for (std::size_t i = 0; i < n; ++i) {
      std::string k = "k" + std::to_string(rng() % 300);
      const std::uint64_t v = rng() % 4;
      pairs.push_back({k, std::to_string(v)});
      raw.emplace_back(k, v);
    }
    auto got = shuffle_reduce(pairs, Reducer::wordcount);
    auto want = oracle::group_and_count(raw);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].key, want[i].first);
      EXPECT_EQ(got[i].value, std::to_string(want[i].second));
    }
  }
}

TEST(HandleWorkerFailure, NoInFlightIsNoop) { EXPECT_TRUE(handle_worker_failure(1, {}, 2).empty()); }

TEST(HandleWorkerFailure, ReschedulesOnlyTheFailedWorkersTasks) {
  Task a, b, c;
  a.task_id = 0, a.assigned_worker = 1, a.status = TaskStatus::running;
  b.task_id = 1, b.assigned_worker = 1, b.status = TaskStatus::running;
  c.task_id = 2, c.assigned_worker = 0, c.status = TaskStatus::running;
  auto out = handle_worker_failure(1, {a, b, c}, 1);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& t : out) {
    EXPECT_EQ(t.attempt, 2u);
    EXPECT_EQ(t.status, TaskStatus::pending);
    EXPECT_FALSE(t.assigned_worker);
  }
}

TEST(HandleWorkerFailure, NoSurvivorsIsJobFailure) { EXPECT_THROW(handle_worker_failure(0, {}, 0), JobFailure); }

TEST(WriteOutput, OnePartPerTaskAndRefusesNonEmptyDir) {
  oracle::TempDir dir("write");
  auto files = write_output(dir / "out", {{{"k", "v1"}}, {}, {{"k", "v2"}, {"k2", "v3"}}}, OutputFormat::values);
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files[2].filename(), "part-00002");
  EXPECT_EQ(read_canonical_output(dir / "out"), "v1\nv2\nv3\n");
  EXPECT_THROW(write_output(dir / "out", {}, OutputFormat::values), AlreadyExistsError);

  write_output(dir / "kv", {{{"a", "2"}}}, OutputFormat::key_value);
  EXPECT_EQ(oracle::read_file(dir / "kv" / "part-00000"), "a\t2\n");
}

class JobTest : public ::testing::Test {
 protected:
  oracle::TempDir dir{"job"};
  Store store{dir / "store"};

  JobSpec spec_for(const std::string& name, std::size_t workers, const std::string& out) {
    JobSpec spec;
    spec.inputs = {store.manifest(name)};
    spec.workers = workers;
    spec.output_dir = dir / out;
    return spec;
  }
};

TEST_F(JobTest, EmptyInputSucceedsWithNoRecords) {
  store.put_file("empty", "", {});
  auto r = run_job(store, spec_for("empty", 2, "out"));
  EXPECT_EQ(r.tasks_total, 0u);
  EXPECT_TRUE(r.output_files.empty());
  EXPECT_EQ(read_canonical_output(dir / "out"), "");
  EXPECT_TRUE(fs::exists(dir / "out" / "_JOB"));
}

TEST_F(JobTest, IdentityJobReproducesInput) {
  const auto content = numbered_lines(300);
  store.put_file("f", content, {1000, 3, 7});
  auto r = run_job(store, [&] {
    auto s = spec_for("f", 3, "out");
    s.mapper = "identity";
    return s;
  }());
  EXPECT_GT(r.tasks_total, 3u);
  EXPECT_EQ(r.output_files.size(), r.tasks_total);
  EXPECT_EQ(read_canonical_output(dir / "out"), content);
}

TEST_F(JobTest, SimplifyJobMatchesConsoleBaseline) {
  const auto content = numbered_lines(500) + kSentence + "\n";
  oracle::write_file(dir / "in.txt", content);
  store.put_file("f", content, {2048, 3, 7});
  console::run_sequential({dir / "in.txt"}, text::default_config(), dir / "console.out");
  auto spec = spec_for("f", 7, "out");
  auto r = run_job(store, spec);
  EXPECT_EQ(read_canonical_output(dir / "out"), oracle::read_file(dir / "console.out"));
  EXPECT_EQ(r.tasks_retried, 0u);
  EXPECT_GT(r.wall_time.count(), 0);
}

TEST_F(JobTest, RerunIsByteIdentical) {
  store.put_file("f", numbered_lines(400), {1500, 3, 7});
  run_job(store, spec_for("f", 4, "a"));
  run_job(store, spec_for("f", 2, "b"));
  EXPECT_TRUE(oracle::same_parts(dir / "a", dir / "b"));
  EXPECT_EQ(fs::path(list_parts(dir / "a").front()).filename(), "part-00000");
}

TEST_F(JobTest, RefusesNonEmptyOutputDir) {
  store.put_file("f", "x\n", {});
  fs::create_directories(dir / "out");
  oracle::write_file(dir / "out" / "junk", "j");
  EXPECT_THROW(run_job(store, spec_for("f", 1, "out")), AlreadyExistsError);
}

TEST_F(JobTest, UnknownMapperOrReducerFailsBeforeRunning) {
  store.put_file("f", "x\n", {});
  auto s = spec_for("f", 1, "out");
  s.mapper = "nope";
  EXPECT_THROW(run_job(store, s), ConfigError);
  s.mapper = "identity";
  s.reducer = "sum";
  EXPECT_THROW(run_job(store, s), ConfigError);
  EXPECT_FALSE(fs::exists(dir / "out"));
  s.reducer = "none";
  s.workers = 0;
  EXPECT_THROW(run_job(store, s), ConfigError);
}

TEST_F(JobTest, InjectedFailureIsTransparent) {
  store.put_file("f", numbered_lines(600), {800, 3, 7});
  auto base = spec_for("f", 3, "clean");
  run_job(store, base);

  auto failing = spec_for("f", 3, "failed");
  failing.task_overhead = std::chrono::milliseconds(2);
  failing.failure_plan = FailurePlan{1, 2};
  auto r = run_job(store, failing);
  EXPECT_EQ(r.worker_failures, 1u);
  EXPECT_GE(r.tasks_retried, 1u);
  EXPECT_TRUE(oracle::same_parts(dir / "clean", dir / "failed"));
}

TEST_F(JobTest, FailureOfOnlyWorkerFailsJob) {
  store.put_file("f", numbered_lines(50), {200, 3, 7});
  auto s = spec_for("f", 1, "out");
  s.failure_plan = FailurePlan{0, 1};
  EXPECT_THROW(run_job(store, s), JobFailure);
}

TEST_F(JobTest, UnavailableBlockFailsJobNamingBlock) {
  store.put_file("f", numbered_lines(50), {200, 3, 7});
  auto s = spec_for("f", 2, "out");
  s.unavailable_nodes = {{1}, {2}, {3}};  // every replica of block 1
  try {
    run_job(store, s);
    FAIL();
  } catch (const JobFailure& e) {
    EXPECT_NE(std::string(e.what()).find("f#1"), std::string::npos) << e.what();
  }
}

TEST_F(JobTest, ReadsSurviveSomeFailedNodes) {
  const auto content = numbered_lines(50);
  store.put_file("f", content, {200, 3, 7});
  auto s = spec_for("f", 2, "out");
  s.mapper = "identity";
  s.unavailable_nodes = {{0}, {3}};
  run_job(store, s);
  EXPECT_EQ(read_canonical_output(dir / "out"), content);
}

TEST_F(JobTest, WordcountReduceJob) {
  store.put_file("f", "bir iki\niki üç\nüç üç\n", {8, 3, 7});
  auto s = spec_for("f", 2, "out");
  s.mapper = "wordcount-map";
  s.reducer = "wordcount";
  auto r = run_job(store, s);
  ASSERT_EQ(r.output_files.size(), 1u);
  EXPECT_EQ(read_canonical_output(dir / "out"), "bir\t1\niki\t2\nüç\t3\n");
}

TEST_F(JobTest, MultiFileJobNumbersPartsAcrossInputs) {
  store.put_file("a", "a1\na2\n", {3, 3, 7});
  store.put_file("b", "b1\n", {});
  JobSpec s;
  s.inputs = {store.manifest("a"), store.manifest("b")};
  s.mapper = "identity";
  s.workers = 2;
  s.output_dir = dir / "out";
  auto r = run_job(store, s);
  EXPECT_EQ(r.tasks_total, 3u);
  EXPECT_EQ(read_canonical_output(dir / "out"), "a1\na2\nb1\n");
  EXPECT_TRUE(fs::exists(dir / "out" / "part-00002"));
}

TEST_F(JobTest, SummaryFileRecordsCounts) {
  store.put_file("f", numbered_lines(10), {100, 3, 7});
  auto r = run_job(store, spec_for("f", 1, "out"));
  const auto summary = oracle::read_file(dir / "out" / "_JOB");
  EXPECT_NE(summary.find("tasks_total=" + std::to_string(r.tasks_total) + "\n"), std::string::npos);
  EXPECT_NE(summary.find("tasks_retried=0\n"), std::string::npos);
  EXPECT_NE(summary.find("wall_time_ms="), std::string::npos);
}
