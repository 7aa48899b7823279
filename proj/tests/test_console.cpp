#include <gtest/gtest.h>

#include "dnlp/console.hpp"
#include "oracles.hpp"

using namespace dnlp;

TEST(Console, EmptyFile) {
  oracle::TempDir dir("console");
  oracle::write_file(dir / "in", "");
  auto run = console::run_sequential({dir / "in"}, text::default_config(), dir / "out");
  EXPECT_EQ(run.lines_processed, 0u);
  EXPECT_EQ(oracle::read_file(dir / "out"), "");
  EXPECT_GT(run.wall_time.count(), 0);
}

TEST(Console, LinePerLineInFileOrder) {
  oracle::TempDir dir("console");
  oracle::write_file(dir / "a", "kanunda\r\nve\n");
  oracle::write_file(dir / "b", "yolu");
  auto run = console::run_sequential({dir / "a", dir / "b"}, text::default_config(), dir / "out");
  EXPECT_EQ(run.lines_processed, 3u);
  EXPECT_EQ(oracle::read_file(dir / "out"), "kanun\n\nyol\n");
}

TEST(Console, SampleSentence) {
  oracle::TempDir dir("console");
  const std::string s =
      "Feshe itiraz davası, işverence geçerli sebep gösterilmeden ya da kanunda öngörülen usule uyulmadan yapılan "
      "fesihlere karşı işçilerin başvurabileceği bir itiraz yolu olarak karşımıza çıkmaktadır.";
  oracle::write_file(dir / "in", s + "\n");
  console::run_sequential({dir / "in"}, text::default_config(), dir / "out");
  const auto out = oracle::read_file(dir / "out");
  EXPECT_NE(out.find("dava işveren"), std::string::npos);
  EXPECT_NE(out.find("kanun öngör usul"), std::string::npos);
  EXPECT_EQ(out.find(" ya "), std::string::npos);
}

TEST(Console, UnreadablePathNamesPath) {
  oracle::TempDir dir("console");
  try {
    console::run_sequential({dir / "missing.txt"}, text::default_config(), dir / "out");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.txt"), std::string::npos);
  }
}

TEST(Console, InvalidUtf8ReportsFileOffset) {
  oracle::TempDir dir("console");
  oracle::write_file(dir / "in", "ok\nbad \xC3\n");
  try {
    console::run_sequential({dir / "in"}, text::default_config(), dir / "out");
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), 7u);
  }
}

TEST(Console, RepeatedRunsAreIdentical) {
  oracle::TempDir dir("console");
  std::string text;
  for (int i = 0; i < 200; ++i) text += "İşçilerin " + std::to_string(i) + " davası ya da yolu\n";
  oracle::write_file(dir / "in", text);
  console::run_sequential({dir / "in"}, text::default_config(), dir / "o1");
  console::run_sequential({dir / "in"}, text::default_config(), dir / "o2");
  EXPECT_EQ(oracle::read_file(dir / "o1"), oracle::read_file(dir / "o2"));
}
