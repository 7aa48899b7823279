#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dnlp/corpus_store.hpp"
#include "oracles.hpp"

using namespace dnlp;
using namespace dnlp::corpus;

namespace {

std::string letter_lines(std::size_t n, std::size_t (*width)(std::size_t)) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s.append(width(i), static_cast<char>('a' + i % 26));
    s.push_back('\n');
  }
  return s;
}

std::string concat(const std::vector<Block>& blocks) {
  std::string s;
  for (const auto& b : blocks) s += b.content;
  return s;
}

}  // namespace

TEST(SplitFile, EmptyStreamGivesNoBlocks) { EXPECT_TRUE(split_file("", 10).empty()); }

TEST(SplitFile, SmallFileUnderDefaultBlockIsOneBlock) {
  std::string content;
  while (content.size() < 10 * kMiB) content += "Feshe itiraz davası, işverence geçerli sebep gösterilmeden\n";
  auto blocks = split_file(content, StoreConfig{}.block_size);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].content, content);
}

TEST(SplitFile, ThousandLinesMatchGreedyOracle) {
  const auto content = letter_lines(1000, [](std::size_t i) { return 1000 + (i * 37) % 97; });
  auto blocks = split_file(content, 256 * 1024);
  const auto expected = oracle::greedy_blocks(content, 256 * 1024);
  ASSERT_EQ(blocks.size(), expected.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) EXPECT_EQ(blocks[i].content, expected[i]);

  // frozen from the oracle
  const std::vector<std::uint64_t> sizes = {261126, 261210, 261197, 261184, 4194};
  const std::vector<std::size_t> lines = {249, 249, 249, 249, 4};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    EXPECT_EQ(blocks[i].byte_len(), sizes[i]);
    EXPECT_EQ(blocks[i].line_count, lines[i]);
    EXPECT_EQ(blocks[i].index(), i);
  }
}

TEST(SplitFile, OversizedLineKeepsItsOwnBlock) {
  const std::string content = "short\n" + std::string(50, 'x') + "\nend";
  auto blocks = split_file(content, 10);
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0].content, "short\n");
  EXPECT_EQ(blocks[1].content, std::string(50, 'x') + "\n");
  EXPECT_EQ(blocks[1].line_count, 1u);
  EXPECT_EQ(blocks[2].content, "end");
}

TEST(SplitFile, BlockSizeOneIsOneLinePerBlock) {
  auto blocks = split_file("a\nbb\n\nc", 1);
  ASSERT_EQ(blocks.size(), 4u);
  EXPECT_EQ(blocks[2].content, "\n");
  EXPECT_EQ(blocks[3].content, "c");
}

TEST(SplitFile, InvalidUtf8NamesOffset) {
  try {
    split_file("good\nba\xC3", 4);
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), 7u);
  }
}

TEST(SplitFile, PropertyRoundTripBoundaryAndSize) {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 60; ++iter) {
    const std::uint64_t block_size = 1 + rng() % 300;
    const auto content = oracle::random_text(rng, rng() % 4000, 120);
    const auto blocks = split_file(content, block_size);
    ASSERT_EQ(concat(blocks), content);
    const auto expected = oracle::greedy_blocks(content, block_size);
    ASSERT_EQ(blocks.size(), expected.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      EXPECT_EQ(blocks[i].content, expected[i]);
      EXPECT_TRUE(blocks[i].byte_len() <= block_size || blocks[i].line_count == 1);
      if (i + 1 < blocks.size()) EXPECT_EQ(blocks[i].content.back(), '\n');
    }
  }
}

TEST(PlaceReplicas, RoundRobinBaseCase) {
  auto nodes = place_replicas({"f", 0}, {});
  EXPECT_EQ(nodes, (std::vector<NodeId>{{0}, {1}, {2}}));
}

TEST(PlaceReplicas, ClampsToNodeCount) {
  auto nodes = place_replicas({"f", 3}, {64, 3, 2});
  ASSERT_EQ(nodes.size(), 2u);
  EXPECT_NE(nodes[0], nodes[1]);
}

TEST(PlaceReplicas, WrapsAroundMatchesModularOracle) {
  EXPECT_EQ(place_replicas({"f", 5}, {}), (std::vector<NodeId>{{5}, {6}, {0}}));
  for (std::uint32_t nodes = 1; nodes <= 9; ++nodes) {
    for (std::uint32_t repl = 1; repl <= 5; ++repl) {
      for (std::size_t i = 0; i < 20; ++i) {
        auto got = place_replicas({"f", i}, {64, repl, nodes});
        auto want = oracle::round_robin(i, repl, nodes);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t k = 0; k < got.size(); ++k) EXPECT_EQ(got[k].ordinal, want[k]);
        EXPECT_EQ(std::set<NodeId>(got.begin(), got.end()).size(), got.size());
      }
    }
  }
}

TEST(StoreConfig, DefaultsAreHdfsDefaults) {
  StoreConfig c;
  EXPECT_EQ(c.block_size, 64u * 1024 * 1024);
  EXPECT_EQ(c.replication, 3u);
  EXPECT_EQ(c.node_count, 7u);
}

TEST(StoreConfig, ParsesHadoopAliases) {
  auto c = StoreConfig::parse("# comment\ndfs.block.size=1024\ndfs.replication 2\nstore.nodes=5\n");
  EXPECT_EQ(c.block_size, 1024u);
  EXPECT_EQ(c.replication, 2u);
  EXPECT_EQ(c.node_count, 5u);
  auto d = StoreConfig::parse("store.block_size=7\nstore.replication=1\n");
  EXPECT_EQ(d.block_size, 7u);
  EXPECT_EQ(d.replication, 1u);
}

TEST(StoreConfig, RejectsBadValues) {
  EXPECT_THROW(StoreConfig::parse("dfs.block.size=0\n"), ConfigError);
  EXPECT_THROW(StoreConfig::parse("dfs.replication=abc\n"), ConfigError);
  EXPECT_THROW(StoreConfig::parse("mystery=1\n"), ConfigError);
  EXPECT_THROW(StoreConfig::parse("store.nodes=0\n"), ConfigError);
}

TEST(Manifest, SerializeParseRoundTrip) {
  BlockManifest m{"doc.txt", 30, {{0, 10, {{0}, {1}, {2}}}, {1, 20, {{1}, {2}, {3}}}}};
  const auto text = m.serialize();
  EXPECT_EQ(text, "doc.txt 30\n0 10 0,1,2\n1 20 1,2,3\n");
  auto back = BlockManifest::parse(text);
  EXPECT_EQ(back.serialize(), text);
  EXPECT_NO_THROW(back.validate(3));
  back.total_bytes = 31;
  EXPECT_THROW(back.validate(3), StorageError);
}

class StoreTest : public ::testing::Test {
 protected:
  oracle::TempDir dir{"store"};
  Store store{dir.path()};
};

TEST_F(StoreTest, PutThenReadBackIsIdentical) {
  std::mt19937_64 rng(7);
  const auto content = oracle::random_text(rng, 5000, 200);
  auto m = store.put_file("doc", content, {512, 3, 7});
  EXPECT_NO_THROW(m.validate(3));
  EXPECT_EQ(m.total_bytes, content.size());
  EXPECT_EQ(store.read_file("doc"), content);
  EXPECT_EQ(store.manifest("doc").serialize(), m.serialize());
  EXPECT_EQ(store.list(), std::vector<std::string>{"doc"});
}

TEST_F(StoreTest, OneMebibyteFileLandsOnThreeNodesPerBlock) {
  const auto content = letter_lines(1024, [](std::size_t i) { return 1023 + (i * 13) % 5 - 2; });
  ASSERT_EQ(content.size(), kMiB);
  auto m = store.put_file("big", content, {256 * 1024, 3, 7});
  // frozen from the greedy oracle
  ASSERT_EQ(m.blocks.size(), 5u);
  EXPECT_EQ(m.blocks.size(), oracle::greedy_blocks(content, 256 * 1024).size());
  for (const auto& b : m.blocks) {
    EXPECT_EQ(b.placements.size(), 3u);
    for (NodeId n : b.placements) EXPECT_TRUE(fs::exists(store.block_path(n, {"big", b.index})));
  }
}

TEST_F(StoreTest, DuplicateNameIsRejected) {
  store.put_file("a", "x\n", {});
  EXPECT_THROW(store.put_file("a", "y\n", {}), AlreadyExistsError);
}

TEST_F(StoreTest, BadNamesAreRejected) {
  EXPECT_THROW(store.put_file("", "x", {}), ConfigError);
  EXPECT_THROW(store.put_file("a b", "x", {}), ConfigError);
  EXPECT_THROW(store.put_file("../x", "x", {}), ConfigError);
}

TEST_F(StoreTest, CrlfIsNormalized) {
  store.put_file("crlf", "a\r\nb\r\nc", {});
  EXPECT_EQ(store.read_file("crlf"), "a\nb\nc");
}

TEST_F(StoreTest, EmptyFileHasNoBlocks) {
  auto m = store.put_file("empty", "", {});
  EXPECT_TRUE(m.blocks.empty());
  EXPECT_EQ(store.read_file("empty"), "");
}

TEST_F(StoreTest, GetBlockFailsOverToNextReplica) {
  const std::string content = "one\ntwo\nthree\n";
  auto m = store.put_file("f", content, {4, 3, 7});
  ASSERT_EQ(m.blocks.size(), 3u);
  const auto& placements = m.blocks[1].placements;
  const auto direct = store.get_block({"f", 1});
  EXPECT_EQ(direct.content, "two\n");

  const auto second = store.get_block({"f", 1}, {placements[0]});
  EXPECT_EQ(second.content, direct.content);
  const auto third = store.get_block({"f", 1}, {placements[0], placements[1]});
  EXPECT_EQ(third.content, direct.content);

  EXPECT_THROW(store.get_block({"f", 1}, {placements.begin(), placements.end()}), BlockUnavailableError);
}

TEST_F(StoreTest, MissingReplicaFileIsSkipped) {
  auto m = store.put_file("f", "hello\n", {});
  fs::remove(store.block_path(m.blocks[0].placements[0], {"f", 0}));
  EXPECT_EQ(store.get_block({"f", 0}).content, "hello\n");
}

TEST_F(StoreTest, UnknownFileIsNotFound) {
  EXPECT_THROW(store.manifest("nope"), NotFoundError);
  EXPECT_THROW(store.get_block({"nope", 0}), NotFoundError);
}
