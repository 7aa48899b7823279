#pragma once

// Line-aligned block storage with replica placement over directory-backed
// nodes. A stored file is a manifest plus one block file per replica:
//
//   <root>/node-<k>/<file_name>.block-<index>
//   <root>/manifests/<file_name>.manifest
//
// The manifest is written last, so its presence marks a complete file.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dnlp/error.hpp"
#include "dnlp/utf8.hpp"

namespace dnlp::corpus {

namespace fs = std::filesystem;

inline constexpr std::uint64_t kMiB = 1024 * 1024;

struct StoreConfig {
  std::uint64_t block_size = 64 * kMiB;
  std::uint32_t replication = 3;
  std::uint32_t node_count = 7;

  void validate() const {
    if (block_size < 1) throw ConfigError("block_size must be >= 1");
    if (replication < 1) throw ConfigError("replication must be >= 1");
    if (node_count < 1) throw ConfigError("node_count must be >= 1");
  }

  std::uint32_t effective_replication() const { return std::min(replication, node_count); }

  // Accepts `store.block_size`, `store.replication`, `store.nodes` and the
  // Hadoop spellings `dfs.block.size`, `dfs.replication`.
  void set(std::string_view key, std::string_view value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
      throw ConfigError("config key " + std::string(key) + ": not an unsigned integer: '" +
                        std::string(value) + "'");
    if (key == "dfs.block.size" || key == "store.block_size") {
      block_size = v;
    } else if (key == "dfs.replication" || key == "store.replication") {
      replication = static_cast<std::uint32_t>(v);
    } else if (key == "store.nodes") {
      node_count = static_cast<std::uint32_t>(v);
    } else {
      throw ConfigError("unknown config key: " + std::string(key));
    }
  }

  // `key=value` or `key value` lines; `#` starts a comment.
  static StoreConfig parse(std::string_view text) { return parse(text, StoreConfig{}); }
  static StoreConfig parse(std::string_view text, StoreConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
      auto sep = line.find_first_of("= \t");
      if (sep == std::string::npos) throw ConfigError("config line without value: " + line);
      std::string key = line.substr(0, sep);
      auto vstart = line.find_first_not_of("= \t", sep);
      std::string value = vstart == std::string::npos ? "" : line.substr(vstart);
      base.set(key, value);
    }
    base.validate();
    return base;
  }

  static StoreConfig load(const fs::path& path) { return load(path, StoreConfig{}); }
  static StoreConfig load(const fs::path& path, StoreConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), base);
  }
};

struct NodeId {
  std::uint32_t ordinal = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct BlockId {
  std::string file_name;
  std::size_t index = 0;

  std::string str() const { return file_name + "#" + std::to_string(index); }
  auto operator<=>(const BlockId&) const = default;
};

struct Block {
  BlockId id;
  std::string content;
  std::size_t line_count = 0;

  const std::string& file_name() const { return id.file_name; }
  std::size_t index() const { return id.index; }
  std::uint64_t byte_len() const { return content.size(); }
};

struct BlockEntry {
  std::size_t index = 0;
  std::uint64_t byte_len = 0;
  std::vector<NodeId> placements;
};

struct BlockManifest {
  std::string file_name;
  std::uint64_t total_bytes = 0;
  std::vector<BlockEntry> blocks;

  BlockId block_id(std::size_t i) const { return {file_name, blocks.at(i).index}; }

  std::string serialize() const {
    std::string out = file_name + " " + std::to_string(total_bytes) + "\n";
    for (const auto& b : blocks) {
      out += std::to_string(b.index) + " " + std::to_string(b.byte_len) + " ";
      for (std::size_t k = 0; k < b.placements.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(b.placements[k].ordinal);
      }
      out += '\n';
    }
    return out;
  }

  static BlockManifest parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    BlockManifest m;
    std::string line;
    if (!std::getline(in, line)) throw StorageError("manifest is empty");
    {
      std::istringstream h(line);
      if (!(h >> m.file_name >> m.total_bytes)) throw StorageError("bad manifest header: " + line);
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream r(line);
      BlockEntry e;
      std::string nodes;
      if (!(r >> e.index >> e.byte_len >> nodes)) throw StorageError("bad manifest row: " + line);
      std::istringstream ns(nodes);
      std::string tok;
      while (std::getline(ns, tok, ',')) e.placements.push_back({static_cast<std::uint32_t>(std::stoul(tok))});
      m.blocks.push_back(std::move(e));
    }
    return m;
  }

  // Checks the structural invariants; `replicas` is the expected placement count.
  void validate(std::size_t replicas) const {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      if (b.index != i) throw StorageError(file_name + ": block order broken at " + std::to_string(i));
      sum += b.byte_len;
      std::set<NodeId> distinct(b.placements.begin(), b.placements.end());
      if (b.placements.size() != replicas || distinct.size() != replicas)
        throw StorageError(file_name + ": block " + std::to_string(i) + " has bad placements");
    }
    if (sum != total_bytes) throw StorageError(file_name + ": block sizes do not sum to total_bytes");
  }
};

// Byte range of one block inside the source text.
struct BlockExtent {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line_count = 0;
};

inline std::size_t count_lines(std::string_view s) {
  if (s.empty()) return 0;
  auto n = static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
  return s.back() == '\n' ? n : n + 1;
}

// Greedy line packing: each block takes the longest run of whole lines that
// fits in block_size. A line longer than block_size becomes a block by itself.
inline std::vector<BlockExtent> split_extents(std::string_view content, std::uint64_t block_size) {
  if (block_size < 1) throw ConfigError("block_size must be >= 1");
  utf8::validate(content);
  std::vector<BlockExtent> out;
  const std::size_t n = content.size();
  std::size_t start = 0;
  while (start < n) {
    std::size_t end;
    if (n - start <= block_size) {
      end = n;
    } else {
      const std::size_t window = static_cast<std::size_t>(block_size);
      const void* hit = memrchr(content.data() + start, '\n', window);
      if (hit) {
        end = static_cast<std::size_t>(static_cast<const char*>(hit) - content.data()) + 1;
      } else {
        auto nl = content.find('\n', start + window);
        end = nl == std::string_view::npos ? n : nl + 1;
      }
    }
    std::string_view piece = content.substr(start, end - start);
    out.push_back({start, piece.size(), count_lines(piece)});
    start = end;
  }
  return out;
}

inline std::vector<Block> split_file(std::string_view content, std::uint64_t block_size,
                                     const std::string& file_name = {}) {
  std::vector<Block> blocks;
  auto extents = split_extents(content, block_size);
  blocks.reserve(extents.size());
  for (std::size_t i = 0; i < extents.size(); ++i) {
    const auto& e = extents[i];
    blocks.push_back({{file_name, i}, std::string(content.substr(e.offset, e.length)), e.line_count});
  }
  return blocks;
}

// Round-robin: block i lands on nodes i, i+1, ... (mod node_count).
inline std::vector<NodeId> place_replicas(const BlockId& id, const StoreConfig& config) {
  config.validate();
  const std::uint32_t copies = config.effective_replication();
  std::vector<NodeId> nodes;
  nodes.reserve(copies);
  for (std::uint32_t k = 0; k < copies; ++k)
    nodes.push_back({static_cast<std::uint32_t>((id.index + k) % config.node_count)});
  return nodes;
}

// CRLF becomes LF; everything else is kept as-is.
inline std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n') continue;
    out.push_back(s[i]);
  }
  return out;
}

inline void validate_file_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..")
    throw ConfigError("invalid file name '" + name + "'");
  for (unsigned char c : name)
    if (c <= 0x20 || c == '/' || c == '\\' || c == 0x7F)
      throw ConfigError("invalid file name '" + name + "': no whitespace, control characters or slashes");
}

namespace detail {

inline std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StorageError("cannot read " + p.string());
  std::string s;
  in.seekg(0, std::ios::end);
  s.resize(static_cast<std::size_t>(in.tellg()));
  in.seekg(0);
  in.read(s.data(), static_cast<std::streamsize>(s.size()));
  if (!in) throw StorageError("short read on " + p.string());
  return s;
}

inline void write_all(const fs::path& p, std::string_view data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw StorageError("cannot write " + p.string());
}

}  // namespace detail

class Store {
 public:
  explicit Store(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }

  fs::path node_dir(NodeId node) const { return root_ / ("node-" + std::to_string(node.ordinal)); }

  fs::path block_path(NodeId node, const BlockId& id) const {
    return node_dir(node) / (id.file_name + ".block-" + std::to_string(id.index));
  }

  fs::path manifest_path(const std::string& file_name) const {
    return root_ / "manifests" / (file_name + ".manifest");
  }

  bool contains(const std::string& file_name) const { return fs::exists(manifest_path(file_name)); }

  BlockManifest put_file(const std::string& file_name, std::string_view content, const StoreConfig& config) {
    validate_file_name(file_name);
    config.validate();
    utf8::validate(content);
    if (contains(file_name)) throw AlreadyExistsError("file already stored: " + file_name);

    const std::string text = normalize_newlines(content);
    const auto extents = split_extents(text, config.block_size);

    BlockManifest manifest;
    manifest.file_name = file_name;
    manifest.total_bytes = text.size();
    try {
      fs::create_directories(root_ / "manifests");
      for (std::size_t i = 0; i < extents.size(); ++i) {
        const BlockId id{file_name, i};
        BlockEntry entry{i, extents[i].length, place_replicas(id, config)};
        const std::string_view bytes = std::string_view(text).substr(extents[i].offset, extents[i].length);
        for (NodeId node : entry.placements) {
          fs::create_directories(node_dir(node));
          detail::write_all(block_path(node, id), bytes);
        }
        manifest.blocks.push_back(std::move(entry));
      }
      const fs::path tmp = manifest_path(file_name).string() + ".tmp";
      detail::write_all(tmp, manifest.serialize());
      fs::rename(tmp, manifest_path(file_name));
    } catch (const fs::filesystem_error& e) {
      throw StorageError(std::string("put ") + file_name + ": " + e.what());
    }
    return manifest;
  }

  BlockManifest manifest(const std::string& file_name) const {
    const fs::path p = manifest_path(file_name);
    if (!fs::exists(p)) throw NotFoundError("no such stored file: " + file_name);
    return BlockManifest::parse(detail::read_all(p));
  }

  std::vector<std::string> list() const {
    std::vector<std::string> names;
    const fs::path dir = root_ / "manifests";
    if (!fs::exists(dir)) return names;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      constexpr std::string_view ext = ".manifest";
      if (name.size() > ext.size() && name.ends_with(ext)) names.push_back(name.substr(0, name.size() - ext.size()));
    }
    std::sort(names.begin(), names.end());
    return names;
  }

  // Serves the block from the first placement that is neither in
  // failed_nodes nor unreadable.
  Block get_block(const BlockManifest& manifest, std::size_t index, const std::set<NodeId>& failed_nodes = {}) const {
    const BlockEntry& entry = manifest.blocks.at(index);
    const BlockId id{manifest.file_name, entry.index};
    for (NodeId node : entry.placements) {
      if (failed_nodes.contains(node)) continue;
      const fs::path p = block_path(node, id);
      std::error_code ec;
      if (!fs::is_regular_file(p, ec)) continue;
      std::string content;
      try {
        content = detail::read_all(p);
      } catch (const StorageError&) {
        continue;
      }
      if (content.size() != entry.byte_len) continue;
      const std::size_t lines = count_lines(content);
      return {id, std::move(content), lines};
    }
    throw BlockUnavailableError(id.str());
  }

  Block get_block(const BlockId& id, const std::set<NodeId>& failed_nodes = {}) const {
    const BlockManifest m = manifest(id.file_name);
    if (id.index >= m.blocks.size()) throw NotFoundError("no such block: " + id.str());
    return get_block(m, id.index, failed_nodes);
  }

  std::string read_file(const std::string& file_name, const std::set<NodeId>& failed_nodes = {}) const {
    const BlockManifest m = manifest(file_name);
    std::string out;
    out.reserve(m.total_bytes);
    for (std::size_t i = 0; i < m.blocks.size(); ++i) out += get_block(m, i, failed_nodes).content;
    return out;
  }

 private:
  fs::path root_;
};

}  // namespace dnlp::corpus
