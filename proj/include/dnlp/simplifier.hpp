#pragma once

// Rule-based Turkish text simplification: tokenize, Turkish case folding,
// stopword removal (bigrams before unigrams) and longest-suffix-first
// stripping. All functions are pure over an immutable SimplifierConfig.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dnlp/error.hpp"
#include "dnlp/shipped_data.hpp"
#include "dnlp/utf8.hpp"

namespace dnlp::text {

struct Token {
  std::string surface;
  std::string normalized;
};

struct SuffixRule {
  std::string suffix;
  std::size_t min_stem_chars = 2;
};

inline char32_t turkish_lower(char32_t c) noexcept {
  if (c == U'I') return U'ı';
  if (c == U'İ') return U'i';
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 32;
  if (c >= 0x100 && c <= 0x137) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0x139 && c <= 0x148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c % 2 == 1) ? c + 1 : c;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 37;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 63;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  return c;
}

inline std::string turkish_lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    if (b < 0x80) {
      if (b == 'I') {
        out += "ı";
      } else {
        out.push_back(b >= 'A' && b <= 'Z' ? static_cast<char>(b + 32) : static_cast<char>(b));
      }
      ++i;
      continue;
    }
    auto d = utf8::decode_at(s, i);
    if (!d) throw DecodeError(i);
    utf8::append(out, turkish_lower(d->cp));
    i += d->len;
  }
  return out;
}

inline bool is_space(char32_t c) noexcept {
  return c == ' ' || (c >= '\t' && c <= '\r') || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

inline bool is_punct(char32_t c) noexcept {
  if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003);
}

// Drops leading and trailing punctuation code points; inner ones stay.
inline std::string_view trim_punct(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    auto d = utf8::decode_at(s, begin);
    if (!d) throw DecodeError(begin);
    if (!is_punct(d->cp)) break;
    begin += d->len;
  }
  std::size_t end = s.size();
  while (end > begin) {
    std::size_t lead = end - 1;
    while (lead > begin && (static_cast<unsigned char>(s[lead]) & 0xC0) == 0x80) --lead;
    auto d = utf8::decode_at(s, lead);
    if (!d) throw DecodeError(lead);
    if (!is_punct(d->cp)) break;
    end = lead;
  }
  return s.substr(begin, end - begin);
}

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t word_start = std::string_view::npos;
  auto flush = [&](std::size_t end) {
    if (word_start == std::string_view::npos) return;
    std::string_view surface = line.substr(word_start, end - word_start);
    std::string normalized = turkish_lowercase(trim_punct(surface));
    if (!normalized.empty()) tokens.push_back({std::string(surface), std::move(normalized)});
    word_start = std::string_view::npos;
  };
  while (i < line.size()) {
    auto d = utf8::decode_at(line, i);
    if (!d) throw DecodeError(i);
    if (is_space(d->cp)) {
      flush(i);
    } else if (word_start == std::string_view::npos) {
      word_start = i;
    }
    i += d->len;
  }
  flush(line.size());
  return tokens;
}

class StopwordLexicon {
 public:
  StopwordLexicon() = default;

  void add_unigram(std::string_view word) { unigrams_.insert(turkish_lowercase(word)); }

  void add_bigram(std::string_view first, std::string_view second) {
    bigrams_.insert(bigram_key(turkish_lowercase(first), turkish_lowercase(second)));
  }

  bool is_unigram(const std::string& word) const { return unigrams_.contains(word); }

  bool is_bigram(const std::string& first, const std::string& second) const {
    return !bigrams_.empty() && bigrams_.contains(bigram_key(first, second));
  }

  std::size_t unigram_count() const { return unigrams_.size(); }
  std::size_t bigram_count() const { return bigrams_.size(); }

  const std::unordered_set<std::string>& unigrams() const { return unigrams_; }

  // One entry per line; a line holding two words is a bigram; `#` comments.
  static StopwordLexicon parse(std::string_view text) {
    utf8::validate(text);
    StopwordLexicon lex;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream words(line);
      std::vector<std::string> parts;
      for (std::string w; words >> w;) parts.push_back(w);
      if (parts.empty()) continue;
      if (parts.size() == 1) {
        lex.add_unigram(parts[0]);
      } else if (parts.size() == 2) {
        lex.add_bigram(parts[0], parts[1]);
      } else {
        throw ConfigError("stopword line " + std::to_string(lineno) + ": more than two words");
      }
    }
    return lex;
  }

 private:
  static std::string bigram_key(const std::string& a, const std::string& b) { return a + ' ' + b; }

  std::unordered_set<std::string> unigrams_;
  std::unordered_set<std::string> bigrams_;
};

inline std::vector<SuffixRule> parse_suffix_rules(std::string_view text) {
  utf8::validate(text);
  std::vector<SuffixRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ConfigError("suffix line " + std::to_string(lineno) + ": expected suffix<TAB>min_stem_chars");
    SuffixRule rule{turkish_lowercase(line.substr(0, tab)), 0};
    const std::string count = line.substr(tab + 1);
    auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), rule.min_stem_chars);
    if (ec != std::errc{} || ptr != count.data() + count.size())
      throw ConfigError("suffix line " + std::to_string(lineno) + ": bad min_stem_chars '" + count + "'");
    rules.push_back(std::move(rule));
  }
  return rules;
}

class SimplifierConfig {
 public:
  SimplifierConfig(StopwordLexicon lexicon, std::vector<SuffixRule> rules, std::size_t max_strip_passes = 3)
      : lexicon_(std::move(lexicon)), rules_(std::move(rules)), max_strip_passes_(max_strip_passes) {
    if (max_strip_passes_ < 1) throw ConfigError("max_strip_passes must be >= 1");
    for (const auto& r : rules_) {
      if (r.suffix.empty()) throw ConfigError("suffix rule with empty suffix");
      if (r.min_stem_chars < 2) throw ConfigError("suffix rule '" + r.suffix + "': min_stem_chars must be >= 2");
    }
    // Longest suffix first (in code points); ties broken by bytes for determinism.
    std::stable_sort(rules_.begin(), rules_.end(), [](const SuffixRule& a, const SuffixRule& b) {
      const auto la = utf8::length(a.suffix), lb = utf8::length(b.suffix);
      if (la != lb) return la > lb;
      return a.suffix < b.suffix;
    });
    min_token_chars_ = 1;
    if (!rules_.empty()) {
      min_token_chars_ = std::numeric_limits<std::size_t>::max();
      for (const auto& r : rules_) min_token_chars_ = std::min(min_token_chars_, r.min_stem_chars);
    }
  }

  const StopwordLexicon& lexicon() const { return lexicon_; }
  const std::vector<SuffixRule>& rules() const { return rules_; }
  std::size_t max_strip_passes() const { return max_strip_passes_; }
  // Shortest token simplify_line will emit.
  std::size_t min_token_chars() const { return min_token_chars_; }

  static SimplifierConfig from_text(std::string_view stopwords, std::string_view suffixes, std::size_t passes = 3) {
    return {StopwordLexicon::parse(stopwords), parse_suffix_rules(suffixes), passes};
  }

  static SimplifierConfig load(const std::filesystem::path& stopwords, const std::filesystem::path& suffixes,
                               std::size_t passes = 3) {
    return from_text(read_text(stopwords), read_text(suffixes), passes);
  }

 private:
  static std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  StopwordLexicon lexicon_;
  std::vector<SuffixRule> rules_;
  std::size_t max_strip_passes_;
  std::size_t min_token_chars_;
};

inline const SimplifierConfig& default_config() {
  static const SimplifierConfig config = SimplifierConfig::from_text(shipped::kStopwords, shipped::kSuffixes);
  return config;
}

inline bool is_numeric(std::string_view word) noexcept {
  bool digit = false;
  for (char c : word) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != ':' && c != '/' && c != '-') {
      return false;
    }
  }
  return digit;
}

// Strips the longest applicable suffix, up to max_strip_passes times. A rule
// applies when the word ends with it and at least min_stem_chars remain.
inline std::string stem(std::string_view word, const SimplifierConfig& config) {
  std::string w(word);
  if (is_numeric(w)) return w;
  for (std::size_t pass = 0; pass < config.max_strip_passes(); ++pass) {
    const std::size_t len = utf8::length(w);
    bool stripped = false;
    for (const auto& rule : config.rules()) {
      if (!w.ends_with(rule.suffix)) continue;
      const std::size_t suffix_len = utf8::length(rule.suffix);
      if (len < suffix_len + rule.min_stem_chars) continue;
      w.resize(w.size() - rule.suffix.size());
      stripped = true;
      break;
    }
    if (!stripped) break;
  }
  return w;
}

namespace detail {

// One round: drop bigrams, drop unigrams and too-short words, stem the rest.
// Returns true if anything changed.
inline bool simplify_round(std::vector<std::string>& words, const SimplifierConfig& config) {
  const auto& lex = config.lexicon();
  bool changed = false;

  std::vector<std::string> kept;
  kept.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i + 1 < words.size() && lex.is_bigram(words[i], words[i + 1])) {
      ++i;
      changed = true;
      continue;
    }
    kept.push_back(std::move(words[i]));
  }

  words.clear();
  for (auto& w : kept) {
    if (lex.is_unigram(w) || utf8::length(w) < config.min_token_chars()) {
      changed = true;
      continue;
    }
    std::string s = stem(w, config);
    if (s.size() != w.size()) {
      // stripping can expose punctuation ("abc.de" -> "abc.")
      s = std::string(trim_punct(s));
      changed = true;
      if (s.empty()) continue;
    }
    words.push_back(std::move(s));
  }
  return changed;
}

}  // namespace detail

// Output is the space-joined normalized stems of the surviving tokens. Rounds
// repeat until nothing changes, so a stem that turns into a stopword (or
// completes a stopword bigram) is removed too and the result is a fixed point.
inline std::string simplify_line(std::string_view line, const SimplifierConfig& config) {
  std::vector<std::string> words;
  for (auto& t : tokenize(line)) words.push_back(std::move(t.normalized));
  while (detail::simplify_round(words, config)) {
  }
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace dnlp::text
