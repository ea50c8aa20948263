// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forge/util/kv_config.h"

#include <cctype>
#include <charconv>

#include "forge/util/error.h"
#include "forge/util/io.h"

namespace forge {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchema,
              "config line " + std::to_string(line) + ": " + what);
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  char quote = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

KvConfig::Value parse_value(std::string_view raw, size_t line) {
  if (raw.empty()) fail(line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
      char c = raw[i];
      if (c == '\\' && i + 2 < raw.size()) {
        const char e = raw[++i];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(line, std::string("unsupported escape \\") + e);
        }
      }
      out.push_back(c);
    }
    return out;
  }
  if (raw.front() == '\'') {
    if (raw.size() < 2 || raw.back() != '\'') fail(line, "unterminated string");
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string digits;
  for (char c : raw) {
    if (c != '_') digits.push_back(c);
  }
  int64_t iv = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
  if (ec == std::errc() && p == digits.data() + digits.size()) return iv;
  double dv = 0;
  auto [q, ec2] = std::from_chars(digits.data(), digits.data() + digits.size(), dv);
  if (ec2 == std::errc() && q == digits.data() + digits.size()) return dv;
  fail(line, "cannot parse value '" + std::string(raw) + "'");
}

}  // namespace

KvConfig KvConfig::parse(std::string_view text) {
  KvConfig cfg;
  std::string section;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(line_no, "empty key");
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = parse_value(trim(line.substr(eq + 1)), line_no);
  }
  return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::optional<std::string> KvConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw Error(ErrorCode::kSchema, "config key '" + key + "' is not a string");
}

std::optional<int64_t> KvConfig::get_int(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (auto* v = std::get_if<int64_t>(&it->second)) return *v;
  throw Error(ErrorCode::kSchema, "config key '" + key + "' is not an integer");
}

std::optional<double> KvConfig::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (auto* v = std::get_if<double>(&it->second)) return *v;
  if (auto* v = std::get_if<int64_t>(&it->second)) return static_cast<double>(*v);
  throw Error(ErrorCode::kSchema, "config key '" + key + "' is not a number");
}

std::optional<bool> KvConfig::get_bool(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (auto* v = std::get_if<bool>(&it->second)) return *v;
  throw Error(ErrorCode::kSchema, "config key '" + key + "' is not a boolean");
}

}  // namespace forge
