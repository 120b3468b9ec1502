#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace amrsumm {

// key=value lines, full-line '#' comments, blank lines ignored. Duplicate
// keys throw ConfigError; key validation is the caller's job (the CLI knows
// its own option set).
std::map<std::string, std::string> parse_config_file(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

// FNV-1a over the canonical "key=value\n" rendering, sorted by key.
std::uint64_t fnv1a64(const std::string& data);
std::string config_digest(const std::map<std::string, std::string>& kv);

// Size policy: "gold" or "fixed:<k>". Throws ConfigError on anything else.
struct SizePolicy {
  bool from_gold = true;
  int fixed = 0;
};
SizePolicy parse_size_policy(const std::string& text);
std::string size_policy_string(const SizePolicy& sp);

}  // namespace amrsumm
