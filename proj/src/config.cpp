#include "amrsumm/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "amrsumm/amr.hpp"

namespace amrsumm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_file(buf.str());
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_digest(const std::map<std::string, std::string>& kv) {
  std::string canon;
  for (const auto& [k, v] : kv) {
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canon)));
  return buf;
}

SizePolicy parse_size_policy(const std::string& text) {
  if (text == "gold") return {true, 0};
  if (text.rfind("fixed:", 0) == 0) {
    const std::string rest = text.substr(6);
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(rest, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad size policy '" + text + "'");
    }
    if (used != rest.size() || k < 0) throw ConfigError("bad size policy '" + text + "'");
    return {false, k};
  }
  throw ConfigError("bad size policy '" + text + "' (gold or fixed:<k>)");
}

std::string size_policy_string(const SizePolicy& sp) {
  return sp.from_gold ? "gold" : "fixed:" + std::to_string(sp.fixed);
}

}  // namespace amrsumm
