#include "report.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gutscat/error.hpp"
#include "gutscat/gi_decomposition.hpp"

namespace gutscat::cli {

std::string digest_bytes(const std::string& bytes) { return signature_digest(bytes); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string RunManifest::digest(const std::string& command) const {
  std::string key = version + "\n" + command + "\n";
  for (const auto& f : inputs) key += f.digest + "\n";
  return digest_bytes(key + result_digest);
}

std::string RunManifest::json(const std::string& command) const {
  nlohmann::ordered_json j;
  j["command_line"] = command_line;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& f : inputs) j["inputs"].push_back({{"path", f.path}, {"digest", f.digest}});
  j["version"] = version;
  j["wall_seconds"] = wall_seconds;
  j["result_digest"] = result_digest;
  j["manifest_digest"] = digest(command);
  return j.dump(2) + "\n";
}

}  // namespace gutscat::cli
