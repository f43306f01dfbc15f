#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gutscat::cli {

inline constexpr const char* kSchema = "gutscat-report 1";

/// Structured text: a schema header, "key: value" lines, and a closing
/// manifest digest. Everything except the digest line is the result body.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  template <class T>
  void put(const std::string& key, const T& value) {
    if constexpr (std::is_same_v<T, bool>)
      body_ += key + ": " + (value ? "true" : "false") + "\n";
    else if constexpr (std::is_convertible_v<T, std::string>)
      body_ += key + ": " + std::string(value) + "\n";
    else
      body_ += key + ": " + std::to_string(value) + "\n";
  }
  void section(const std::string& name) { body_ += "[" + name + "]\n"; }
  void text(const std::string& line) { body_ += line + "\n"; }

  const std::string& command() const { return command_; }
  std::string body() const { return std::string(kSchema) + "\ncommand: " + command_ + "\n" + body_; }

 private:
  std::string command_;
  std::string body_;
};

struct InputFile {
  std::string path;
  std::string digest;
};

/// What produced a report. The digest covers the tool version, the
/// subcommand, the input contents and the result, not paths, thread
/// counts or timing, so reruns with equal inputs agree.
struct RunManifest {
  std::vector<std::string> command_line;
  std::vector<InputFile> inputs;
  std::string version;
  double wall_seconds = 0;
  std::string result_digest;

  std::string digest(const std::string& command) const;
  std::string json(const std::string& command) const;
};

/// 16 hex digits of FNV-1a over the bytes.
std::string digest_bytes(const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace gutscat::cli
