#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "persona/corpus.hpp"

namespace testutil {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    const auto tag = std::to_string(rd()) + "_" + std::to_string(counter++);
    path_ = std::filesystem::temp_directory_path() / ("persona_test_" + tag);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline persona::corpus::UserRecord make_user(const std::string& id, const std::string& code) {
  persona::corpus::UserRecord u;
  u.user_id = id;
  u.personality = persona::PersonalityLabel::parse(code);
  return u;
}

inline persona::corpus::TweetRecord make_tweet(const std::string& user, const std::string& code,
                                               const std::string& text,
                                               persona::corpus::TweetKind kind =
                                                   persona::corpus::TweetKind::Tweet) {
  persona::corpus::TweetRecord t;
  t.user_id = user;
  t.text = text;
  t.kind = kind;
  t.label = persona::PersonalityLabel::parse(code);
  return t;
}

}  // namespace testutil
