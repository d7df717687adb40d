#include "fixtures.h"

#include <atomic>
#include <cstdlib>
#include <unistd.h>

namespace perseval::fixture {

namespace fs = std::filesystem;

fs::path source_dir() { return PERSEVAL_SOURCE_DIR; }

corpus::LabelSchema schema(const std::string& dataset) {
  return corpus::LabelSchema::load(source_dir() / "schemas" / (dataset + ".json"));
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("perseval-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

ScopedEnv::ScopedEnv(const char* name, const std::string& value) : name_(name) {
  if (const char* old = std::getenv(name)) {
    had_old_ = true;
    old_ = old;
  }
  ::setenv(name, value.c_str(), 1);
}

ScopedEnv::~ScopedEnv() {
  if (had_old_) {
    ::setenv(name_.c_str(), old_.c_str(), 1);
  } else {
    ::unsetenv(name_.c_str());
  }
}

}  // namespace perseval::fixture
