#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <unistd.h>

#include "masrad/error.hpp"

#define EXPECT_MASRAD_ERROR(stmt, expected_code)                                   \
  do {                                                                             \
    try {                                                                          \
      stmt;                                                                        \
      ADD_FAILURE() << "expected " << masrad::error_code_name(expected_code);      \
    } catch (const masrad::Error& e_) {                                            \
      EXPECT_EQ(e_.code(), expected_code) << e_.what();                            \
    }                                                                              \
  } while (0)

namespace masrad::testing {

/// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("masrad-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path samples_dir() { return MASRAD_SAMPLES; }
inline std::filesystem::path test_data_dir() { return MASRAD_TEST_DATA; }

}  // namespace masrad::testing
