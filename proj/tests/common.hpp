#pragma once

// Shared test utilities: unique temp directories, file helpers, CLI
// invocation, and the finite-difference gradient comparator used by both
// the unit suites and the acceptance harness.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace testutil {

// Unique, self-deleting working directory per test.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("echograph_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline bool files_equal(const std::string& a, const std::string& b) {
  return slurp(a) == slurp(b);
}

inline std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

// Gradient agreement: relative error with an absolute floor so exact-zero
// gradients (dead ReLU units, unused dimensions) compare against finite
// -difference noise instead of dividing by zero.
inline bool grad_close(double analytic, double numeric, double tol = 1e-4) {
  const double scale =
      std::max({1e-6, std::fabs(analytic), std::fabs(numeric)});
  return std::fabs(analytic - numeric) <= tol * scale;
}

// Central finite difference of a scalar function of one coordinate.
inline double central_diff(const std::function<double(double)>& f, double x0,
                           double h = 1e-5) {
  return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

// Runs the pipeline binary with the given arguments, capturing combined
// output. Arguments are single-quoted for the shell.
inline CliResult run_cli(const std::string& binary,
                         const std::vector<std::string>& args,
                         const std::string& capture_file) {
  std::string cmd = "'" + binary + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " > '" + capture_file + "' 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.output = slurp(capture_file);
  if (status == -1) {
    r.exit_code = -1;
  } else if (WIFEXITED(status)) {
    r.exit_code = WEXITSTATUS(status);
  } else {
    r.exit_code = 128;
  }
  return r;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace testutil
