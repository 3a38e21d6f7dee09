// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dccrn {

// Exit-code contract: 0 ok, 1 usage, 2 data, 3 verification.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

// Level comes from the DCCRN_LOG environment variable (debug|info|warn|error).
LogLevel log_level();
void log_message(LogLevel level, const std::string& msg);

#define DCCRN_LOG(level, expr)                       \
  do {                                               \
    if (static_cast<int>(level) >=                   \
        static_cast<int>(::dccrn::log_level())) {    \
      std::ostringstream os__;                       \
      os__ << expr;                                  \
      ::dccrn::log_message(level, os__.str());       \
    }                                                \
  } while (0)

#define LOG_DEBUG(expr) DCCRN_LOG(::dccrn::LogLevel::kDebug, expr)
#define LOG_INFO(expr) DCCRN_LOG(::dccrn::LogLevel::kInfo, expr)
#define LOG_WARN(expr) DCCRN_LOG(::dccrn::LogLevel::kWarn, expr)
#define LOG_ERROR(expr) DCCRN_LOG(::dccrn::LogLevel::kError, expr)

// Deterministic RNG wrapper. Distributions are hand-rolled from the raw
// 64-bit stream so draws are identical on every platform/stdlib.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n) {
    return n == 0 ? 0 : engine_() % n;
  }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::string shape_str(const std::vector<size_t>& shape);

}  // namespace dccrn
