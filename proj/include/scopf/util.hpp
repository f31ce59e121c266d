#ifndef SCOPF_UTIL_HPP
#define SCOPF_UTIL_HPP

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace scopf {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sq(double x) { return x * x; }

inline double clip(double x, double lo, double hi) {
  return std::min(hi, std::max(lo, x));
}

// --- wall clock -------------------------------------------------------------

using Clock = std::chrono::steady_clock;

inline double elapsed_seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// A point in time after which work must stop.  A default-constructed
// Deadline never expires.
class Deadline {
public:
  Deadline() = default;
  static Deadline after_seconds(double s) {
    Deadline d;
    d.has_limit_ = true;
    d.when_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(std::max(0.0, s)));
    return d;
  }
  static Deadline at(Clock::time_point t) {
    Deadline d;
    d.has_limit_ = true;
    d.when_ = t;
    return d;
  }
  bool expired() const { return has_limit_ && Clock::now() >= when_; }
  double seconds_left() const {
    if (!has_limit_) return kInf;
    return std::chrono::duration<double>(when_ - Clock::now()).count();
  }

private:
  bool has_limit_ = false;
  Clock::time_point when_{};
};

// --- text helpers (locale independent) ---------------------------------------

inline std::string_view trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s == "inf" || s == "+inf" || s == "Inf") {
    out = kInf;
    return true;
  }
  if (s == "-inf" || s == "-Inf") {
    out = -kInf;
    return true;
  }
  auto rc = std::from_chars(s.data(), s.data() + s.size(), out);
  return rc.ec == std::errc() && rc.ptr == s.data() + s.size();
}

inline bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto rc = std::from_chars(s.data(), s.data() + s.size(), out);
  return rc.ec == std::errc() && rc.ptr == s.data() + s.size();
}

// Fixed-point with exactly 8 fractional digits; '.' decimal separator
// regardless of locale.  Solution-file writers rely on this being stable.
inline std::string format_fixed8(double v) {
  char buf[64];
  auto rc = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 8);
  return std::string(buf, rc.ptr);
}

// --- parallel map ------------------------------------------------------------

// Runs fn(i) for i in [0, n) on up to `workers` threads.  Each slot writes its
// own result so the output order is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  int w = std::max(1, workers);
  if (w == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = static_cast<int>(std::min<std::size_t>(w, n));
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

}  // namespace scopf

#endif  // SCOPF_UTIL_HPP
