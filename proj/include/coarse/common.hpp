#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace coarse {

/// Points of a finite metric space are dense integer ids 0..n-1.
using PointId = std::int32_t;

/// An ordered vertex tuple. Simplices are sorted and duplicate-free;
/// raw cochain/chain tuples may repeat vertices and come in any order.
using Tuple = std::vector<PointId>;

/// Absolute tolerance for all comparisons of geometric distances.
/// Exactness lives in the algebra, not the geometry.
inline constexpr double kDistTol = 1e-9;

inline bool approx_le(double a, double b, double tol = kDistTol) { return a <= b + tol; }
inline bool approx_eq(double a, double b, double tol = kDistTol) { return std::fabs(a - b) <= tol; }

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (PointId v : t) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AsymmetricInput : Error { using Error::Error; };
struct NegativeDistance : Error { using Error::Error; };
struct TriangleViolation : Error { using Error::Error; };
struct SizeLimit : Error { using Error::Error; };
struct EmptySubset : Error { using Error::Error; };
struct RingMismatch : Error { using Error::Error; };
struct MissingBasepoint : Error { using Error::Error; };
struct NotASubcomplex : Error { using Error::Error; };
struct EmptyTower : Error { using Error::Error; };
struct EmptyComplex : Error { using Error::Error; };
struct InsufficientStages : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ComplementExhausted : Error { using Error::Error; };
struct CoverMismatch : Error { using Error::Error; };
struct BadInput : Error { using Error::Error; };

/// Raised when a constrained filling solve has no solution below the
/// radius cap. Carries the offending generator.
struct FillingNotFound : Error {
  Tuple simplex;
  double radius_cap = 0;
  FillingNotFound(Tuple s, double cap, const std::string& what)
      : Error(what), simplex(std::move(s)), radius_cap(cap) {}
};

/// splitmix64; deterministic across platforms, unlike the std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool coin() { return next() & 1; }

 private:
  std::uint64_t state_;
};

/// Worker count: explicit request, else COARSECOH_THREADS, else hardware.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COARSECOH_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(resolve_threads(threads), n));
  if (threads == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Nondecreasing piecewise-linear table r -> f(r), extended beyond the last
/// knot with a final slope. Used for the control functions mu and rho.
class ControlFunction {
 public:
  ControlFunction() : knots_{{0.0, 0.0}}, tail_slope_(0.0) {}

  ControlFunction(std::vector<std::pair<double, double>> knots, double tail_slope)
      : knots_(std::move(knots)), tail_slope_(tail_slope) {
    if (knots_.empty()) throw BadInput("control function needs at least one knot");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (knots_[i].first <= knots_[i - 1].first)
        throw BadInput("control function knots must have increasing r");
      if (knots_[i].second < knots_[i - 1].second - kDistTol)
        throw BadInput("control function must be nondecreasing");
    }
    if (tail_slope_ < 0) throw BadInput("control function must be nondecreasing");
    if (knots_.front().second < 0) throw BadInput("control function must be nonnegative");
  }

  static ControlFunction constant(double c) { return ControlFunction({{0.0, c}}, 0.0); }
  static ControlFunction affine(double slope, double intercept) {
    return ControlFunction({{0.0, intercept}}, slope);
  }

  double operator()(double r) const {
    if (r <= knots_.front().first) return knots_.front().second;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (r <= knots_[i].first) {
        const auto& [r0, v0] = knots_[i - 1];
        const auto& [r1, v1] = knots_[i];
        return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
      }
    }
    return knots_.back().second + tail_slope_ * (r - knots_.back().first);
  }

  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  double tail_slope() const { return tail_slope_; }

 private:
  std::vector<std::pair<double, double>> knots_;
  double tail_slope_;
};

}  // namespace coarse
