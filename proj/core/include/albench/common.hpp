#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace albench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::size_t;
using IndexList = std::vector<Index>;
using Labels = std::vector<int>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LoadError : Error {
  using Error::Error;
};
struct SplitError : Error {
  using Error::Error;
};
struct TrainError : Error {
  using Error::Error;
};
struct StrategyError : Error {
  using Error::Error;
};
struct FirewallError : Error {
  using Error::Error;
};
struct MetricError : Error {
  using Error::Error;
};
struct AnalysisError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
  return splitmix64(s);
}

// Stable stream derivation: identical on every platform and run.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                                 std::uint64_t index, std::string_view role) {
  std::uint64_t h = hash_mix(master, fnv1a64(name));
  h = hash_mix(h, index);
  return hash_mix(h, fnv1a64(role));
}

// Counter-based generator (splitmix64) so draws are reproducible without
// relying on implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n) via 128-bit multiply.
  Index uniform_index(Index n) {
    return static_cast<Index>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (Index i = v.size(); i > 1; --i) {
      Index j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // First k entries of a random permutation of `pool`, in draw order.
  template <typename T>
  std::vector<T> sample_without_replacement(std::vector<T> pool, Index k) {
    std::vector<T> out;
    out.reserve(k);
    Index n = pool.size();
    for (Index i = 0; i < k && i < n; ++i) {
      Index j = i + uniform_index(n - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Shortest round-trip decimal form; the one formatting used for every CSV so
// reruns and resumed runs emit byte-identical files.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<Index>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace albench
