#ifndef BKQ_RNG_HPP
#define BKQ_RNG_HPP

#include <cstdint>
#include <string>

namespace bkq {

// Identifies one replication's random stream. Streams derived from distinct
// paths are statistically independent and may be consumed in any order, so
// replications can run on any number of threads and still reproduce bit-exactly.
struct SeedPath {
  std::uint64_t master = 0;
  std::uint64_t experiment = 0;
  std::uint64_t n = 0;
  std::uint64_t replication = 0;

  std::uint64_t stream_key() const;
  std::string to_string() const;  // "master:experiment:n:replication"

  friend bool operator==(const SeedPath&, const SeedPath&) = default;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t SeedPath::stream_key() const {
  std::uint64_t h = detail::mix64(master + 0x9E3779B97F4A7C15ull);
  h = detail::mix64(h ^ (experiment + 0xBF58476D1CE4E5B9ull));
  h = detail::mix64(h ^ (n + 0x94D049BB133111EBull));
  h = detail::mix64(h ^ (replication + 0x2545F4914F6CDD1Dull));
  return h;
}

inline std::string SeedPath::to_string() const {
  return std::to_string(master) + ":" + std::to_string(experiment) + ":" +
         std::to_string(n) + ":" + std::to_string(replication);
}

// Counter-based uniform generator (SplitMix64). The state advances by a fixed
// odd constant per draw and the output is a bijective scramble of the state,
// which makes the stream a pure function of (key, draw index).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : state_(key) {}
  explicit CounterRng(const SeedPath& path) : state_(path.stream_key()) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace bkq

#endif  // BKQ_RNG_HPP
