#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace xplain {

// Seeded generator with platform-independent output. std::mt19937_64 and
// std::seed_seq are fully specified by the standard; the distribution helpers
// below are implemented here because the std:: distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  // Independent stream keyed by (seed, ids...). Streams for different id
  // tuples do not depend on the order in which they are created.
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_ids);

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace xplain
