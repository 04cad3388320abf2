#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace latentlens {

/// Deterministic pseudo-random generator used by every randomized operation.
///
/// Algorithm: xoshiro256** (Blackman & Vigna), state seeded by four
/// successive outputs of SplitMix64 started at the user seed. Derived
/// quantities are computed here rather than through <random> distributions,
/// whose output is implementation-defined:
///
///   uniform01()   (next() >> 11) * 2^-53, in [0, 1)
///   bounded(n)    Lemire's nearly-divisionless method with rejection, in [0, n)
///   normal()      Marsaglia polar method on uniform01() mapped to (-1, 1)
///   shuffle()     Fisher-Yates from the back, swap index bounded(i + 1)
///
/// Integer outputs are bit-identical on every platform. normal() depends on
/// std::log and std::sqrt; sqrt is correctly rounded by IEEE-754, log may
/// differ by one ulp between C libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  /// Generator for the `index`-th independent stream under `seed`. Used to
  /// give each record/fold/trial its own stream so work can be split across
  /// threads without changing results.
  static Rng derive(std::uint64_t seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  double uniform01() noexcept;
  std::uint64_t bounded(std::uint64_t n) noexcept;
  double normal() noexcept;

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(bounded(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// One SplitMix64 step; exposed for seed mixing.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace latentlens
