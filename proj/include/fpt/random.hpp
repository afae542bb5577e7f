#pragma once

// Counter-based reproducible randomness. Every variate is a pure function of
// (seed, derivation path, index), so lazily explored structures see the same
// values no matter in which order their parts are realized, and replicas can
// run in parallel without shared state.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace fpt {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood; Vigna's constants).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Absorb one 64-bit word into a running state.
inline constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t word) {
  return mix64(state + kGolden + word * 0xD6E8FEB86659FD93ULL);
}

}  // namespace detail

class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed)
      : state_(detail::mix64(seed + detail::kGolden)) {}

  // Derived stream for one path element; chains for longer paths.
  [[nodiscard]] constexpr RandomStream child(std::uint64_t branch) const {
    return RandomStream(FromState{}, detail::absorb(state_, branch));
  }

  [[nodiscard]] RandomStream descend(std::span<const std::uint32_t> path) const {
    RandomStream s = *this;
    for (std::uint32_t p : path) s = s.child(p);
    return s;
  }

  [[nodiscard]] constexpr std::uint64_t word_at(std::uint64_t index) const {
    return detail::mix64(state_ + (index + 1) * detail::kGolden);
  }

  // Uniform variate in the open interval (0,1).
  [[nodiscard]] double uniform_at(std::uint64_t index) const {
    return (static_cast<double>(word_at(index) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unit-mean exponential variate.
  [[nodiscard]] double exponential_at(std::uint64_t index) const {
    return -std::log1p(-uniform_at(index));
  }

  [[nodiscard]] constexpr std::uint64_t state() const { return state_; }

  static constexpr RandomStream from_state(std::uint64_t state) {
    return RandomStream(FromState{}, state);
  }

 private:
  struct FromState {};
  constexpr RandomStream(FromState, std::uint64_t state) : state_(state) {}
  std::uint64_t state_;
};

// Deterministic uniform in (0,1) keyed by (stream, address, index).
inline double derive_value(const RandomStream& stream,
                           std::span<const std::uint32_t> address,
                           std::uint64_t index) {
  return stream.descend(address).uniform_at(index);
}

}  // namespace fpt
