#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace timsim {

/// Deterministic random source for the stochastic engine.
///
/// Built on std::mt19937_64, whose output sequence is pinned by the C++
/// standard, with hand-rolled exact integer distributions on top (the
/// std::*_distribution adaptors are implementation-defined and would break
/// byte-for-byte reproducibility across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Exact Binomial(n, p) sample via CDF inversion.
  ///
  /// One uniform draw walks the probability mass function upward from k = 0.
  /// For p > 1/2 the mirrored variable n - B(n, 1-p) is drawn so the walk is
  /// short; for n > 1024 the draw is split recursively using
  /// B(n, p) = B(floor(n/2), p) + B(n - floor(n/2), p), which keeps the
  /// starting mass (1-p)^n well above the underflow threshold.
  std::int64_t binomial(std::int64_t n, double p);

 private:
  std::mt19937_64 gen_;
};

/// Multinomial partition of `n` trials over the categories `prob` (whose sum
/// must be <= 1; the remainder is the implicit "stay" category, not written).
/// Sampled as a chain of conditional binomials.  `out` receives one count per
/// entry of `prob`.
void multinomial(Rng& rng, std::int64_t n, std::span<const double> prob,
                 std::span<std::int64_t> out);

}  // namespace timsim
