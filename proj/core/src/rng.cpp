#include "timsim/rng.hpp"

#include <cmath>

#include "timsim/errors.hpp"

namespace timsim {

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  if (n > 1024) {
    const std::int64_t half = n / 2;
    return binomial(half, p) + binomial(n - half, p);
  }
  // With p <= 1/2 and n <= 1024, pmf(0) = (1-p)^n >= 2^-1024: no underflow.
  const double q = 1.0 - p;
  const double ratio = p / q;
  double pmf = std::pow(q, static_cast<double>(n));
  double cdf = pmf;
  const double u = uniform01();
  std::int64_t k = 0;
  while (u >= cdf && k < n) {
    ++k;
    pmf *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

void multinomial(Rng& rng, std::int64_t n, std::span<const double> prob,
                 std::span<std::int64_t> out) {
  if (out.size() != prob.size())
    throw NumericError("multinomial: output size mismatch");
  std::int64_t remaining = n;
  double used = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (remaining <= 0) {
      out[i] = 0;
      continue;
    }
    const double rest = 1.0 - used;
    double cond = rest > 0.0 ? prob[i] / rest : 1.0;
    if (cond > 1.0) cond = 1.0;
    out[i] = rng.binomial(remaining, cond);
    remaining -= out[i];
    used += prob[i];
  }
}

}  // namespace timsim
