#include "asympair/binomial.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "asympair/errors.hpp"

namespace asympair {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("binomial: k > n");
  if (k > n - k) k = n - k;
  // C(n-k+i, i) = C(n-k+i-1, i-1) * (n-k+i) / i stays integral at every step.
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw OverflowError("binomial C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

double binomial_real(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("binomial: k > n");
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return result;
}

}  // namespace asympair
