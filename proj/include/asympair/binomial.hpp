#pragma once

#include <cstdint>

namespace asympair {

/// Exact C(n, k). Throws OverflowError when the result exceeds 64 bits and
/// std::invalid_argument when k > n.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) as a double; exact while the integer value fits in 53 bits.
double binomial_real(std::uint64_t n, std::uint64_t k);

}  // namespace asympair
