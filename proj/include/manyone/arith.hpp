#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace manyone {

// Raised when an input is malformed (bad field spec, bad coefficient string, ...).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a request exceeds the exhaustive-scan limits.
class ScaleError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised when a theorem's hypothesis does not hold for the given instance.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr std::uint64_t kMaxFieldOrder = 1u << 16;

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);  // distinct, ascending
std::vector<std::uint64_t> divisors(std::uint64_t n);       // ascending

inline std::uint64_t gcd_abs(std::int64_t a, std::int64_t b) {
  return std::gcd(static_cast<std::uint64_t>(a < 0 ? -a : a),
                  static_cast<std::uint64_t>(b < 0 ? -b : b));
}

// Non-negative residue of a mod n, n > 0.
inline std::uint64_t mod_floor(std::int64_t a, std::uint64_t n) {
  auto r = a % static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(n) : r);
}

// Checked integer power; throws on overflow of 64 bits.
std::uint64_t ipow(std::uint64_t base, unsigned exp);

}  // namespace manyone
