#pragma once
// Shared basics: byte buffer alias, error types, portable RNG mapping.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace lrpc {

using bytes = std::vector<std::uint8_t>;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed container bytes: bad magic, bad version, CRC mismatch, truncation.
class parse_error : public error {
 public:
  using error::error;
};

// Entropy payload that cannot be decoded (truncated or corrupt).
class decode_error : public error {
 public:
  using error::error;
};

// Maps one 64-bit draw to [0,1) with 53-bit resolution.
// std::uniform_real_distribution is not byte-reproducible across standard
// libraries; mt19937_64 plus this mapping is.
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace lrpc
