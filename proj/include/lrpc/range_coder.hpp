#pragma once
// Byte-oriented range coder with carry counting: 32-bit range, 64-bit low so
// the carry is the bit above the low 32, cache + pending run for deferred
// carry propagation.
//
// Two deviations from the textbook layout, both load-bearing:
//  * The first byte such a coder emits is always 0x00 (no carry can reach it
//    before the first renormalization), so the encoder drops it and the
//    decoder does not expect it.
//  * finish() materializes the bytes still pending in the cache and trims the
//    stream to exactly the count the decoder will consume (4 priming bytes
//    plus one per encode-side renormalization). The decoder checks that it
//    used every byte, which turns any truncation into a decode_error.

#include <cassert>
#include <cstdint>
#include <utility>

#include "lrpc/common.hpp"

namespace lrpc {

inline constexpr std::uint32_t kRangeTop = 1u << 24;
inline constexpr std::uint32_t kFreqTotal = 1u << 16;

class range_encoder {
 public:
  // cum_lo / freq partition [0, total); total must not exceed kFreqTotal.
  void encode(std::uint32_t cum_lo, std::uint32_t freq, std::uint32_t total) {
    const std::uint32_t r = range_ / total;
    low_ += static_cast<std::uint64_t>(cum_lo) * r;
    range_ = freq * r;
    while (range_ < kRangeTop) {
      shift_low();
      range_ <<= 8;
      ++shifts_;
    }
  }

  bytes finish() {
    for (int i = 0; i < 5; ++i) shift_low();
    // Whatever is still pending can no longer receive a carry; write it out
    // so the stream has its final length.
    while (pending_ > 1) {
      emit(cache_);
      cache_ = 0xFF;
      --pending_;
    }
    assert(buf_.size() == shifts_ + 4);
    buf_.resize(shifts_ + 4);
    return std::move(buf_);
  }

  std::size_t renorm_count() const { return shifts_; }

 private:
  void emit(std::uint8_t b) {
    if (first_) {  // the suppressed leading zero
      assert(b == 0);
      first_ = false;
      return;
    }
    buf_.push_back(b);
  }

  void shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
      std::uint8_t b = static_cast<std::uint8_t>(cache_ + carry);
      do {
        emit(b);
        b = static_cast<std::uint8_t>(0xFFu + carry);
      } while (--pending_ != 0);
      cache_ = static_cast<std::uint8_t>(low_ >> 24);
    }
    ++pending_;
    low_ = static_cast<std::uint32_t>(low_ << 8);
  }

  bytes buf_;
  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::size_t pending_ = 1;
  std::size_t shifts_ = 0;
  bool first_ = true;
};

class range_decoder {
 public:
  range_decoder(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | read();
  }

  // Returns a value f in [0, total); the caller finds the symbol whose
  // cumulative interval contains f and reports it back via decode_update.
  std::uint32_t decode_freq(std::uint32_t total) {
    step_ = range_ / total;
    const std::uint32_t f = code_ / step_;
    if (f >= total) throw decode_error("corrupt entropy payload");
    return f;
  }

  void decode_update(std::uint32_t cum_lo, std::uint32_t freq) {
    code_ -= cum_lo * step_;
    range_ = freq * step_;
    while (range_ < kRangeTop) {
      code_ = (code_ << 8) | read();
      range_ <<= 8;
    }
  }

  std::size_t consumed() const { return pos_; }

 private:
  std::uint8_t read() {
    if (pos_ >= size_) throw decode_error("entropy payload truncated");
    return data_[pos_++];
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t step_ = 0;
};

}  // namespace lrpc
