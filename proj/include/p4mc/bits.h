// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P4MC_BITS_H_
#define P4MC_BITS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace p4mc {

// A big-endian (network order) bit sequence. Bit 0 is the most significant
// bit of the first byte.
class BitString {
 public:
  BitString() = default;
  static BitString FromBytes(std::span<const uint8_t> bytes);

  size_t size() const { return bits_; }

  // Reads `width` (<= 64) bits starting at `offset`; offset + width <= size().
  uint64_t Read(size_t offset, uint32_t width) const;

  void Append(uint64_t value, uint32_t width);
  void AppendRange(const BitString& other, size_t offset, size_t length);

  // Zero-pads the final byte when size() is not a multiple of 8.
  std::vector<uint8_t> ToBytes() const;

  bool operator==(const BitString& other) const = default;

 private:
  bool Bit(size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1; }
  void PushBit(bool bit);

  std::vector<uint8_t> bytes_;
  size_t bits_ = 0;
};

}  // namespace p4mc

#endif  // P4MC_BITS_H_
