// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/bits.h"

namespace p4mc {

BitString BitString::FromBytes(std::span<const uint8_t> bytes) {
  BitString out;
  out.bytes_.assign(bytes.begin(), bytes.end());
  out.bits_ = bytes.size() * 8;
  return out;
}

uint64_t BitString::Read(size_t offset, uint32_t width) const {
  uint64_t value = 0;
  size_t i = offset;
  const size_t end = offset + width;
  // Leading partial byte, whole bytes, trailing partial byte.
  while (i < end && (i & 7) != 0) value = (value << 1) | Bit(i++);
  while (i + 8 <= end) {
    value = (value << 8) | bytes_[i >> 3];
    i += 8;
  }
  while (i < end) value = (value << 1) | Bit(i++);
  return value;
}

void BitString::PushBit(bool bit) {
  if ((bits_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<uint8_t>(0x80 >> (bits_ & 7));
  ++bits_;
}

void BitString::Append(uint64_t value, uint32_t width) {
  if ((bits_ & 7) == 0) {
    while (width >= 8) {
      width -= 8;
      bytes_.push_back(static_cast<uint8_t>(value >> width));
      bits_ += 8;
    }
  }
  for (uint32_t i = width; i-- > 0;) PushBit((value >> i) & 1);
}

void BitString::AppendRange(const BitString& other, size_t offset,
                            size_t length) {
  size_t i = offset;
  const size_t end = offset + length;
  if ((bits_ & 7) == 0 && (i & 7) == 0) {
    while (i + 8 <= end) {
      bytes_.push_back(other.bytes_[i >> 3]);
      bits_ += 8;
      i += 8;
    }
  }
  for (; i < end; ++i) PushBit(other.Bit(i));
}

std::vector<uint8_t> BitString::ToBytes() const { return bytes_; }

}  // namespace p4mc
