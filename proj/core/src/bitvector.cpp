#include "dmdgp/bitvector.hpp"

#include <bit>

#include <fmt/format.h>

#include "dmdgp/error.hpp"

namespace dmdgp {

BitVector::BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set(i, true);
    } else if (bits[i] != '0') {
      throw Error(ErrorCode::InvalidArgument, fmt::format("not a bit string: '{}'", bits));
    }
  }
  return out;
}

void BitVector::set(std::size_t pos, bool value) {
  const auto mask = std::uint64_t{1} << (pos % 64);
  if (value) {
    words_[pos / 64] |= mask;
  } else {
    words_[pos / 64] &= ~mask;
  }
}

bool BitVector::none() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::size_t BitVector::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("xor of bit vectors of length {} and {}", size_, other.size_));
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::strong_ordering BitVector::operator<=>(const BitVector& other) const {
  const auto common = std::min(size_, other.size_);
  for (std::size_t i = 0; i < common; ++i) {
    const bool a = (*this)[i];
    const bool b = other[i];
    if (a != b) return a ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return size_ <=> other.size_;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::size_t BitVector::hash() const {
  std::size_t h = std::hash<std::size_t>{}(size_);
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace dmdgp
