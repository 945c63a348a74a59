#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dmdgp {

/// Fixed-length vector over F_2. Position 0 corresponds to tree level 1, so
/// to_string() reads like a root-to-leaf label sequence. Ordering is
/// lexicographic in that reading.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);

  /// Parses a string of '0'/'1'; throws InvalidArgument on anything else.
  static BitVector from_string(std::string_view bits);

  std::size_t size() const { return size_; }

  bool operator[](std::size_t pos) const { return (words_[pos / 64] >> (pos % 64)) & 1U; }
  void set(std::size_t pos, bool value);
  void flip(std::size_t pos) { words_[pos / 64] ^= std::uint64_t{1} << (pos % 64); }

  bool none() const;
  std::size_t count() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool operator==(const BitVector& other) const = default;
  std::strong_ordering operator<=>(const BitVector& other) const;

  std::string to_string() const;
  std::size_t hash() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace dmdgp

template <>
struct std::hash<dmdgp::BitVector> {
  std::size_t operator()(const dmdgp::BitVector& b) const noexcept { return b.hash(); }
};
