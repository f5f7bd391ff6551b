#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace corrdec::gf2 {

// Bit vector over F2, packed into 64-bit words.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v) {
    std::uint64_t mask = std::uint64_t(1) << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  // this ^= other. Sizes must match.
  void xor_with(const BitVec& other);

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::size_t popcount() const;

  // Index of the lowest set bit, or size() if none.
  std::size_t lowest_set() const;

  bool operator==(const BitVec& other) const {
    return n_ == other.n_ && words_ == other.words_;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Dense bit-packed matrix over F2, row major.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0) {}

  static BitMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t mask = std::uint64_t(1) << (c & 63);
    if (v)
      bits_[r * wpr_ + (c >> 6)] |= mask;
    else
      bits_[r * wpr_ + (c >> 6)] &= ~mask;
  }

  void swap_rows(std::size_t a, std::size_t b);
  // row a ^= row b
  void xor_row(std::size_t a, std::size_t b);

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Solves A x = b over F2. Returns a solution (free variables set to 0) or
// nullopt when the system is inconsistent. Throws std::invalid_argument on a
// dimension mismatch.
std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b);

std::size_t rank(BitMatrix a);

// Basis of the null space {x : A x = 0}.
std::vector<BitVec> kernel_basis(const BitMatrix& a);

}  // namespace corrdec::gf2
