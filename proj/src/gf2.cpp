#include "corrdec/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace corrdec::gf2 {

void BitVec::xor_with(const BitVec& other) {
  if (n_ != other.n_) throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

std::size_t BitVec::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t BitVec::lowest_set() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) {
      std::size_t b = i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
      return b < n_ ? b : n_;
    }
  }
  return n_;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t w = 0; w < wpr_; ++w) std::swap(bits_[a * wpr_ + w], bits_[b * wpr_ + w]);
}

void BitMatrix::xor_row(std::size_t a, std::size_t b) {
  for (std::size_t w = 0; w < wpr_; ++w) bits_[a * wpr_ + w] ^= bits_[b * wpr_ + w];
}

namespace {

struct Echelon {
  BitMatrix m;
  BitVec rhs;            // carried along when solving
  bool with_rhs = false;
  std::vector<std::size_t> pivot_col;  // per pivot row
};

Echelon eliminate(BitMatrix a, const BitVec* b) {
  Echelon e;
  e.with_rhs = b != nullptr;
  if (b) e.rhs = *b;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && !a.get(pivot, col)) ++pivot;
    if (pivot == a.rows()) continue;
    a.swap_rows(row, pivot);
    if (e.with_rhs && row != pivot) {
      bool t = e.rhs.get(row);
      e.rhs.set(row, e.rhs.get(pivot));
      e.rhs.set(pivot, t);
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r != row && a.get(r, col)) {
        a.xor_row(r, row);
        if (e.with_rhs && e.rhs.get(row)) e.rhs.flip(r);
      }
    }
    e.pivot_col.push_back(col);
    ++row;
  }
  e.m = std::move(a);
  return e;
}

}  // namespace

std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("gf2::solve: rhs length != rows");
  Echelon e = eliminate(a, &b);
  std::size_t nrank = e.pivot_col.size();
  // Any nonzero rhs entry below the pivot rows marks an inconsistent system.
  for (std::size_t r = nrank; r < a.rows(); ++r)
    if (e.rhs.get(r)) return std::nullopt;
  BitVec x(a.cols());
  for (std::size_t r = 0; r < nrank; ++r)
    if (e.rhs.get(r)) x.set(e.pivot_col[r], true);
  return x;
}

std::size_t rank(BitMatrix a) { return eliminate(std::move(a), nullptr).pivot_col.size(); }

std::vector<BitVec> kernel_basis(const BitMatrix& a) {
  Echelon e = eliminate(a, nullptr);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivot_col) is_pivot[c] = true;
  std::vector<BitVec> basis;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    BitVec v(a.cols());
    v.set(c, true);
    for (std::size_t r = 0; r < e.pivot_col.size(); ++r)
      if (e.m.get(r, c)) v.set(e.pivot_col[r], true);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace corrdec::gf2
