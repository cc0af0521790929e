#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace slowvol {

// Square matrix with exact 64-bit integer entries. Arithmetic that would
// overflow throws ArithmeticOverflow instead of wrapping.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n);
  IntMatrix(std::size_t n, std::vector<std::int64_t> row_major);
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntMatrix identity(std::size_t n);
  // Identity plus a single off-diagonal entry.
  static IntMatrix elementary(std::size_t n, std::size_t row, std::size_t col,
                              std::int64_t value = 1);

  std::size_t size() const noexcept { return n_; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const std::vector<std::int64_t>& entries() const noexcept { return a_; }

  bool is_identity() const;
  // Upper triangular with unit diagonal.
  bool is_unitriangular() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> a_;
};

// Exact determinant (fraction-free elimination). Throws ArithmeticOverflow if
// the result does not fit in 64 bits.
std::int64_t determinant(const IntMatrix& m);

// Inverse over the integers. Throws NonInvertibleGenerator unless det = +-1.
IntMatrix inverse(const IntMatrix& m);

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

struct IntMatrixHash {
  std::size_t operator()(const IntMatrix& m) const noexcept;
};

}  // namespace slowvol
