#include "slowvol/int_matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <ostream>
#include <string>

#include "slowvol/errors.hpp"

namespace slowvol {

namespace mp = boost::multiprecision;

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ArithmeticOverflow("matrix entry overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ArithmeticOverflow("matrix entry overflow");
  return out;
}

std::int64_t narrow(const mp::cpp_int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw ArithmeticOverflow("value does not fit in 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace

IntMatrix::IntMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}

IntMatrix::IntMatrix(std::size_t n, std::vector<std::int64_t> row_major)
    : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw InvalidArgument("matrix entry count does not match size");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : n_(rows.size()) {
  a_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw InvalidArgument("matrix must be square");
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::elementary(std::size_t n, std::size_t row, std::size_t col,
                                std::int64_t value) {
  if (row == col || row >= n || col >= n) throw InvalidArgument("bad elementary matrix index");
  IntMatrix m = identity(n);
  m(row, col) = value;
  return m;
}

bool IntMatrix::is_identity() const { return *this == identity(n_); }

bool IntMatrix::is_unitriangular() const {
  for (std::size_t r = 0; r < n_; ++r) {
    if ((*this)(r, r) != 1) return false;
    for (std::size_t c = 0; c < r; ++c) {
      if ((*this)(r, c) != 0) return false;
    }
  }
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.n_ != b.n_) throw InvalidArgument("matrix size mismatch");
  const std::size_t n = a.n_;
  IntMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t aik = a.a_[i * n + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t bkj = b.a_[k * n + j];
        if (bkj == 0) continue;
        out.a_[i * n + j] = checked_add(out.a_[i * n + j], checked_mul(aik, bkj));
      }
    }
  }
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.n_ != b.n_) throw InvalidArgument("matrix size mismatch");
  IntMatrix out(a.n_);
  for (std::size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = checked_add(a.a_[i], b.a_[i]);
  return out;
}

std::int64_t determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  // Bareiss elimination keeps every intermediate value an integer.
  std::vector<mp::cpp_int> a(m.entries().begin(), m.entries().end());
  auto at = [&](std::size_t r, std::size_t c) -> mp::cpp_int& { return a[r * n + c]; };
  mp::cpp_int previous = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && at(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(swap, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / previous;
      }
    }
    previous = at(k, k);
  }
  return narrow(sign * at(n - 1, n - 1));
}

IntMatrix inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  const std::int64_t det = determinant(m);
  if (det != 1 && det != -1) {
    throw NonInvertibleGenerator("determinant " + std::to_string(det) + " is not +-1");
  }
  // Gauss-Jordan over the rationals; the result is integral because det = +-1.
  std::vector<mp::cpp_rational> a(n * 2 * n);
  auto at = [&](std::size_t r, std::size_t c) -> mp::cpp_rational& { return a[r * 2 * n + c]; };
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) at(r, c) = m(r, c);
    at(r, n + r) = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (at(pivot, col) == 0) ++pivot;
    if (pivot != col) {
      for (std::size_t c = 0; c < 2 * n; ++c) std::swap(at(pivot, c), at(col, c));
    }
    const mp::cpp_rational scale = at(col, col);
    for (std::size_t c = 0; c < 2 * n; ++c) at(col, c) /= scale;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || at(r, col) == 0) continue;
      const mp::cpp_rational factor = at(r, col);
      for (std::size_t c = 0; c < 2 * n; ++c) at(r, c) -= factor * at(col, c);
    }
  }
  IntMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const mp::cpp_rational& v = at(r, n + c);
      if (mp::denominator(v) != 1) throw InternalError("inverse of unimodular matrix not integral");
      out(r, c) = narrow(mp::numerator(v));
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (c) os << ' ';
      os << m(r, c);
    }
    os << '\n';
  }
  return os;
}

std::size_t IntMatrixHash::operator()(const IntMatrix& m) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (const std::int64_t v : m.entries()) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace slowvol
