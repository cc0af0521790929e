#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "slowvol/errors.hpp"
#include "slowvol/group_growth.hpp"

namespace slowvol {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// n x n rational matrix stored row-major; doubles as a vector in Q^{n^2}.
struct RationalMatrix {
  std::size_t n = 0;
  std::vector<Rational> a;

  explicit RationalMatrix(std::size_t size) : n(size), a(size * size) {}

  Rational& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

RationalMatrix multiply(const RationalMatrix& x, const RationalMatrix& y) {
  RationalMatrix out(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < x.n; ++j) {
        if (y(k, j) != 0) out(i, j) += x(i, k) * y(k, j);
      }
    }
  }
  return out;
}

RationalMatrix bracket(const RationalMatrix& x, const RationalMatrix& y) {
  RationalMatrix xy = multiply(x, y);
  const RationalMatrix yx = multiply(y, x);
  for (std::size_t i = 0; i < xy.a.size(); ++i) xy.a[i] -= yx.a[i];
  return xy;
}

// log(I + N) = sum_{k=1}^{n-1} (-1)^{k+1} N^k / k; the series is finite
// because N is strictly upper triangular.
RationalMatrix matrix_log(const IntMatrix& g) {
  const std::size_t n = g.size();
  RationalMatrix nil(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) nil(r, c) = g(r, c) - (r == c ? 1 : 0);
  }
  RationalMatrix out(n);
  RationalMatrix power = nil;
  for (std::size_t k = 1; k < n; ++k) {
    const Rational coeff = Rational(k % 2 == 1 ? 1 : -1) / Rational(k);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += coeff * power.a[i];
    power = multiply(power, nil);
  }
  return out;
}

// Subspace of Q^d kept in reduced row echelon form.
class RationalSpan {
 public:
  // Adds v to the span; returns true when it increased the dimension.
  bool add(const RationalMatrix& v) {
    std::vector<Rational> w = v.a;
    for (std::size_t b = 0; b < rows_.size(); ++b) {
      const Rational& coeff = w[pivots_[b]];
      if (coeff == 0) continue;
      const Rational factor = coeff;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (rows_[b][i] != 0) w[i] -= factor * rows_[b][i];
      }
    }
    std::size_t pivot = 0;
    while (pivot < w.size() && w[pivot] == 0) ++pivot;
    if (pivot == w.size()) return false;
    const Rational scale = w[pivot];
    for (auto& x : w) x /= scale;
    // Keep the echelon form reduced so membership tests stay single-pass.
    for (auto& row : rows_) {
      if (row[pivot] == 0) continue;
      const Rational factor = row[pivot];
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 0) row[i] -= factor * w[i];
      }
    }
    rows_.push_back(std::move(w));
    pivots_.push_back(pivot);
    members_.push_back(v);
    return true;
  }

  std::size_t dimension() const { return rows_.size(); }
  // The original vectors that were accepted; they form a basis.
  const std::vector<RationalMatrix>& basis() const { return members_; }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<RationalMatrix> members_;
};

}  // namespace

LcsRanks malcev_lcs_ranks(const GeneratorSet& gens) {
  if (!gens.unitriangular()) {
    throw NotUnitriangular("Mal'cev ranks need upper unitriangular generators");
  }

  std::vector<RationalMatrix> logs;
  for (const auto& g : gens.generators()) logs.push_back(matrix_log(g));

  // Lie algebra generated by the logs: right-normed brackets [s, [s', ...]]
  // of generators span it, so bracket each newly found basis vector with
  // every generator until nothing new appears.
  RationalSpan algebra;
  std::vector<RationalMatrix> layer;
  for (const auto& x : logs) {
    if (algebra.add(x)) layer.push_back(x);
  }
  while (!layer.empty()) {
    std::vector<RationalMatrix> next;
    for (const auto& s : logs) {
      for (const auto& v : layer) {
        RationalMatrix b = bracket(s, v);
        if (algebra.add(b)) next.push_back(std::move(b));
      }
    }
    layer = std::move(next);
  }

  LcsRanks result;
  const std::vector<RationalMatrix> whole = algebra.basis();
  std::vector<RationalMatrix> term = whole;
  std::size_t dim = algebra.dimension();
  while (dim > 0) {
    RationalSpan deeper;
    for (const auto& x : whole) {
      for (const auto& y : term) deeper.add(bracket(x, y));
    }
    result.ranks.push_back(dim - deeper.dimension());
    dim = deeper.dimension();
    term = deeper.basis();
  }
  return result;
}

}  // namespace slowvol
