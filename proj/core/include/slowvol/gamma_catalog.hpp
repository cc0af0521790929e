#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace slowvol {

// Natural number or infinity; addition absorbs infinity.
struct ExtendedNat {
  std::uint64_t value = 0;
  bool infinite = false;

  static ExtendedNat finite(std::uint64_t v) { return {v, false}; }
  static ExtendedNat infinity() { return {0, true}; }

  friend bool operator==(const ExtendedNat&, const ExtendedNat&) = default;
};

ExtendedNat operator+(ExtendedNat a, ExtendedNat b);
// a - 1 for a >= 1; infinity stays infinity.
ExtendedNat predecessor(ExtendedNat a);
std::string to_string(ExtendedNat a);
std::ostream& operator<<(std::ostream& out, ExtendedNat a);

enum class AtomKind {
  circle,
  sphere,
  real_projective,
  complex_projective,
  quaternionic_projective,
  cayley_plane,
  torus,
  klein_bottle,
  orientable_surface,
  nil_circle_bundle,
  s2xr_quotient,
  t3_finite_quotient,
  s3_quotient,
  // Placeholder for manifolds known to have fast loop space homology.
  fast,
};

// Immutable expression tree over catalog atoms.
class ManifoldDescriptor {
 public:
  enum class Node { atom, product, finite_cover };
  using Ptr = std::shared_ptr<const ManifoldDescriptor>;

  // Validates the parameters; throws MalformedDescriptor.
  static Ptr atom(AtomKind kind, std::vector<long long> params = {});
  static Ptr product(Ptr left, Ptr right);
  static Ptr finite_cover(Ptr child);

  Node node() const { return node_; }
  AtomKind atom_kind() const { return kind_; }
  const std::vector<long long>& params() const { return params_; }
  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }
  const Ptr& child() const { return left_; }

  int dimension() const;
  // Canonical expression, parseable by parse_descriptor.
  std::string to_string() const;

 private:
  ManifoldDescriptor() = default;

  Node node_ = Node::atom;
  AtomKind kind_ = AtomKind::circle;
  std::vector<long long> params_;
  Ptr left_;
  Ptr right_;
};

// Grammar:
//   expr  := term ('x' term)*
//   term  := 'cover:' term | '(' expr ')' | atom
//   atom  := NAME ['(' INT (',' INT)* ')']
// with NAME one of S1, Circle, S, RP, CP, HP, OP2, T, K, Sigma, Nil, S2xR,
// T3Q, S3Q, Fast. Errors name the offending position and the expected tokens.
ManifoldDescriptor::Ptr parse_descriptor(std::string_view text);

struct GammaResult {
  ExtendedNat gamma_pi1;
  ExtendedNat gamma_loop;
  ExtendedNat gamma_total;
  ExtendedNat theorem_bound;
  int dimension = 0;
  bool slow = false;
};

// Throws InternalError if a slow result breaks gamma <= d(d-1)/2 + 1.
GammaResult gamma(const ManifoldDescriptor& descriptor);
GammaResult gamma(std::string_view descriptor);

ExtendedNat theorem_bound(const ManifoldDescriptor& descriptor);

// d(d-1)/2 + 1.
std::uint64_t dimension_bound(int dimension);

// True iff the descriptor is not slow or satisfies the dimension bound.
bool cross_check_dimension_bound(const ManifoldDescriptor& descriptor);

// Circle, or an atom whose cohomology ring is generated by one element
// (spheres, projective spaces, the Cayley plane, spherical space forms),
// possibly under finite-cover markers.
bool is_single_generator(const ManifoldDescriptor& descriptor);

// One descriptor per atom family with small parameters, for sweeps.
std::vector<ManifoldDescriptor::Ptr> catalog_atoms();

}  // namespace slowvol
