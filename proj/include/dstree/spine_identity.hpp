#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dstree/plane_tree.hpp"
#include "dstree/rational.hpp"

namespace dstree {

struct MarkAtom {
  double value = 0.0;
  Rational prob = 1;
};
// marks[d] is the finite mark law for vertices of outdegree d; the last entry serves
// all larger degrees; empty means every mark is 0.
using MarkTable = std::vector<std::vector<MarkAtom>>;

struct LineEntry {
  std::uint32_t degree;
  double mark;
};
// Property of the marked ancestral line ((d(root), x_root), ..., (d(v), x_v)).
using LinePredicate = std::function<bool(std::span<const LineEntry>)>;
// Nonnegative test function F(t, u, marks).
using SpineFunctional = std::function<Rational(const PlaneTree&, Vertex, std::span<const double>)>;

struct SpineIdentityReport {
  Rational lhs;
  Rational rhs;
  Rational discrepancy;
  std::uint64_t trees_enumerated = 0;
  std::uint64_t spine_configurations = 0;
  bool exact() const { return discrepancy == 0; }
};

// Both sides of the marked spine decomposition, with F multiplied by 1{|t| <= n_max}:
//   E[F(T,U) 1{some vertex has the property}]  (exhaustive over marked trees)
//   sum_k E[F(T*_k,U*_k) 1{A(U*_k) in P} / #{v : A(v) in P}]  (exhaustive over Kesten cuts)
// p[d] = mu(d), mean 1, finite support; n_max <= 9.
SpineIdentityReport verify_spine_identity(const std::vector<Rational>& p, const LinePredicate& property,
                                          std::uint32_t n_max, const MarkTable& marks = {},
                                          const SpineFunctional& f = {});

}  // namespace dstree
