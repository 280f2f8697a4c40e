#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dstree/offspring.hpp"
#include "dstree/plane_tree.hpp"
#include "dstree/random.hpp"

namespace dstree {

struct Conditioning {
  enum class Mode { Vertices, Leaves };
  Mode mode = Mode::Vertices;
  std::uint64_t n = 1;

  static Conditioning vertices(std::uint64_t n) { return {Mode::Vertices, n}; }
  static Conditioning leaves(std::uint64_t n) { return {Mode::Leaves, n}; }
};

struct ConditionedBgwSpec {
  OffspringLaw law;
  Conditioning condition;
  std::uint64_t max_retries = 100'000'000;
};

bool conditioning_feasible(const OffspringLaw& law, const Conditioning& c);

// Exact sample of BGW(law) conditioned on the vertex or leaf count.
PlaneTree sample_conditioned_bgw(const ConditionedBgwSpec& spec, Rng& rng);

// Unconditioned BGW tree; SizeLimit if it grows beyond max_vertices.
PlaneTree sample_bgw(const OffspringLaw& law, std::uint64_t max_vertices, Rng& rng);

// Rotates an increment sequence with total -1 to the unique valid Lukasiewicz
// ordering (cycle lemma) and returns the outdegrees in that order.
std::vector<std::uint32_t> cycle_lemma_rotate(std::vector<std::uint32_t> degrees);

using MarkLaw = std::function<double(std::uint64_t degree, Rng& rng)>;

struct MarkedSpineTree {
  PlaneTree tree;
  std::vector<Vertex> spine;  // U*_0 = root, ..., U*_k
  std::vector<double> marks;  // per vertex
};

// Kesten tree cut at height k: size-biased spine degrees, uniform spine child,
// independent BGW bushes, BGW top tree at U*_k.
MarkedSpineTree sample_kesten_cut(const OffspringLaw& law, std::uint32_t k, const MarkLaw& marks, Rng& rng,
                                  std::uint64_t max_vertices = 10'000'000);

}  // namespace dstree
