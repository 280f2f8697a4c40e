#pragma once

#include <string>

#include "dstree/glue.hpp"

namespace dstree {

struct RenderStyle {
  double size = 800.0;        // canvas width and height in px
  double node_radius = 2.0;   // 0 hides nodes
  double stroke_width = 1.0;
  std::size_t palette_ranks = 8;  // decorations of the widest vertices get distinct colors
};

struct RenderStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

// Radial layout of the glued graph: one node per gluing class, one line per decoration
// edge, colored by the rank of the carrying vertex's outdegree. NonGraphDecoration for
// custom decorations.
std::string render_svg(const DecoratedTree& dt, const RenderStyle& style = {}, RenderStats* stats = nullptr);

}  // namespace dstree
