#pragma once

#include <cstdint>
#include <string_view>

#include "harmlab/graph.hpp"

namespace harmlab {

OrientedGraph cycle_graph(int n);
OrientedGraph complete_graph(int n);
OrientedGraph hypercube_graph(int dim);
OrientedGraph path_graph(int n);
// Open w x h grid, vertex (i,j) has id j*w + i.
OrientedGraph grid_graph(int w, int h);
// Periodic grid C_w x C_h, w,h >= 3 so that it is 4-regular and simple.
OrientedGraph torus_graph(int w, int h);
// Rooted tree where every internal vertex has degree d (the root has d children).
OrientedGraph regular_tree(int d, int depth);
// Uniform d-regular simple connected graph via the configuration model.
OrientedGraph random_regular_graph(int d, int n, std::uint64_t seed);
OrientedGraph disjoint_union(const OrientedGraph& a, const OrientedGraph& b);

// "cycle:n", "complete:n", "hypercube:d", "path:n", "grid:w,h", "torus:w,h",
// "tree:d,depth", "random-regular:d,n,seed"; anything else is read as a JSON file.
OrientedGraph parse_graph_spec(std::string_view spec);
bool is_builtin_graph_spec(std::string_view spec);

}  // namespace harmlab
