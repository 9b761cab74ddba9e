#pragma once

#include <string>
#include <vector>

#include "gerbeloop/lattice_bundle.hpp"

namespace gerbeloop {

/* Equal-length paths from the basepoint to one far vertex. Pairwise
 * composites are loops of even length whose sample midpoint is the far
 * vertex; beta[i][j] (i < j) is the registry index of composite i-then-j. */
struct PathFan {
    std::vector<EdgePath> paths;
    std::vector<std::vector<int>> beta;
};

struct RegistryTriple {
    PathTriple paths;
    int b12 = -1, b23 = -1, b13 = -1;
    int midpoint_steps = 0;
};

/* Catalog of based loops feeding the loop-space constructions: spanning-tree
 * lassos, face boundary loops conjugated to the basepoint, and fan
 * composites. Loop 0 is the constant loop. */
struct LoopRegistry {
    Complex2 base;

    std::vector<int> parent_edge;   // signed edge into v from its tree parent, 0 at the root
    std::vector<EdgePath> tree_paths;
    std::vector<bool> edge_in_tree;

    std::vector<EdgePath> loops;
    std::vector<std::string> labels;
    std::vector<int> lasso_edges;   // non-tree edges in registration order
    std::vector<int> lasso_loop;    // loop index per lasso
    std::vector<int> face_loop;     // loop index per face
    std::vector<int> face_insert_pos; // step where the face word starts inside its loop
    std::vector<PathFan> fans;

    int n_loops() const { return static_cast<int>(loops.size()); }
    int n_lassos() const { return static_cast<int>(lasso_edges.size()); }
};

LoopRegistry make_loop_registry(const Complex2& C, int n_fans = 2, unsigned seed = 1,
                                int fan_size = 3);

/* Every ordered i<j<k selection inside every fan. */
std::vector<RegistryTriple> registry_triples(const LoopRegistry& R);

/* Index of the registered loop with this exact word, or -1. */
int find_loop(const LoopRegistry& R, const EdgePath& loop);

} // namespace gerbeloop
