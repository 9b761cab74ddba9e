#pragma once

#include <string>
#include <vector>

#include "gerbeloop/cell_complex.hpp"
#include "gerbeloop/groups.hpp"

namespace gerbeloop {

/* Edge path in the 1-skeleton: signed 1-based edge indices, same convention
 * as face words. The explicit start vertex keeps empty paths meaningful. */
struct EdgePath {
    std::vector<int> word;
    int start_vertex = 0;

    bool empty() const { return word.empty(); }
    int steps() const { return static_cast<int>(word.size()); }
};

EdgePath make_path(const Complex2& C, std::vector<int> word);
int path_end(const Complex2& C, const EdgePath& p);
bool path_closed(const Complex2& C, const EdgePath& p);
void validate_path(const Complex2& C, const EdgePath& p);
EdgePath reversed_path(const Complex2& C, const EdgePath& p);
/* Concatenation q after p (p first); start vertices must match up. */
EdgePath concat_path(const Complex2& C, const EdgePath& p, const EdgePath& q);
/* The composite loop of two paths sharing both endpoints: g1 followed by g2
 * reversed. */
EdgePath composite_loop(const Complex2& C, const EdgePath& g1, const EdgePath& g2);

/* Three paths with common start and common end. */
struct PathTriple {
    EdgePath gamma1, gamma2, gamma3;
};

void validate_triple(const Complex2& C, const PathTriple& t);

/* Principal bundle over a 2-complex in gauge coordinates. Each edge carries a
 * sampled transport path in G from the identity to the edge's holonomy; fibers
 * over vertices are copies of G with transport acting by left multiplication,
 * the right action of G on the total space by right multiplication. */
struct LatticeBundle {
    std::string name;
    Complex2 base;
    GroupPtr G;
    std::vector<SampledPath> edge_transport;

    void validate() const;
    const SampledPath& edge_refinement(int e) const { return edge_transport[e]; }
    const Mat& edge_holonomy(int e) const { return edge_transport[e].points.back(); }
    Mat holonomy(const EdgePath& p) const;
    Mat face_holonomy(int f) const;
    Mat face_curvature(int f) const;
};

LatticeBundle make_flat_bundle(const Complex2& C, GroupPtr G, int samples_per_edge = 2);
LatticeBundle make_bundle(const Complex2& C, GroupPtr G, const std::vector<Mat>& edge_elems,
                          int samples_per_edge = 17);

LatticeBundle bundle_so2_torus_flat();
LatticeBundle bundle_r2_torus_flat();
/* Two trivial caps glued along the equator by a degree-k rotation loop. */
LatticeBundle bundle_so3_sphere_clutch(int k, int n = 8);
LatticeBundle builtin_bundle(const std::string& name);

/* New gauge coordinates from per-vertex elements u: edge holonomies become
 * u(head) g u(tail)^-1, with the interior transport reshaped by a smoothly
 * interpolated gauge along each edge. */
LatticeBundle gauge_transform(const LatticeBundle& B, const std::vector<Mat>& u);

/* The same bundle with every edge refinement subdivided once by geodesic
 * midpoints, doubling the quadrature resolution of the transport data. */
LatticeBundle refine_bundle(const LatticeBundle& B);

/* Closed lift of an edge loop into the total space. fiber_points[k] is the
 * gauge coordinate over the k-th visited vertex (last equals first exactly);
 * segment_paths[k] samples the lifted path over step k of the word, in the
 * same gauge coordinates, with the same sample count as the underlying edge
 * refinement. */
struct LoopLift {
    EdgePath base_loop;
    std::vector<Mat> fiber_points;
    std::vector<SampledPath> segment_paths;
};

void validate_loop_lift(const LatticeBundle& B, const LoopLift& L);

/* Lift the loop edge by edge horizontally from start_frame, then close the
 * lift by a fiber rotation from the holonomy defect back to the start,
 * distributed into the last segment with sitting instants. connected_group
 * asserts that defects can be joined to the identity inside G. */
LoopLift horizontal_loop_lift(const LatticeBundle& B, const EdgePath& loop,
                              bool connected_group, const Mat& start_frame);
LoopLift horizontal_loop_lift(const LatticeBundle& B, const EdgePath& loop,
                              bool connected_group = true);

/* The same lift with a closed fiber loop (a loop in G based at the identity)
 * inserted along segment `step`, traversed fiberwise while the segment runs. */
LoopLift fiber_inserted(const LatticeBundle& B, const LoopLift& L, int step,
                        const SampledPath& loop_in_G);

/* Sampled path in the total space over a path in the 1-skeleton, possibly
 * with a trailing pure-fiber segment. frames[k] is the gauge coordinate of
 * the point; rho[k] the accumulated base transport from the start, shared by
 * every lift over the same base path. */
struct BundlePath {
    int start_vertex = 0;
    EdgePath base;
    std::vector<Mat> rho;
    std::vector<Mat> frames;
    /* edge_sample_begin[j] is the sample where base step j starts; one extra
     * entry marks where the fiber tail (if any) begins. */
    std::vector<int> edge_sample_begin;
    bool closed = false;

    int samples() const { return static_cast<int>(frames.size()); }
};

std::vector<Mat> rho_sequence(const LatticeBundle& B, const EdgePath& p,
                              std::vector<int>* edge_sample_begin = nullptr);

BundlePath lift_horizontal(const LatticeBundle& B, const EdgePath& p, const Mat& start_frame);

/* Loop staying inside the fiber over one vertex. */
BundlePath fiber_loop(const LatticeBundle& B, int vertex, const SampledPath& frames);

BundlePath to_bundle_path(const LatticeBundle& B, const LoopLift& L);

/* Contiguous sample range [a, b] of a path, transports re-based so the slice
 * starts at the identity; reversed if b < a. */
BundlePath subpath(const LatticeBundle& B, const BundlePath& p, int a, int b);

/* The same total-space path in the coordinates of gauge_transform(B, u). */
BundlePath gauge_transform_path(const LatticeBundle& B, const std::vector<Mat>& u,
                                const BundlePath& path);

} // namespace gerbeloop
