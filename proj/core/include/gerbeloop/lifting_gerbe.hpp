#pragma once

#include <optional>
#include <vector>

#include "gerbeloop/extension.hpp"
#include "gerbeloop/lattice_bundle.hpp"

namespace gerbeloop {

/* A principal bundle together with a central extension of its structure group
 * and a reduction of the extension data. vertex_base keeps the reduction's
 * evaluation frames fixed as geometric data when the bundle is regauged; an
 * empty table means canonical frames everywhere. */
struct LiftingGerbe {
    LatticeBundle bundle;
    CentralExtension ext;
    Reduction reduction;
    std::vector<Mat> vertex_base;

    void validate() const;
    Mat frame_at(int vertex, const Mat& coord) const;
    AlgebraElement reduce(int vertex, const Mat& coord, const Mat& X) const;
};

LiftingGerbe make_gerbe(LatticeBundle bundle, CentralExtension ext);
LiftingGerbe make_gerbe(LatticeBundle bundle, CentralExtension ext, Reduction red);

/* The kernel's coefficient ring for cochains: Zm for discrete kernels, U1 or
 * R for the continuous ones. mod is 0 outside the Zm case. */
void kernel_ring(const CentralExtension& E, Ring* ring, int* mod);

/* Lift of the bundle through the extension. edge_lift[e] projects to the
 * edge holonomy; refinement_lift[e] is the sheet-fixing lift of the edge
 * refinement, starting at the identity. For a discrete kernel the refinement
 * lift is horizontal and the edge lift may sit a kernel factor above its
 * endpoint; for a continuous kernel that factor is distributed smoothly along
 * the edge and the endpoints agree. */
struct Lift {
    std::vector<Mat> edge_lift;
    std::vector<SampledPath> refinement_lift;
};

void validate_lift(const LiftingGerbe& Gb, const Lift& L);

/* Horizontal lifts of every edge refinement from the identity. */
std::vector<SampledPath> horizontal_edge_lifts(const LiftingGerbe& Gb);

/* Kernel factor edge_lift * (horizontal endpoint)^-1 per edge, as a 1-cochain
 * in the kernel ring. */
Cochain lift_alpha(const LiftingGerbe& Gb, const Lift& L);

/* Per-face closure defect of the lifted edge holonomies against the
 * horizontal closure of the face holonomy, as a 2-cochain valued in the
 * kernel ring. The overload takes explicit edge lifts so alternative lift
 * choices can be compared; the cohomology class does not depend on them. */
Cochain obstruction_cocycle(const LiftingGerbe& Gb);
Cochain obstruction_cocycle(const LiftingGerbe& Gb, const std::vector<Mat>& edge_lifts);
CohomologySolution obstruction_class(const LiftingGerbe& Gb);

/* All lifts up to kernel-valued vertex gauge, one representative each.
 * Throws NoLiftExists when the obstruction class is nonzero and Unsupported
 * for continuous kernels (those have witness_lift). */
std::vector<Lift> enumerate_lifts(const LiftingGerbe& Gb);
Lift witness_lift(const LiftingGerbe& Gb);

/* The canonical lift twisted by a kernel-valued edge cochain. */
Lift twisted_lift(const LiftingGerbe& Gb, const Cochain& alpha);

bool lifts_equivalent(const LiftingGerbe& Gb, const Lift& L1, const Lift& L2,
                      double tol = 1e-8);

Lift gauge_transform_lift(const LiftingGerbe& Gb, const std::vector<Mat>& u, const Lift& L);
LiftingGerbe gauge_transform_gerbe(const LiftingGerbe& Gb, const std::vector<Mat>& u);

/* Accumulated lifted transport along a base path, one entry per sample,
 * mirroring rho_sequence upstairs. Kernel factors of the lift enter at the
 * final sample of each edge. */
std::vector<Mat> rho_hat_sequence(const LiftingGerbe& Gb, const Lift& L, const EdgePath& p);

/* Transport operator over a pair of total-space paths covering the same base
 * path: the horizontal lift of the pointwise difference, times the kernel
 * correction from the reduction-free connection shift integrated along the
 * first component. Valued in the extension's total group. */
Mat pair_transport_operator(const LiftingGerbe& Gb, const BundlePath& p1, const BundlePath& p2);

/* Kernel-valued transport of the pair path. Closed difference paths give the
 * transport's kernel defect directly; open ones are measured relative to the
 * canonical frames over the two ends, which must lie inside the principal
 * chart (else AmbiguousLift). */
GroupElement gomi_transport(const LiftingGerbe& Gb, const BundlePath& p1, const BundlePath& p2);

/* Curving 2-form. The face value pairs the boundary increments through omega
 * and adds the reduced face curvature; the sample form evaluates on a pair of
 * fiber directions at one frame. */
AlgebraElement curving_face(const LiftingGerbe& Gb, int face);
AlgebraElement curving_sample(const LiftingGerbe& Gb, int vertex, const Mat& coord,
                              const Mat& Y1, const Mat& Y2, const Mat* base_curv = nullptr);

struct CurvingCheck {
    double coarse_h = 0.0, fine_h = 0.0;
    double coarse_err = 0.0, fine_err = 0.0;
    double ratio() const;
    bool passed = false;
};

/* Finite-difference check that the pair transport's curvature equals the
 * difference of the curvings of the two legs, on fiber plaquettes over
 * `vertex`. Runs at h and h/2 for a Richardson ratio. */
CurvingCheck check_curving_identity(const LiftingGerbe& Gb, int vertex, double h,
                                    int n_samples, unsigned seed, double tol);

struct ScalarCurvature {
    std::vector<double> face_values;
    std::optional<std::vector<double>> sampled_values;
};

/* Kernel-direction curvature of a lift, face by face: the kernel part of the
 * lifted face holonomy's logarithm minus the reduced structure part. frames
 * supplies per-vertex evaluation coordinates (identity when absent).
 * with_samples recomputes every value through the sampled refinement interiors
 * as a cross-check route. */
ScalarCurvature scalar_curvature(const LiftingGerbe& Gb, const Lift& L,
                                 const std::vector<Mat>* frames = nullptr,
                                 bool with_samples = false);

} // namespace gerbeloop
