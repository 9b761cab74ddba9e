#pragma once

#include <array>
#include <string>
#include <vector>

#include "gerbeloop/lifting_gerbe.hpp"
#include "gerbeloop/loop_registry.hpp"

namespace gerbeloop {

/* Point of the transgressed kernel bundle over the free loop space: a closed
 * lift of the base loop plus a kernel group element attached to it. */
struct LoopFiberElement {
    LoopLift loop_lift;
    Mat a_value;
};

/* Section of the loop-space kernel bundle over a loop registry, together
 * with the per-face curvature it claims to induce downstairs. */
struct LoopSection {
    std::vector<LoopFiberElement> assignment;
    std::vector<double> claimed_curvature;
};

struct FusionEvaluation {
    PathTriple triple;
    std::array<LoopLift, 3> chosen_lifts;
    Mat f_value;
};

/* Kernel-valued comparison of two closed lifts of the same base loop: the
 * value the transgressed cocycle assigns to the pair. Equal lifts give the
 * kernel identity exactly. */
GroupElement loop_cocycle(const LiftingGerbe& Gb, const LoopLift& l1, const LoopLift& l2);

/* Kernel defect of transporting the lift's edge paths around a closed loop
 * lift, starting from any extension-group point over the initial frame. */
Mat loop_transport_defect(const LiftingGerbe& Gb, const Lift& L, const LoopLift& loop);

/* The horizontal edge lifts packaged as a transport table. The faces need
 * not close over the kernel, so this never passes lift validation; it only
 * feeds loop_transport_defect. */
Lift horizontal_pseudo_lift(const LiftingGerbe& Gb);

/* One homotopy step between loop lifts. Fiber steps move the lift within the
 * fibers over an unchanged base loop; reroute steps splice a face boundary
 * excursion into the base word (sign +1) or remove one (sign -1) at the given
 * step position, sweeping the face once. */
struct CylinderStep {
    enum class Kind { Fiber, Reroute };
    Kind kind = Kind::Fiber;
    LoopLift target;
    int face = -1;
    int sign = 1;
    int position = 0;
};

/* Sampled path of loop lifts. quad_rows controls the strip subdivision of
 * the curving quadrature on fiber steps. */
struct LoopCylinder {
    LoopLift start;
    std::vector<CylinderStep> steps;
    int quad_rows = 8;
};

/* The loop lift with the face boundary spliced in at step `position`, lifted
 * horizontally from the frame sitting there and closed fiberwise. */
LoopLift insert_face_excursion(const LatticeBundle& B, const LoopLift& l, int position, int face);

/* Parallel transport of a loop-fiber element along a cylinder: the value is
 * multiplied by the exponentiated curving integral over the swept surface,
 * fiber strips by two-dimensional composite quadrature and face sweeps by the
 * reduced face curvature at the insertion frame. An element over a different
 * lift of the starting loop is first moved to the cylinder's own lift through
 * the loop cocycle. */
LoopFiberElement transport_loopspace(const LiftingGerbe& Gb, const LoopCylinder& cyl,
                                     const LoopFiberElement& x);

/* Fusion factor of three lifted composite loops split at their common
 * midpoint vertex. lifts[0], lifts[1], lifts[2] must cover the composites
 * gamma1*gamma2^-1, gamma2*gamma3^-1, gamma1*gamma3^-1. */
FusionEvaluation fusion_value(const LiftingGerbe& Gb, const PathTriple& triple,
                              const std::array<LoopLift, 3>& lifts);

/* Canonical section induced by a lift: transport defects over the canonical
 * horizontal loop lifts, with the lift's scalar curvature as claimed face
 * data. */
LoopSection section_from_lift(const LiftingGerbe& Gb, const LoopRegistry& R, const Lift& L);

struct SectionReport {
    bool passed = false;
    double max_fusion_error = 0.0;
    double max_curvature_error = 0.0;
    std::string failure;
};

/* Check the fusion law on every registered triple and the claimed curvature
 * against the face-loop values, without reference to any lift downstairs. */
SectionReport verify_section(const LiftingGerbe& Gb, const LoopRegistry& R,
                             const LoopSection& s, double tol = 1e-6);

/* Reconstruct a lift inducing the given section, with kernel twists read off
 * the spanning-tree lassos. Throws NotInImage when no lift matches. */
Lift lift_from_section(const LiftingGerbe& Gb, const LoopRegistry& R, const LoopSection& s);

} // namespace gerbeloop
