#pragma once

#include <string>
#include <vector>

#include "gerbeloop/lifting_gerbe.hpp"
#include "gerbeloop/loop_registry.hpp"
#include "gerbeloop/transgression.hpp"

namespace gerbeloop {

/* Orthonormal frame bundle of a builtin surface in gauge coordinates. The
 * sphere model carries genuinely curved SO(2) transport sampled from
 * Levi-Civita transport on the embedded octahedron; the torus model is flat.
 * The genus-2 model is combinatorial with flat transport, so its expected
 * curvature total is 0 rather than the Gauss-Bonnet value. */
struct FrameBundleModel {
    std::string name;
    Complex2 surface;
    LatticeBundle bundle;
    /* Embedding frame per vertex (3 x 2, columns an oriented tangent basis);
     * empty for the flat models. */
    std::vector<Eigen::Matrix<double, 3, 2>> vertex_frames;
    double expected_curvature_total = 0.0;

    double curvature_total() const;
    void validate(double tol = 1e-3) const;
};

/* Builtins: "sphere" (octahedral Levi-Civita model), "torus", "genus2". */
FrameBundleModel frame_bundle_model(const std::string& name);

/* The lifting problem of the frame bundle through spin(2) or spinc(2). */
LiftingGerbe frame_gerbe(const FrameBundleModel& FM, const std::string& extension_name);

/* Sampled one-parameter subgroup path t -> exp(t X), t in [0, 1]. */
SampledPath one_parameter_loop(const GroupPtr& G, const Mat& X, int samples);

/* Kernel defect of the horizontal spin lift of a closed sampled SO(n) path,
 * as +1 or -1. The lift is recomputed on the half-coarsened sampling; a
 * value that changes under coarsening raises MeshTooCoarse. */
int monodromy(const GroupPtr& son, const SampledPath& loop);

struct CensusReport {
    std::string surface;
    int candidates = 0;
    int lasso_count = 0;
    bool obstruction_vanishes = false;
    int lift_classes = 0;
    int fusion_sections = 0;
    int h1_count = 0;
    bool counts_agree = false;
};

/* Counts equivalence classes of spin lifts of the frame bundle against
 * fusion-preserving loop-space orientation sections found by exhaustive
 * search over kernel twists of the generating lassos, and against the rank
 * of H^1 with Z/2 coefficients. */
CensusReport spin_census(const FrameBundleModel& FM);

struct OrientationGapReport {
    bool cocycle = false;
    bool class_trivial = false;
    bool plain_sections_exist = false;
    bool fusion_sections_exist = false;
    int fusion_section_count = 0;
    int h1_count = 0;
    bool gap = false;
    std::string witness;
    std::string note;
};

/* Formal-cocycle analysis of the two section obstructions over the loops
 * registered on C: sweep parity for plain sections, the cohomology class for
 * fusion-preserving ones. The input plays the role of obstruction data of a
 * lifting problem; no bundle is involved. */
OrientationGapReport orientation_vs_fusion_gap(const Complex2& C, const Cochain& synthetic);

struct Factor2Report {
    std::vector<double> det_face_curvature;
    std::vector<double> scalar_face_values;
    double max_error = 0.0;
    bool passed = false;
};

/* Face curvature of the determinant U(1) data of a spinc lift (edge phases
 * from the squaring character) against twice the lift's kernel-direction
 * curvature, face by face. */
Factor2Report spinc_factor2(const LiftingGerbe& Gb, const Lift& L, double tol = 1e-8);

/* Seeded U(1) edge cochain with trivial face sums mod 1, drawn by projecting
 * uniform edge values onto the flat ones. */
Cochain sample_flat_u1_twist(const Complex2& C, unsigned seed);

struct RoundTrip {
    bool section_verifies = false;
    bool reconstructed_equivalent = false;
    bool curvature_matches = false;
    double max_error = 0.0;
};

struct SpincBijectionReport {
    int n_samples = 0;
    int round_trips_passed = 0;
    bool distinct_sections_ok = true;
    std::vector<RoundTrip> trips;
    double max_error = 0.0;
    bool passed = false;
};

/* Round trip lift -> section -> lift for each twisted spinc lift, checking
 * the section against the target face curvature, plus pairwise distinctness
 * of sections for non-cohomologous twist differences. Empty rho_faces means
 * the curvature of the untwisted lift. */
SpincBijectionReport spinc_bijection(const LiftingGerbe& Gb, const LoopRegistry& R,
                                     const std::vector<Cochain>& twists,
                                     const std::vector<double>& rho_faces = {},
                                     double tol = 1e-6);

} // namespace gerbeloop
