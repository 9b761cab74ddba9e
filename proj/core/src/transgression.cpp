#include "gerbeloop/transgression.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gerbeloop {

namespace {

int vertex_at(const Complex2& C, const EdgePath& p, int step) {
    EdgePath pre;
    pre.start_vertex = p.start_vertex;
    pre.word.assign(p.word.begin(), p.word.begin() + step);
    return path_end(C, pre);
}

LoopLift constant_loop_lift(int vertex, const Mat& frame) {
    LoopLift l;
    l.base_loop.start_vertex = vertex;
    l.fiber_points = {frame};
    return l;
}

/* Kernel group element with the given canonical algebra value. */
Mat a_group_exp(const CentralExtension& E, double v) {
    if (E.a_dim() == 0) return E.A->identity();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(E.A->alg_dim());
    c(0) = v;
    return E.A->exp(E.A->algebra_from_coords(c));
}

/* Kernel factor of sweeping face f once, starting from the frame reached by
 * transporting q0 down the spanning tree: the reduced face curvature at that
 * frame. For the canonical reductions this equals the exponentiated
 * connection shift Z(holonomy(tree) * q0, log holonomy(face)). */
Mat face_sweep_factor(const LiftingGerbe& Gb, const LoopRegistry& R, int f, const Mat& q0) {
    const CentralExtension& E = Gb.ext;
    if (E.a_dim() == 0) return E.A->identity();
    const LatticeBundle& B = Gb.bundle;
    const int v0 = B.base.face_base_vertex(f);
    Mat c = B.holonomy(R.tree_paths[v0]) * q0;
    Mat Xf = B.G->log(B.face_holonomy(f));
    AlgebraElement rc = Gb.reduce(v0, c, Mat(c.inverse() * Xf * c));
    return a_group_exp(E, a_value(E, rc));
}

void check_registry_shape(const LatticeBundle& B, const LoopRegistry& R) {
    if (R.base.n_vertices != B.base.n_vertices || R.base.n_edges() != B.base.n_edges() ||
        R.base.n_faces() != B.base.n_faces())
        throw BaseMismatch("loop registry was built over a different complex");
}

/* Slice [position, position + |face word|) out of a loop lift; the slice must
 * cover the face boundary and close in the fiber. remainder gets the loop
 * with the slice removed. */
LoopLift extract_face_piece(const LatticeBundle& B, const LoopLift& longer, int position,
                            int face, LoopLift* remainder) {
    const Complex2& C = B.base;
    if (face < 0 || face >= C.n_faces()) throw InvalidPath("face index out of range");
    const std::vector<int>& fword = C.faces[face].word;
    const int n = static_cast<int>(fword.size());
    if (position < 0 || position + n > longer.base_loop.steps())
        throw InvalidPath("excursion slice out of range");
    for (int j = 0; j < n; ++j)
        if (longer.base_loop.word[position + j] != fword[j])
            throw BaseMismatch("loop word does not carry the face boundary at this position");

    LoopLift piece;
    piece.base_loop.start_vertex = C.face_base_vertex(face);
    piece.base_loop.word = fword;
    piece.fiber_points.assign(longer.fiber_points.begin() + position,
                              longer.fiber_points.begin() + position + n + 1);
    piece.segment_paths.assign(longer.segment_paths.begin() + position,
                               longer.segment_paths.begin() + position + n);
    if (mat_dist(piece.fiber_points.front(), piece.fiber_points.back()) > 1e-9)
        throw InvalidPath("face excursion does not close in the fiber");
    piece.fiber_points.back() = piece.fiber_points.front();
    piece.segment_paths.back().points.back() = piece.fiber_points.front();

    if (remainder) {
        LoopLift rem;
        rem.base_loop.start_vertex = longer.base_loop.start_vertex;
        rem.base_loop.word = longer.base_loop.word;
        rem.base_loop.word.erase(rem.base_loop.word.begin() + position,
                                 rem.base_loop.word.begin() + position + n);
        rem.fiber_points = longer.fiber_points;
        rem.fiber_points.erase(rem.fiber_points.begin() + position + 1,
                               rem.fiber_points.begin() + position + n + 1);
        rem.segment_paths = longer.segment_paths;
        rem.segment_paths.erase(rem.segment_paths.begin() + position,
                                rem.segment_paths.begin() + position + n);
        *remainder = std::move(rem);
    }
    return piece;
}

double lift_pointwise_dist(const LoopLift& a, const LoopLift& b) {
    double d = 0.0;
    for (size_t k = 0; k < a.fiber_points.size(); ++k)
        d = std::max(d, mat_dist(a.fiber_points[k], b.fiber_points[k]));
    for (size_t k = 0; k < a.segment_paths.size(); ++k)
        for (size_t j = 0; j < a.segment_paths[k].points.size(); ++j)
            d = std::max(d, mat_dist(a.segment_paths[k].points[j], b.segment_paths[k].points[j]));
    return d;
}

} // namespace

GroupElement loop_cocycle(const LiftingGerbe& Gb, const LoopLift& l1, const LoopLift& l2) {
    const LatticeBundle& B = Gb.bundle;
    validate_loop_lift(B, l1);
    validate_loop_lift(B, l2);
    if (l1.base_loop.word != l2.base_loop.word ||
        l1.base_loop.start_vertex != l2.base_loop.start_vertex)
        throw BaseMismatch("loop cocycle needs two lifts of the same base loop");
    if (l1.base_loop.empty()) return {Gb.ext.A->identity(), Gb.ext.A};
    return gomi_transport(Gb, to_bundle_path(B, l1), to_bundle_path(B, l2));
}

Mat loop_transport_defect(const LiftingGerbe& Gb, const Lift& L, const LoopLift& loop) {
    const LatticeBundle& B = Gb.bundle;
    const CentralExtension& E = Gb.ext;
    const GroupDesc& G = *B.G;
    BundlePath bp = to_bundle_path(B, loop);
    std::vector<Mat> rh = rho_hat_sequence(Gb, L, loop.base_loop);
    if (static_cast<int>(rh.size()) != bp.samples())
        throw InvalidPath("lift refinement disagrees with the loop sampling");

    Mat Q0 = lift_element_any(E, bp.frames.front());
    Mat Q = Q0;
    for (int k = 0; k + 1 < bp.samples(); ++k) {
        Mat rstep = rh[k + 1] * rh[k].inverse();
        Mat dT = bp.rho[k + 1] * bp.rho[k].inverse();
        Mat m = (dT * bp.frames[k]).inverse() * bp.frames[k + 1];
        if (mat_dist(m, G.identity()) < 1e-14) {
            Q = rstep * Q;
            continue;
        }
        Q = rstep * Q * E.Ghat->exp(E.sigma(G.log(m)));
    }
    return E.incl_inv(Q * Q0.inverse(), 1e-6);
}

Lift horizontal_pseudo_lift(const LiftingGerbe& Gb) {
    Lift L;
    L.refinement_lift = horizontal_edge_lifts(Gb);
    L.edge_lift.reserve(L.refinement_lift.size());
    for (const SampledPath& sp : L.refinement_lift) L.edge_lift.push_back(sp.points.back());
    return L;
}

LoopLift insert_face_excursion(const LatticeBundle& B, const LoopLift& l, int position, int face) {
    const Complex2& C = B.base;
    validate_loop_lift(B, l);
    if (face < 0 || face >= C.n_faces()) throw InvalidPath("face index out of range");
    if (position < 0 || position > l.base_loop.steps())
        throw InvalidPath("insertion position out of range");
    if (vertex_at(C, l.base_loop, position) != C.face_base_vertex(face))
        throw BaseMismatch("face boundary does not start at the insertion vertex");

    EdgePath fw = make_path(C, C.faces[face].word);
    LoopLift piece = horizontal_loop_lift(B, fw, true, l.fiber_points[position]);

    LoopLift out;
    out.base_loop.start_vertex = l.base_loop.start_vertex;
    out.base_loop.word = l.base_loop.word;
    out.base_loop.word.insert(out.base_loop.word.begin() + position, fw.word.begin(),
                              fw.word.end());
    out.fiber_points.assign(l.fiber_points.begin(), l.fiber_points.begin() + position + 1);
    out.fiber_points.insert(out.fiber_points.end(), piece.fiber_points.begin() + 1,
                            piece.fiber_points.end());
    out.fiber_points.insert(out.fiber_points.end(), l.fiber_points.begin() + position + 1,
                            l.fiber_points.end());
    out.segment_paths.assign(l.segment_paths.begin(), l.segment_paths.begin() + position);
    out.segment_paths.insert(out.segment_paths.end(), piece.segment_paths.begin(),
                             piece.segment_paths.end());
    out.segment_paths.insert(out.segment_paths.end(), l.segment_paths.begin() + position,
                             l.segment_paths.end());
    return out;
}

namespace {

/* exp of the curving integral over the strip swept between two lifts of the
 * same base loop, the fiber interpolated geodesically and the integrand
 * -omega(fiber velocity, loop velocity) summed by composite midpoint rule. */
Mat fiber_strip_factor(const LiftingGerbe& Gb, const LoopLift& l1, const LoopLift& l2,
                       int rows) {
    const LatticeBundle& B = Gb.bundle;
    const CentralExtension& E = Gb.ext;
    const GroupDesc& G = *B.G;
    if (l1.base_loop.word != l2.base_loop.word ||
        l1.base_loop.start_vertex != l2.base_loop.start_vertex)
        throw BaseMismatch("fiber step must keep the base loop");
    if (E.a_dim() == 0) return E.A->identity();
    if (rows < 1) rows = 1;

    BundlePath p1 = to_bundle_path(B, l1);
    BundlePath p2 = to_bundle_path(B, l2);
    const int N = p1.samples();
    std::vector<Mat> X(N);
    for (int j = 0; j < N; ++j) X[j] = G.log(Mat(p1.frames[j].inverse() * p2.frames[j]));

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(E.A->alg_dim());
    for (int k = 0; k < rows; ++k) {
        const double u = (k + 0.5) / rows;
        for (int j = 0; j + 1 < N; ++j) {
            Mat Pj = p1.frames[j] * G.exp(Mat(u * X[j]));
            Mat Pj1 = p1.frames[j + 1] * G.exp(Mat(u * X[j + 1]));
            Mat dT = p1.rho[j + 1] * p1.rho[j].inverse();
            Mat m = (dT * Pj).inverse() * Pj1;
            if (mat_dist(m, G.identity()) < 1e-14) continue;
            Mat eta = G.log(m);
            Eigen::VectorXd w =
                0.5 * (E.A->algebra_coords(compute_omega(E, X[j], eta).m) +
                       E.A->algebra_coords(compute_omega(E, X[j + 1], eta).m));
            acc -= w / rows;
        }
    }
    return E.A->exp(E.A->algebra_from_coords(acc));
}

} // namespace

LoopFiberElement transport_loopspace(const LiftingGerbe& Gb, const LoopCylinder& cyl,
                                     const LoopFiberElement& x) {
    const LatticeBundle& B = Gb.bundle;
    const CentralExtension& E = Gb.ext;
    if (x.loop_lift.base_loop.word != cyl.start.base_loop.word ||
        x.loop_lift.base_loop.start_vertex != cyl.start.base_loop.start_vertex)
        throw BaseMismatch("element does not sit over the cylinder's starting loop");

    LoopLift cur = cyl.start;
    Mat a = x.a_value;
    if (lift_pointwise_dist(x.loop_lift, cyl.start) > 1e-12)
        a = a * loop_cocycle(Gb, cyl.start, x.loop_lift).m.inverse();

    for (const CylinderStep& st : cyl.steps) {
        validate_loop_lift(B, st.target);
        if (st.kind == CylinderStep::Kind::Fiber) {
            a = a * fiber_strip_factor(Gb, cur, st.target, cyl.quad_rows);
            cur = st.target;
            continue;
        }
        if (st.sign != 1 && st.sign != -1) throw InvalidPath("reroute sign must be +1 or -1");
        const LoopLift& longer = st.sign > 0 ? st.target : cur;
        const LoopLift& shorter = st.sign > 0 ? cur : st.target;
        LoopLift remainder;
        LoopLift piece = extract_face_piece(B, longer, st.position, st.face, &remainder);
        if (remainder.base_loop.word != shorter.base_loop.word ||
            lift_pointwise_dist(remainder, shorter) > 1e-9)
            throw InvalidPath("cylinder step is not a pure face reroute");
        if (E.a_dim() > 0) {
            const Mat& q = piece.fiber_points.front();
            Mat Xf = B.G->log(B.face_holonomy(st.face));
            AlgebraElement rc =
                Gb.reduce(B.base.face_base_vertex(st.face), q, Mat(q.inverse() * Xf * q));
            a = a * a_group_exp(E, st.sign * a_value(E, rc));
        }
        cur = st.target;
    }
    return {std::move(cur), std::move(a)};
}

FusionEvaluation fusion_value(const LiftingGerbe& Gb, const PathTriple& triple,
                              const std::array<LoopLift, 3>& lifts) {
    const LatticeBundle& B = Gb.bundle;
    const CentralExtension& E = Gb.ext;
    const Complex2& C = B.base;
    validate_triple(C, triple);
    const std::array<EdgePath, 3> beta = {composite_loop(C, triple.gamma1, triple.gamma2),
                                          composite_loop(C, triple.gamma2, triple.gamma3),
                                          composite_loop(C, triple.gamma1, triple.gamma3)};
    for (int i = 0; i < 3; ++i) {
        validate_loop_lift(B, lifts[i]);
        if (lifts[i].base_loop.word != beta[i].word ||
            lifts[i].base_loop.start_vertex != beta[i].start_vertex)
            throw BaseMismatch("lift does not cover its composite loop");
    }

    int far = -1;
    std::array<int, 3> mid{};
    for (int i = 0; i < 3; ++i) {
        const int n = beta[i].steps();
        if (n % 2 != 0) throw SplitMismatch("composite loop has no midpoint vertex");
        mid[i] = n / 2;
        const int v = vertex_at(C, beta[i], mid[i]);
        if (far < 0)
            far = v;
        else if (v != far)
            throw SplitMismatch("the three composite loops split at different vertices");
    }

    std::array<BundlePath, 3> p;
    std::array<int, 3> ms{};
    for (int i = 0; i < 3; ++i) {
        p[i] = to_bundle_path(B, lifts[i]);
        ms[i] = p[i].edge_sample_begin[mid[i]];
    }
    BundlePath mu12 = subpath(B, p[0], 0, ms[0]);
    BundlePath nu12 = subpath(B, p[0], p[0].samples() - 1, ms[0]);
    BundlePath mu23 = subpath(B, p[1], 0, ms[1]);
    BundlePath nu23 = subpath(B, p[1], p[1].samples() - 1, ms[1]);
    BundlePath mu13 = subpath(B, p[2], 0, ms[2]);
    BundlePath nu13 = subpath(B, p[2], p[2].samples() - 1, ms[2]);

    Mat W1 = pair_transport_operator(Gb, mu12, mu13);
    Mat W2 = pair_transport_operator(Gb, nu12, mu23);
    Mat W3 = pair_transport_operator(Gb, nu23, nu13);
    Mat d3 = nu23.frames.front().inverse() * nu13.frames.front();
    Mat g3 = lift_element_any(E, d3);

    FusionEvaluation out;
    out.triple = triple;
    out.chosen_lifts = lifts;
    Mat arg = W3.inverse() * (g3.inverse() * W2.inverse() * g3) * W1;
    out.f_value = E.incl_inv(arg, 1e-6);
    return out;
}

LoopSection section_from_lift(const LiftingGerbe& Gb, const LoopRegistry& R, const Lift& L) {
    const LatticeBundle& B = Gb.bundle;
    check_registry_shape(B, R);
    validate_lift(Gb, L);

    LoopSection s;
    s.assignment.reserve(R.n_loops());
    for (int i = 0; i < R.n_loops(); ++i) {
        LoopLift ll = R.loops[i].empty()
                          ? constant_loop_lift(R.loops[i].start_vertex, B.G->identity())
                          : horizontal_loop_lift(B, R.loops[i], true);
        Mat a = loop_transport_defect(Gb, L, ll);
        s.assignment.push_back({std::move(ll), std::move(a)});
    }
    s.claimed_curvature = scalar_curvature(Gb, L).face_values;
    return s;
}

SectionReport verify_section(const LiftingGerbe& Gb, const LoopRegistry& R,
                             const LoopSection& s, double tol) {
    const LatticeBundle& B = Gb.bundle;
    const CentralExtension& E = Gb.ext;
    check_registry_shape(B, R);
    if (static_cast<int>(s.assignment.size()) != R.n_loops() ||
        static_cast<int>(s.claimed_curvature.size()) != B.base.n_faces())
        throw BaseMismatch("section does not match the registry shape");
    for (int i = 0; i < R.n_loops(); ++i) {
        const LoopLift& ll = s.assignment[i].loop_lift;
        if (ll.base_loop.word != R.loops[i].word ||
            ll.base_loop.start_vertex != R.loops[i].start_vertex)
            throw BaseMismatch("assignment is not over the registered loop");
        validate_loop_lift(B, ll);
        if (!E.A->contains(s.assignment[i].a_value, 1e-8))
            throw BaseMismatch("section value lies outside the kernel group");
    }

    SectionReport rep;
    rep.passed = true;
    auto fail = [&](const char* msg) {
        if (rep.passed) rep.failure = msg;
        rep.passed = false;
    };

    const double unit_err = mat_dist(s.assignment[0].a_value, E.A->identity());
    rep.max_fusion_error = unit_err;
    if (unit_err > tol) fail("constant loop value is not the identity");

    for (const RegistryTriple& t : registry_triples(R)) {
        FusionEvaluation fe =
            fusion_value(Gb, t.paths,
                         {s.assignment[t.b12].loop_lift, s.assignment[t.b23].loop_lift,
                          s.assignment[t.b13].loop_lift});
        Mat rhs = s.assignment[t.b12].a_value * s.assignment[t.b23].a_value * fe.f_value;
        const double err = mat_dist(s.assignment[t.b13].a_value, rhs);
        rep.max_fusion_error = std::max(rep.max_fusion_error, err);
        if (err > tol) fail("fusion law fails on a registered triple");
    }

    const Mat q0 = s.assignment[0].loop_lift.fiber_points.front();
    for (int f = 0; f < B.base.n_faces(); ++f) {
        const int li = R.face_loop[f];
        const double cl = s.claimed_curvature[f];
        double err = E.kernel_is_discrete ? std::abs(cl) : 0.0;
        LoopLift lstar = horizontal_loop_lift(B, R.loops[li], true, q0);
        Mat g = loop_cocycle(Gb, lstar, s.assignment[li].loop_lift).m;
        Mat rhs = s.assignment[0].a_value * a_group_exp(E, cl) * face_sweep_factor(Gb, R, f, q0) * g;
        err = std::max(err, mat_dist(s.assignment[li].a_value, rhs));
        rep.max_curvature_error = std::max(rep.max_curvature_error, err);
        if (err > tol) fail("claimed curvature disagrees with the face loop value");
    }
    return rep;
}

Lift lift_from_section(const LiftingGerbe& Gb, const LoopRegistry& R, const LoopSection& s) {
    const LatticeBundle& B = Gb.bundle;
    const CentralExtension& E = Gb.ext;
    check_registry_shape(B, R);
    if (static_cast<int>(s.assignment.size()) != R.n_loops() ||
        static_cast<int>(s.claimed_curvature.size()) != B.base.n_faces())
        throw BaseMismatch("section does not match the registry shape");

    Ring ring = Ring::Z;
    int mod = 0;
    kernel_ring(E, &ring, &mod);
    Cochain alpha = Cochain::zeros(B.base, 1, ring, mod);

    Lift pseudo = horizontal_pseudo_lift(Gb);
    for (int i = 0; i < R.n_lassos(); ++i) {
        const int li = R.lasso_loop[i];
        const LoopLift& ll = s.assignment[li].loop_lift;
        if (ll.base_loop.word != R.loops[li].word)
            throw BaseMismatch("assignment is not over the registered lasso");
        Mat hdef = loop_transport_defect(Gb, pseudo, ll);
        Mat rel = hdef.inverse() * s.assignment[li].a_value;
        alpha.vals(R.lasso_edges[i]) = E.a_scalar(rel);
    }
    alpha.reduce();

    Lift L;
    try {
        L = twisted_lift(Gb, alpha);
    } catch (const Error& err) {
        throw NotInImage(std::string("no lift carries the section's lasso values: ") +
                         err.what());
    }

    LoopSection s2 = section_from_lift(Gb, R, L);
    for (int i = 0; i < R.n_loops(); ++i) {
        Mat moved = s.assignment[i].a_value *
                    loop_cocycle(Gb, s.assignment[i].loop_lift, s2.assignment[i].loop_lift).m;
        if (mat_dist(moved, s2.assignment[i].a_value) > 1e-6)
            throw NotInImage("section values do not extend to a lift");
    }
    for (int f = 0; f < B.base.n_faces(); ++f)
        if (std::abs(s.claimed_curvature[f] - s2.claimed_curvature[f]) > 1e-6)
            throw NotInImage("claimed curvature does not match the reconstructed lift");
    return L;
}

} // namespace gerbeloop
