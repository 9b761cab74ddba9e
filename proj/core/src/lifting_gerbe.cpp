#include "gerbeloop/lifting_gerbe.hpp"

#include <cmath>
#include <random>

namespace gerbeloop {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd a_coords_of(const CentralExtension& E, const AlgebraElement& a) {
    if (E.a_dim() == 0) return Eigen::VectorXd::Zero(0);
    return E.A->algebra_coords(a.m);
}

AlgebraElement a_from(const CentralExtension& E, const Eigen::VectorXd& c) {
    if (E.a_dim() == 0) return {Mat::Zero(1, 1), E.A};
    return {E.A->algebra_from_coords(c), E.A};
}

/* Ordered product of signed edge elements along a face word, matching the
 * accumulation order of LatticeBundle::holonomy. */
Mat word_product(const std::vector<int>& word, const std::vector<Mat>& edge_elems) {
    if (edge_elems.empty()) throw BaseMismatch("no edge elements");
    const int d = static_cast<int>(edge_elems[0].rows());
    Mat h = Mat::Identity(d, d);
    for (int s : word) {
        const Mat& g = edge_elems[std::abs(s) - 1];
        h = (s > 0 ? g : Mat(g.inverse())) * h;
    }
    return h;
}

/* Lift of the canonical closure of a face holonomy. */
Mat face_closure(const LiftingGerbe& Gb, int f) {
    Mat Xf = Gb.bundle.G->log(Gb.bundle.face_holonomy(f));
    return Gb.ext.Ghat->exp(Gb.ext.sigma(Xf));
}

void check_pair_paths(const LatticeBundle& B, const BundlePath& p1, const BundlePath& p2) {
    if (p1.start_vertex != p2.start_vertex || p1.base.word != p2.base.word)
        throw BaseMismatch("pair paths must cover the same base path");
    if (p1.samples() != p2.samples() || p1.samples() < 2)
        throw InvalidPath("pair paths need matching sample grids");
    if (p1.rho.size() != p1.frames.size() || p2.rho.size() != p2.frames.size())
        throw InvalidPath("malformed bundle path");
    for (int k = 0; k < p1.samples(); ++k)
        if (mat_dist(p1.rho[k], p2.rho[k]) > 1e-9)
            throw BaseMismatch("pair paths disagree on the base transport");
    (void)B;
}

} // namespace

void LiftingGerbe::validate() const {
    bundle.validate();
    if (ext.G->name() != bundle.G->name())
        throw BaseMismatch("extension base group does not match the bundle's structure group");
    if (!vertex_base.empty()) {
        if (static_cast<int>(vertex_base.size()) != bundle.base.n_vertices)
            throw BaseMismatch("need one reduction frame per vertex");
        for (const Mat& b : vertex_base)
            if (!bundle.G->contains(b, 1e-8))
                throw BaseMismatch("reduction frame outside the structure group");
    }
}

Mat LiftingGerbe::frame_at(int vertex, const Mat& coord) const {
    if (vertex < 0 || vertex >= bundle.base.n_vertices)
        throw BaseMismatch("frame_at: vertex out of range");
    if (vertex_base.empty()) return coord;
    return vertex_base[vertex] * coord;
}

AlgebraElement LiftingGerbe::reduce(int vertex, const Mat& coord, const Mat& X) const {
    return reduction.evaluate(ext, frame_at(vertex, coord), X);
}

LiftingGerbe make_gerbe(LatticeBundle bundle, CentralExtension ext) {
    Reduction r = canonical_reduction(ext);
    return make_gerbe(std::move(bundle), std::move(ext), r);
}

LiftingGerbe make_gerbe(LatticeBundle bundle, CentralExtension ext, Reduction red) {
    LiftingGerbe Gb;
    Gb.bundle = std::move(bundle);
    Gb.ext = std::move(ext);
    Gb.reduction = red;
    Gb.validate();
    return Gb;
}

void kernel_ring(const CentralExtension& E, Ring* ring, int* mod) {
    switch (E.A->kind) {
    case GroupKind::Z2: *ring = Ring::Zm; *mod = 2; return;
    case GroupKind::Zm: *ring = Ring::Zm; *mod = E.A->n; return;
    case GroupKind::U1: *ring = Ring::U1; *mod = 0; return;
    case GroupKind::RealLine: *ring = Ring::R; *mod = 0; return;
    default: throw Unsupported("kernel group has no cochain coefficient ring");
    }
}

std::vector<SampledPath> horizontal_edge_lifts(const LiftingGerbe& Gb) {
    std::vector<SampledPath> out;
    out.reserve(Gb.bundle.edge_transport.size());
    const Mat id = Gb.ext.Ghat->identity();
    for (const SampledPath& ref : Gb.bundle.edge_transport)
        out.push_back(horizontal_lift_path(Gb.ext, ref, id));
    return out;
}

void validate_lift(const LiftingGerbe& Gb, const Lift& L) {
    const CentralExtension& E = Gb.ext;
    const LatticeBundle& B = Gb.bundle;
    const int ne = B.base.n_edges();
    if (static_cast<int>(L.edge_lift.size()) != ne ||
        static_cast<int>(L.refinement_lift.size()) != ne)
        throw BaseMismatch("lift needs one edge element and one refinement path per edge");
    for (int e = 0; e < ne; ++e) {
        if (!E.Ghat->contains(L.edge_lift[e], 1e-8))
            throw BaseMismatch("edge lift leaves the extension group");
        if (mat_dist(E.t(L.edge_lift[e]), B.edge_holonomy(e)) > 1e-8)
            throw BaseMismatch("edge lift does not project to the edge holonomy");
        const auto& ref = B.edge_transport[e].points;
        const auto& lifted = L.refinement_lift[e].points;
        if (lifted.size() != ref.size())
            throw InvalidPath("refinement lift sample count mismatch");
        if (mat_dist(lifted.front(), E.Ghat->identity()) > 1e-10)
            throw InvalidPath("refinement lift must start at the identity");
        for (size_t j = 0; j < lifted.size(); ++j) {
            if (!E.Ghat->contains(lifted[j], 1e-8))
                throw BaseMismatch("refinement lift sample leaves the extension group");
            if (mat_dist(E.t(lifted[j]), ref[j]) > 1e-8)
                throw BaseMismatch("refinement lift does not project to the refinement");
        }
        if (!E.in_kernel(L.edge_lift[e] * lifted.back().inverse(), 1e-6))
            throw BaseMismatch("edge lift is not a kernel translate of its refinement lift");
    }
    if (E.kernel_is_discrete) {
        for (int f = 0; f < B.base.n_faces(); ++f) {
            Mat Hf = word_product(B.base.faces[f].word, L.edge_lift);
            Mat defect = E.incl_inv(Hf * face_closure(Gb, f).inverse(), 1e-6);
            if (mat_dist(defect, E.A->identity()) > 1e-8)
                throw BaseMismatch("lifted edge elements fail to close over a face");
        }
    }
}

Cochain lift_alpha(const LiftingGerbe& Gb, const Lift& L) {
    Ring ring;
    int mod;
    kernel_ring(Gb.ext, &ring, &mod);
    Cochain a = Cochain::zeros(Gb.bundle.base, 1, ring, mod);
    std::vector<SampledPath> hor = horizontal_edge_lifts(Gb);
    for (int e = 0; e < Gb.bundle.base.n_edges(); ++e) {
        Mat k = L.edge_lift[e] * hor[e].points.back().inverse();
        a.vals(e) = Gb.ext.a_scalar(Gb.ext.incl_inv(k, 1e-6));
    }
    a.reduce();
    return a;
}

Cochain obstruction_cocycle(const LiftingGerbe& Gb) {
    std::vector<SampledPath> hor = horizontal_edge_lifts(Gb);
    std::vector<Mat> ends;
    ends.reserve(hor.size());
    for (const SampledPath& p : hor) ends.push_back(p.points.back());
    return obstruction_cocycle(Gb, ends);
}

Cochain obstruction_cocycle(const LiftingGerbe& Gb, const std::vector<Mat>& edge_lifts) {
    const CentralExtension& E = Gb.ext;
    const LatticeBundle& B = Gb.bundle;
    if (static_cast<int>(edge_lifts.size()) != B.base.n_edges())
        throw BaseMismatch("need one lifted element per edge");
    for (int e = 0; e < B.base.n_edges(); ++e)
        if (mat_dist(E.t(edge_lifts[e]), B.edge_holonomy(e)) > 1e-8)
            throw BaseMismatch("edge lift does not project to the edge holonomy");
    Ring ring;
    int mod;
    kernel_ring(E, &ring, &mod);
    Cochain w = Cochain::zeros(B.base, 2, ring, mod);
    for (int f = 0; f < B.base.n_faces(); ++f) {
        Mat Hf = word_product(B.base.faces[f].word, edge_lifts);
        Mat defect = E.incl_inv(Hf * face_closure(Gb, f).inverse(), 1e-6);
        w.vals(f) = E.a_scalar(defect);
    }
    w.reduce();
    return w;
}

CohomologySolution obstruction_class(const LiftingGerbe& Gb) {
    Cochain w = obstruction_cocycle(Gb);
    return solve_coboundary(Gb.bundle.base, w);
}

Lift twisted_lift(const LiftingGerbe& Gb, const Cochain& alpha) {
    const CentralExtension& E = Gb.ext;
    const LatticeBundle& B = Gb.bundle;
    Ring ring;
    int mod;
    kernel_ring(E, &ring, &mod);
    if (alpha.degree != 1 || alpha.vals.size() != B.base.n_edges())
        throw BaseMismatch("edge twist must be a 1-cochain on the base");
    if (E.kernel_is_discrete) {
        if (alpha.ring != Ring::Zm || alpha.mod != mod)
            throw BaseMismatch("edge twist ring does not match the kernel");
    } else if (alpha.ring == Ring::Zm || alpha.ring == Ring::Z) {
        throw BaseMismatch("edge twist ring does not match the kernel");
    }
    Lift L;
    L.refinement_lift = horizontal_edge_lifts(Gb);
    L.edge_lift.resize(B.base.n_edges());
    for (int e = 0; e < B.base.n_edges(); ++e) {
        double v = alpha.vals(e);
        L.edge_lift[e] = L.refinement_lift[e].points.back() * E.incl(E.a_element_from_scalar(v));
        if (!E.kernel_is_discrete && v != 0.0) {
            auto& pts = L.refinement_lift[e].points;
            const int P = static_cast<int>(pts.size());
            for (int j = 0; j < P; ++j) {
                double s = smooth_step(static_cast<double>(j) / (P - 1));
                pts[j] = pts[j] * E.incl(E.a_element_from_scalar(s * v));
            }
        }
    }
    validate_lift(Gb, L);
    return L;
}

std::vector<Lift> enumerate_lifts(const LiftingGerbe& Gb) {
    const CentralExtension& E = Gb.ext;
    if (!E.kernel_is_discrete)
        throw Unsupported("continuous kernel admits infinitely many lifts; use witness_lift");
    Ring ring;
    int mod;
    kernel_ring(E, &ring, &mod);
    Cochain w = obstruction_cocycle(Gb);
    Cochain target = w;
    target.vals = -w.vals;
    target.reduce();
    CohomologySolution sol = solve_coboundary(Gb.bundle.base, target);
    if (!sol.solvable)
        throw NoLiftExists("obstruction class is nonzero");
    std::vector<Cochain> reps = h1_representatives(Gb.bundle.base, mod);
    std::vector<Lift> out;
    out.reserve(reps.size());
    for (const Cochain& rep : reps) {
        Cochain a = *sol.witness;
        a.vals += rep.vals;
        a.reduce();
        out.push_back(twisted_lift(Gb, a));
    }
    return out;
}

Lift witness_lift(const LiftingGerbe& Gb) {
    Cochain w = obstruction_cocycle(Gb);
    Cochain target = w;
    target.vals = -w.vals;
    target.reduce();
    CohomologySolution sol = solve_coboundary(Gb.bundle.base, target);
    if (!sol.solvable)
        throw NoLiftExists("obstruction class is nonzero");
    return twisted_lift(Gb, *sol.witness);
}

bool lifts_equivalent(const LiftingGerbe& Gb, const Lift& L1, const Lift& L2, double tol) {
    Cochain beta = cochain_sub(lift_alpha(Gb, L1), lift_alpha(Gb, L2));
    return is_coboundary(Gb.bundle.base, beta, tol);
}

Lift gauge_transform_lift(const LiftingGerbe& Gb, const std::vector<Mat>& u, const Lift& L) {
    const CentralExtension& E = Gb.ext;
    const LatticeBundle& B = Gb.bundle;
    if (static_cast<int>(u.size()) != B.base.n_vertices)
        throw BaseMismatch("need one gauge element per vertex");
    validate_lift(Gb, L);
    Lift out = L;
    for (int e = 0; e < B.base.n_edges(); ++e) {
        const Mat& ut = u[B.base.edges[e].tail];
        const Mat& uh = u[B.base.edges[e].head];
        Mat uhat_t = lift_element_any(E, ut);
        Mat uhat_h = lift_element_any(E, uh);
        out.edge_lift[e] = uhat_h * L.edge_lift[e] * uhat_t.inverse();
        Mat Xhat = E.sigma(B.G->log(ut.inverse() * uh));
        auto& pts = out.refinement_lift[e].points;
        const int P = static_cast<int>(pts.size());
        for (int j = 0; j < P; ++j) {
            double s = smooth_step(static_cast<double>(j) / (P - 1));
            Mat what = uhat_t * E.Ghat->exp(s * Xhat);
            pts[j] = what * L.refinement_lift[e].points[j] * uhat_t.inverse();
        }
    }
    return out;
}

LiftingGerbe gauge_transform_gerbe(const LiftingGerbe& Gb, const std::vector<Mat>& u) {
    LiftingGerbe out = Gb;
    out.bundle = gauge_transform(Gb.bundle, u);
    out.vertex_base.resize(Gb.bundle.base.n_vertices);
    for (int v = 0; v < Gb.bundle.base.n_vertices; ++v) {
        Mat b = Gb.vertex_base.empty() ? Gb.bundle.G->identity() : Gb.vertex_base[v];
        out.vertex_base[v] = b * u[v].inverse();
    }
    return out;
}

std::vector<Mat> rho_hat_sequence(const LiftingGerbe& Gb, const Lift& L, const EdgePath& p) {
    const LatticeBundle& B = Gb.bundle;
    validate_path(B.base, p);
    std::vector<Mat> rho;
    rho.push_back(Gb.ext.Ghat->identity());
    for (int s : p.word) {
        const int e = std::abs(s) - 1;
        const auto& lifted = L.refinement_lift[e].points;
        const Mat& ghat = L.edge_lift[e];
        const int P = static_cast<int>(lifted.size());
        Mat at_start = rho.back();
        for (int j = 1; j < P; ++j) {
            Mat step;
            if (s > 0)
                step = (j < P - 1) ? lifted[j] : ghat;
            else
                step = lifted[P - 1 - j] * ghat.inverse();
            rho.push_back(step * at_start);
        }
    }
    return rho;
}

Mat pair_transport_operator(const LiftingGerbe& Gb, const BundlePath& p1, const BundlePath& p2) {
    const CentralExtension& E = Gb.ext;
    const GroupDesc& G = *Gb.bundle.G;
    check_pair_paths(Gb.bundle, p1, p2);
    const int N = p1.samples();
    std::vector<Mat> d(N);
    for (int k = 0; k < N; ++k)
        d[k] = p1.frames[k].inverse() * p2.frames[k];

    Mat W = E.Ghat->identity();
    Eigen::VectorXd zsum = Eigen::VectorXd::Zero(E.a_dim());
    for (int k = 0; k + 1 < N; ++k) {
        Mat X = G.log(d[k].inverse() * d[k + 1]);
        W = W * E.Ghat->exp(E.sigma(X));
        if (E.a_dim() == 0) continue;
        Mat dT = p1.rho[k + 1] * p1.rho[k].inverse();
        Mat m = (dT * p1.frames[k]).inverse() * p1.frames[k + 1];
        if (mat_dist(m, G.identity()) < 1e-14) continue;
        Mat eta = G.log(m);
        zsum += 0.5 * (a_coords_of(E, compute_Z(E, d[k], eta)) +
                       a_coords_of(E, compute_Z(E, d[k + 1], eta)));
    }
    if (E.a_dim() > 0 && zsum.norm() > 0.0)
        W = W * E.incl(E.A->exp(E.A->algebra_from_coords(-zsum)));
    return W;
}

GroupElement gomi_transport(const LiftingGerbe& Gb, const BundlePath& p1, const BundlePath& p2) {
    const CentralExtension& E = Gb.ext;
    Mat W = pair_transport_operator(Gb, p1, p2);
    Mat d0 = p1.frames.front().inverse() * p2.frames.front();
    Mat dN = p1.frames.back().inverse() * p2.frames.back();
    if (mat_dist(d0, dN) < 1e-9)
        return {E.incl_inv(W, 1e-6), E.A};
    Mat c0, cN;
    try {
        c0 = E.Ghat->exp(E.sigma(Gb.bundle.G->log(d0)));
        cN = E.Ghat->exp(E.sigma(Gb.bundle.G->log(dN)));
    } catch (const MeshTooCoarse&) {
        throw AmbiguousLift("pair endpoint outside the canonical chart");
    }
    return {E.incl_inv(cN.inverse() * c0 * W, 1e-6), E.A};
}

AlgebraElement curving_face(const LiftingGerbe& Gb, int face) {
    const CentralExtension& E = Gb.ext;
    const LatticeBundle& B = Gb.bundle;
    if (face < 0 || face >= B.base.n_faces())
        throw BaseMismatch("curving_face: face out of range");
    const std::vector<int>& word = B.base.faces[face].word;
    std::vector<Mat> xi;
    xi.reserve(word.size());
    for (int s : word) {
        Mat X = B.G->log(B.edge_holonomy(std::abs(s) - 1));
        xi.push_back(s > 0 ? X : Mat(-X));
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(E.a_dim());
    for (size_t i = 0; i < xi.size(); ++i)
        for (size_t j = i + 1; j < xi.size(); ++j)
            acc -= 0.5 * a_coords_of(E, compute_omega(E, xi[i], xi[j]));
    Mat Xf = B.G->log(B.face_holonomy(face));
    acc += a_coords_of(E, Gb.reduce(B.base.face_base_vertex(face), B.G->identity(), Xf));
    return a_from(E, acc);
}

AlgebraElement curving_sample(const LiftingGerbe& Gb, int vertex, const Mat& coord,
                              const Mat& Y1, const Mat& Y2, const Mat* base_curv) {
    const CentralExtension& E = Gb.ext;
    Eigen::VectorXd acc = -a_coords_of(E, compute_omega(E, Y1, Y2));
    if (base_curv)
        acc += a_coords_of(E, Gb.reduce(vertex, coord, *base_curv));
    return a_from(E, acc);
}

double CurvingCheck::ratio() const {
    return coarse_err / std::max(fine_err, 1e-300);
}

namespace {

double omega_value(const LiftingGerbe& Gb, const Mat& X, const Mat& Y) {
    return a_value(Gb.ext, compute_omega(Gb.ext, X, Y));
}

/* Finite-difference curvature of the pair transport on one square fiber
 * plaquette: minus the log of the transport defect around the positively
 * oriented boundary, divided by the plaquette area. Transport is exp of
 * minus the integral of the connection form, so the defect around a closed
 * boundary is exp of minus the enclosed curvature. */
double plaquette_defect(const LiftingGerbe& Gb, int vertex, const Mat& c1, const Mat& X1,
                        const Mat& X2, const Mat& c2, const Mat& Y1, const Mat& Y2,
                        double s0, double t0, double h, int side_samples) {
    const GroupDesc& G = *Gb.bundle.G;
    auto corner1 = [&](double s, double t) { return Mat(c1 * G.exp(s * X1) * G.exp(t * X2)); };
    auto corner2 = [&](double s, double t) { return Mat(c2 * G.exp(s * Y1) * G.exp(t * Y2)); };

    std::vector<double> ss, ts;
    auto push_side = [&](double sa, double ta, double sb, double tb) {
        for (int i = 0; i < side_samples; ++i) {
            if (!ss.empty() && i == 0) continue;
            double u = static_cast<double>(i) / (side_samples - 1);
            ss.push_back(sa + u * (sb - sa));
            ts.push_back(ta + u * (tb - ta));
        }
    };
    push_side(s0, t0, s0 + h, t0);
    push_side(s0 + h, t0, s0 + h, t0 + h);
    push_side(s0 + h, t0 + h, s0, t0 + h);
    push_side(s0, t0 + h, s0, t0);

    SampledPath f1, f2;
    for (size_t i = 0; i < ss.size(); ++i) {
        f1.points.push_back(corner1(ss[i], ts[i]));
        f2.points.push_back(corner2(ss[i], ts[i]));
    }
    f1.points.back() = f1.points.front();
    f2.points.back() = f2.points.front();

    BundlePath q1 = fiber_loop(Gb.bundle, vertex, f1);
    BundlePath q2 = fiber_loop(Gb.bundle, vertex, f2);
    GroupElement a = gomi_transport(Gb, q1, q2);
    double phi = a_value(Gb.ext, {Gb.ext.A->log(a.m), Gb.ext.A});
    return -phi / (h * h);
}

} // namespace

CurvingCheck check_curving_identity(const LiftingGerbe& Gb, int vertex, double h,
                                    int n_samples, unsigned seed, double tol) {
    const GroupDesc& G = *Gb.bundle.G;
    if (Gb.ext.a_dim() == 0)
        throw Unsupported("curving identity needs a kernel with a nontrivial algebra");
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(-0.15, 0.15);
    auto rand_alg = [&](double scale) {
        Eigen::VectorXd c(G.alg_dim());
        for (int i = 0; i < c.size(); ++i) c(i) = scale * nd(rng);
        return G.algebra_from_coords(c);
    };

    const int side_samples = 129;
    CurvingCheck out;
    out.coarse_h = h;
    out.fine_h = h / 2;
    for (int s = 0; s < n_samples; ++s) {
        Mat X1 = rand_alg(0.8), X2 = rand_alg(0.8);
        Mat Y1 = rand_alg(0.8), Y2 = rand_alg(0.8);
        Mat c1 = G.exp(rand_alg(0.5)), c2 = G.exp(rand_alg(0.5));
        double s0 = ud(rng), t0 = ud(rng);

        auto run = [&](double hh) {
            double sc = s0 + hh / 2, tc = t0 + hh / 2;
            Mat e1 = G.exp(-tc * X2), e2 = G.exp(-tc * Y2);
            double C1 = -omega_value(Gb, Mat(e1 * X1 * e1.inverse()), X2);
            double C2 = -omega_value(Gb, Mat(e2 * Y1 * e2.inverse()), Y2);
            double analytic = C2 - C1;
            double numeric = plaquette_defect(Gb, vertex, c1, X1, X2, c2, Y1, Y2,
                                              s0, t0, hh, side_samples);
            return std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic));
        };
        out.coarse_err = std::max(out.coarse_err, run(h));
        out.fine_err = std::max(out.fine_err, run(h / 2));
    }
    out.passed = out.fine_err <= tol && (out.coarse_err <= 1e-10 || out.ratio() >= 3.0);
    return out;
}

ScalarCurvature scalar_curvature(const LiftingGerbe& Gb, const Lift& L,
                                 const std::vector<Mat>* frames, bool with_samples) {
    const CentralExtension& E = Gb.ext;
    const LatticeBundle& B = Gb.bundle;
    if (frames && static_cast<int>(frames->size()) != B.base.n_vertices)
        throw BaseMismatch("need one evaluation frame per vertex");
    validate_lift(Gb, L);

    auto value_at = [&](int f, const Mat& Hf) {
        const int v0 = B.base.face_base_vertex(f);
        Mat Xhat = E.Ghat->log(Hf);
        Mat c = frames ? (*frames)[v0] : B.G->identity();
        if (frames) {
            Mat qhat = lift_element_any(E, c);
            Xhat = qhat.inverse() * Xhat * qhat;
        }
        Mat Xg;
        Eigen::VectorXd ac = E.split_coords(Xhat, &Xg);
        return a_value(E, a_from(E, ac)) - a_value(E, Gb.reduce(v0, c, Xg));
    };

    ScalarCurvature out;
    out.face_values.resize(B.base.n_faces());
    for (int f = 0; f < B.base.n_faces(); ++f)
        out.face_values[f] = value_at(f, word_product(B.base.faces[f].word, L.edge_lift));

    if (with_samples) {
        std::vector<double> sv(B.base.n_faces());
        for (int f = 0; f < B.base.n_faces(); ++f) {
            EdgePath bp = make_path(B.base, B.base.faces[f].word);
            sv[f] = value_at(f, rho_hat_sequence(Gb, L, bp).back());
        }
        out.sampled_values = std::move(sv);
    }
    return out;
}

} // namespace gerbeloop
