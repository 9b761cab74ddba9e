#include "gerbeloop/spin_structures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace gerbeloop {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
    Eigen::Matrix3d K;
    K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * K +
           (1.0 - std::cos(angle)) * K * K;
}

FrameBundleModel sphere_model() {
    FrameBundleModel FM;
    FM.name = "sphere";
    FM.surface = complex_octahedron();
    FM.expected_curvature_total = 4.0 * kPi;

    const Eigen::Vector3d ex(1, 0, 0), ey(0, 1, 0), ez(0, 0, 1);
    auto frame = [](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
        Eigen::Matrix<double, 3, 2> F;
        F.col(0) = u;
        F.col(1) = v;
        return F;
    };
    FM.vertex_frames = {frame(ey, ez), frame(ez, ex), frame(ex, ey),
                        frame(ez, ey), frame(ex, ez), frame(ey, ex)};

    std::vector<Mat> elems;
    for (const Edge& e : FM.surface.edges) {
        Eigen::Vector3d a = FM.surface.positions[e.tail];
        Eigen::Vector3d b = FM.surface.positions[e.head];
        Eigen::Vector3d axis = a.cross(b);
        double angle = std::atan2(axis.norm(), a.dot(b));
        Eigen::Matrix3d R = rodrigues(axis.normalized(), angle);
        Eigen::Matrix2d g =
            FM.vertex_frames[e.head].transpose() * R * FM.vertex_frames[e.tail];
        elems.push_back(g.cast<std::complex<double>>());
    }
    FM.bundle = make_bundle(FM.surface, GroupDesc::so(2), elems, 17);
    FM.bundle.name = "frame(sphere)";
    return FM;
}

FrameBundleModel flat_model(const std::string& name, const Complex2& C) {
    FrameBundleModel FM;
    FM.name = name;
    FM.surface = C;
    FM.bundle = make_flat_bundle(C, GroupDesc::so(2), 5);
    FM.bundle.name = "frame(" + name + ")";
    FM.expected_curvature_total = 0.0;
    return FM;
}

double so2_angle(const GroupPtr& G, const Mat& X) { return G->algebra_coords(X)(0); }

} // namespace

double FrameBundleModel::curvature_total() const {
    double total = 0.0;
    for (int f = 0; f < surface.n_faces(); ++f)
        total += so2_angle(bundle.G, bundle.face_curvature(f));
    return total;
}

void FrameBundleModel::validate(double tol) const {
    surface.validate();
    bundle.validate();
    if (!vertex_frames.empty() &&
        static_cast<int>(vertex_frames.size()) != surface.n_vertices)
        throw BaseMismatch("need one embedding frame per vertex");
    if (std::abs(curvature_total() - expected_curvature_total) > tol)
        throw BaseMismatch("face curvature total off its target");
}

FrameBundleModel frame_bundle_model(const std::string& name) {
    FrameBundleModel FM;
    if (name == "sphere" || name == "octahedron")
        FM = sphere_model();
    else if (name == "torus")
        FM = flat_model("torus", complex_torus());
    else if (name == "genus2")
        FM = flat_model("genus2", complex_genus(2));
    else
        throw Unsupported("unknown frame bundle model " + name);
    FM.validate();
    return FM;
}

LiftingGerbe frame_gerbe(const FrameBundleModel& FM, const std::string& extension_name) {
    CentralExtension E = make_extension(extension_name);
    if (E.G->name() != FM.bundle.G->name())
        throw BaseMismatch("extension base group does not match the frame bundle");
    return make_gerbe(FM.bundle, std::move(E));
}

SampledPath one_parameter_loop(const GroupPtr& G, const Mat& X, int samples) {
    if (samples < 1) throw InvalidPath("need at least one step");
    if (!G->algebra_contains(X, 1e-9))
        throw BaseMismatch("direction is not in the group's algebra");
    SampledPath p;
    for (int i = 0; i <= samples; ++i)
        p.points.push_back(G->exp((static_cast<double>(i) / samples) * X));
    return p;
}

namespace {

int lift_sign(const CentralExtension& E, const SampledPath& loop) {
    SampledPath lifted = horizontal_lift_path(E, loop, E.Ghat->identity());
    Mat d = kernel_defect(E, lifted, 1e-6);
    double v = d(0, 0).real();
    if (std::abs(std::abs(v) - 1.0) > 1e-6)
        throw MeshTooCoarse("spin lift defect is not a unit");
    return v > 0 ? 1 : -1;
}

} // namespace

int monodromy(const GroupPtr& son, const SampledPath& loop) {
    if (son->kind != GroupKind::SOn)
        throw Unsupported("monodromy is defined on SO(n) loops");
    if (loop.points.size() < 3) throw InvalidPath("loop needs at least two steps");
    if (mat_dist(loop.points.front(), loop.points.back()) > 1e-9)
        throw InvalidPath("monodromy input must be a closed loop");
    for (const Mat& p : loop.points)
        if (!son->contains(p, 1e-8))
            throw BaseMismatch("loop sample leaves SO(n)");
    CentralExtension E = make_extension("spin(" + std::to_string(son->n) + ")");

    int fine = lift_sign(E, loop);
    SampledPath coarse;
    for (size_t i = 0; i < loop.points.size(); i += 2)
        coarse.points.push_back(loop.points[i]);
    if ((loop.points.size() - 1) % 2) coarse.points.push_back(loop.points.back());
    int half = lift_sign(E, coarse);
    if (half != fine)
        throw MeshTooCoarse("monodromy value changes under half-sampling");
    return fine;
}

CensusReport spin_census(const FrameBundleModel& FM) {
    CensusReport rep;
    rep.surface = FM.name;
    LiftingGerbe Gb = frame_gerbe(FM, "spin(2)");
    rep.obstruction_vanishes = obstruction_class(Gb).solvable;
    rep.h1_count = static_cast<int>(h1_representatives(FM.surface, 2).size());
    if (rep.obstruction_vanishes)
        rep.lift_classes = static_cast<int>(enumerate_lifts(Gb).size());

    LoopRegistry R = make_loop_registry(FM.surface);
    rep.lasso_count = R.n_lassos();
    if (rep.lasso_count > 16)
        throw Unsupported("census search budget is 2^16 candidates");
    rep.candidates = 1 << rep.lasso_count;

    std::vector<std::vector<double>> patterns;
    for (int mask = 0; mask < rep.candidates; ++mask) {
        Cochain alpha = Cochain::zeros(FM.surface, 1, Ring::Zm, 2);
        for (int i = 0; i < rep.lasso_count; ++i)
            if (mask >> i & 1) alpha.vals(R.lasso_edges[i]) = 1.0;
        Lift L;
        try {
            L = twisted_lift(Gb, alpha);
        } catch (const Error&) {
            continue;
        }
        LoopSection s = section_from_lift(Gb, R, L);
        if (!verify_section(Gb, R, s).passed) continue;
        std::vector<double> pat;
        pat.reserve(s.assignment.size());
        for (const LoopFiberElement& fe : s.assignment)
            pat.push_back(Gb.ext.a_scalar(fe.a_value));
        bool dup = false;
        for (const auto& q : patterns) {
            double d = 0.0;
            for (size_t j = 0; j < q.size(); ++j)
                d = std::max(d, std::abs(q[j] - pat[j]));
            if (d < 1e-6) {
                dup = true;
                break;
            }
        }
        if (!dup) patterns.push_back(std::move(pat));
    }
    rep.fusion_sections = static_cast<int>(patterns.size());
    rep.counts_agree = rep.obstruction_vanishes &&
                       rep.lift_classes == rep.fusion_sections &&
                       rep.fusion_sections == rep.h1_count;
    return rep;
}

OrientationGapReport orientation_vs_fusion_gap(const Complex2& C, const Cochain& synthetic) {
    if (synthetic.degree != 2 || synthetic.ring != Ring::Zm || synthetic.mod != 2 ||
        synthetic.vals.size() != C.n_faces())
        throw BaseMismatch("synthetic obstruction must be a mod-2 face cochain");
    OrientationGapReport rep;
    rep.cocycle = true;
    rep.class_trivial = solve_coboundary(C, synthetic).solvable;
    rep.h1_count = static_cast<int>(h1_representatives(C, 2).size());
    rep.fusion_sections_exist = rep.class_trivial;
    rep.fusion_section_count = rep.class_trivial ? rep.h1_count : 0;

    long long total = 0;
    for (int f = 0; f < C.n_faces(); ++f) total += synthetic.ival(f);
    rep.plain_sections_exist = total % 2 == 0;
    rep.gap = rep.plain_sections_exist && !rep.fusion_sections_exist;

    if (!rep.plain_sections_exist) {
        int f0 = 0;
        while (synthetic.ival(f0) == 0) ++f0;
        rep.witness = "sweep cycle through face " + std::to_string(f0) +
                      " flips the fiber (odd total parity)";
    } else if (rep.gap) {
        LoopRegistry R = make_loop_registry(C);
        auto triples = registry_triples(R);
        if (!triples.empty()) {
            const RegistryTriple& t = triples.front();
            rep.witness = "fusion constraint on registered composites (" +
                          std::to_string(t.b12) + ", " + std::to_string(t.b23) + ", " +
                          std::to_string(t.b13) + ") is unsatisfiable";
        } else {
            rep.witness = "no registered triple available to witness the gap";
        }
    }
    rep.note = "formal cocycle input; no geometric model is constructed";
    return rep;
}

namespace {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a > kPi) a -= 2.0 * kPi;
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

} // namespace

Factor2Report spinc_factor2(const LiftingGerbe& Gb, const Lift& L, double tol) {
    if (Gb.ext.kind != ExtKind::SpinC)
        throw Unsupported("determinant data needs a spinc extension");
    validate_lift(Gb, L);
    const auto& cl = Gb.ext.Ghat->cl;
    const Complex2& C = Gb.bundle.base;

    std::vector<std::complex<double>> z2(C.n_edges());
    for (int e = 0; e < C.n_edges(); ++e) {
        const Mat& g = L.edge_lift[e];
        Mat rev = cl->matrix_of(cl->reverse(cl->coeffs_of(g)));
        std::complex<double> z = (g * rev)(0, 0);
        if (std::abs(std::abs(z) - 1.0) > 1e-8)
            throw BaseMismatch("edge lift has no unit squaring character");
        z2[e] = z / std::abs(z);
    }

    Factor2Report rep;
    rep.scalar_face_values = scalar_curvature(Gb, L).face_values;
    for (int f = 0; f < C.n_faces(); ++f) {
        std::complex<double> prod = 1.0;
        for (int s : C.faces[f].word) prod *= s > 0 ? z2[s - 1] : std::conj(z2[-s - 1]);
        double dc = std::arg(prod);
        rep.det_face_curvature.push_back(dc);
        rep.max_error = std::max(
            rep.max_error, std::abs(wrap_angle(dc - 2.0 * rep.scalar_face_values[f])));
    }
    rep.passed = rep.max_error <= tol;
    return rep;
}

Cochain sample_flat_u1_twist(const Complex2& C, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Cochain a = Cochain::zeros(C, 1, Ring::U1);
    for (int e = 0; e < C.n_edges(); ++e) a.vals(e) = unit(rng);
    CohomologySolution sol = solve_coboundary(C, coboundary(C, a));
    if (!sol.solvable || !sol.witness)
        throw Error("could not flatten a sampled twist on " + C.name);
    a = cochain_sub(a, *sol.witness);
    a.reduce();
    return a;
}

namespace {

double circle_gap(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

} // namespace

SpincBijectionReport spinc_bijection(const LiftingGerbe& Gb, const LoopRegistry& R,
                                     const std::vector<Cochain>& twists,
                                     const std::vector<double>& rho_faces, double tol) {
    if (Gb.ext.kind != ExtKind::SpinC)
        throw Unsupported("bijection round trip needs a spinc extension");
    SpincBijectionReport rep;
    rep.n_samples = static_cast<int>(twists.size());

    std::vector<double> rho = rho_faces;
    if (rho.empty()) rho = scalar_curvature(Gb, witness_lift(Gb)).face_values;
    if (static_cast<int>(rho.size()) != Gb.bundle.base.n_faces())
        throw BaseMismatch("need one target curvature value per face");

    std::vector<LoopSection> sections;
    for (const Cochain& alpha : twists) {
        Lift L = twisted_lift(Gb, alpha);
        LoopSection s = section_from_lift(Gb, R, L);
        RoundTrip trip;
        double cerr = 0.0;
        for (size_t f = 0; f < rho.size(); ++f)
            cerr = std::max(cerr, std::abs(s.claimed_curvature[f] - rho[f]));
        trip.curvature_matches = cerr <= tol;
        trip.max_error = cerr;

        SectionReport v = verify_section(Gb, R, s, tol);
        trip.section_verifies = v.passed;
        trip.max_error = std::max({trip.max_error, v.max_fusion_error, v.max_curvature_error});

        try {
            Lift back = lift_from_section(Gb, R, s);
            trip.reconstructed_equivalent = lifts_equivalent(Gb, L, back, 1e-6);
        } catch (const Error&) {
            trip.reconstructed_equivalent = false;
        }

        if (trip.section_verifies && trip.reconstructed_equivalent && trip.curvature_matches)
            ++rep.round_trips_passed;
        rep.max_error = std::max(rep.max_error, trip.max_error);
        rep.trips.push_back(trip);
        sections.push_back(std::move(s));
    }

    for (size_t i = 0; i < sections.size(); ++i)
        for (size_t j = i + 1; j < sections.size(); ++j) {
            Cochain d = cochain_sub(twists[i], twists[j]);
            bool cohomologous = is_coboundary(Gb.bundle.base, d, 1e-8);
            double gap = 0.0;
            for (size_t k = 0; k < sections[i].assignment.size(); ++k)
                gap = std::max(gap,
                               circle_gap(Gb.ext.a_scalar(sections[i].assignment[k].a_value),
                                          Gb.ext.a_scalar(sections[j].assignment[k].a_value)));
            if (cohomologous ? gap > tol : gap <= tol) rep.distinct_sections_ok = false;
        }

    rep.passed = rep.round_trips_passed == rep.n_samples && rep.distinct_sections_ok;
    return rep;
}

} // namespace gerbeloop
