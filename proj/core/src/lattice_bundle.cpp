#include "gerbeloop/lattice_bundle.hpp"

#include <cmath>

#include "gerbeloop/errors.hpp"

namespace gerbeloop {

namespace {

constexpr double kPi = 3.14159265358979323846;

int signed_tail(const Complex2& C, int s) {
    const Edge& e = C.edges[std::abs(s) - 1];
    return s > 0 ? e.tail : e.head;
}

int signed_head(const Complex2& C, int s) {
    const Edge& e = C.edges[std::abs(s) - 1];
    return s > 0 ? e.head : e.tail;
}

Mat rot_z(double a) {
    Mat m = Mat::Identity(3, 3);
    m(0, 0) = std::cos(a);
    m(0, 1) = -std::sin(a);
    m(1, 0) = std::sin(a);
    m(1, 1) = std::cos(a);
    return m;
}

bool same_matrix(const Mat& a, const Mat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.array() == b.array()).all();
}

} // namespace

EdgePath make_path(const Complex2& C, std::vector<int> word) {
    EdgePath p;
    p.word = std::move(word);
    p.start_vertex = p.word.empty() ? C.basepoint : signed_tail(C, p.word.front());
    validate_path(C, p);
    return p;
}

int path_end(const Complex2& C, const EdgePath& p) {
    return p.word.empty() ? p.start_vertex : signed_head(C, p.word.back());
}

bool path_closed(const Complex2& C, const EdgePath& p) {
    return p.start_vertex == path_end(C, p);
}

void validate_path(const Complex2& C, const EdgePath& p) {
    if (p.start_vertex < 0 || p.start_vertex >= C.n_vertices)
        throw InvalidPath("path start vertex out of range");
    for (size_t i = 0; i < p.word.size(); ++i) {
        int k = std::abs(p.word[i]);
        if (k < 1 || k > C.n_edges()) throw InvalidPath("edge index out of range");
        int from = i == 0 ? p.start_vertex : signed_head(C, p.word[i - 1]);
        if (signed_tail(C, p.word[i]) != from)
            throw InvalidPath("edge path does not chain at step " + std::to_string(i));
    }
}

EdgePath reversed_path(const Complex2& C, const EdgePath& p) {
    EdgePath out;
    out.start_vertex = path_end(C, p);
    out.word.assign(p.word.rbegin(), p.word.rend());
    for (int& s : out.word) s = -s;
    return out;
}

EdgePath concat_path(const Complex2& C, const EdgePath& p, const EdgePath& q) {
    if (path_end(C, p) != q.start_vertex)
        throw InvalidPath("paths do not compose");
    EdgePath out = p;
    out.word.insert(out.word.end(), q.word.begin(), q.word.end());
    return out;
}

EdgePath composite_loop(const Complex2& C, const EdgePath& g1, const EdgePath& g2) {
    if (g1.start_vertex != g2.start_vertex || path_end(C, g1) != path_end(C, g2))
        throw InvalidPath("composite loop needs paths with common endpoints");
    return concat_path(C, g1, reversed_path(C, g2));
}

void validate_triple(const Complex2& C, const PathTriple& t) {
    validate_path(C, t.gamma1);
    validate_path(C, t.gamma2);
    validate_path(C, t.gamma3);
    if (t.gamma1.start_vertex != t.gamma2.start_vertex ||
        t.gamma1.start_vertex != t.gamma3.start_vertex)
        throw InvalidPath("path triple start vertices differ");
    int y = path_end(C, t.gamma1);
    if (path_end(C, t.gamma2) != y || path_end(C, t.gamma3) != y)
        throw InvalidPath("path triple end vertices differ");
}

void LatticeBundle::validate() const {
    base.validate();
    if (static_cast<int>(edge_transport.size()) != base.n_edges())
        throw BaseMismatch("bundle needs one transport path per edge");
    for (const SampledPath& t : edge_transport) {
        if (t.points.size() < 2)
            throw InvalidPath("edge transport needs at least two samples");
        if (mat_dist(t.points.front(), G->identity()) > 1e-12)
            throw InvalidPath("edge transport must start at the identity");
        for (const Mat& m : t.points)
            if (!G->contains(m, 1e-8))
                throw BaseMismatch("edge transport sample leaves the structure group");
    }
}

Mat LatticeBundle::holonomy(const EdgePath& p) const {
    validate_path(base, p);
    Mat h = G->identity();
    for (int s : p.word) {
        const Mat& g = edge_holonomy(std::abs(s) - 1);
        h = (s > 0 ? g : Mat(g.inverse())) * h;
    }
    return h;
}

Mat LatticeBundle::face_holonomy(int f) const {
    return holonomy(make_path(base, base.faces[f].word));
}

Mat LatticeBundle::face_curvature(int f) const { return G->log(face_holonomy(f)); }

LatticeBundle make_flat_bundle(const Complex2& C, GroupPtr G, int samples_per_edge) {
    std::vector<Mat> ids(C.n_edges(), G->identity());
    LatticeBundle B = make_bundle(C, G, ids, samples_per_edge);
    B.name = "flat(" + C.name + ")";
    return B;
}

LatticeBundle make_bundle(const Complex2& C, GroupPtr G, const std::vector<Mat>& edge_elems,
                          int samples_per_edge) {
    if (static_cast<int>(edge_elems.size()) != C.n_edges())
        throw BaseMismatch("need one holonomy per edge");
    LatticeBundle B;
    B.name = "bundle(" + C.name + ")";
    B.base = C;
    B.G = G;
    for (const Mat& g : edge_elems)
        B.edge_transport.push_back(geodesic_from_identity(*G, g, samples_per_edge));
    B.validate();
    return B;
}

LatticeBundle bundle_so2_torus_flat() {
    LatticeBundle B = make_flat_bundle(complex_torus(), GroupDesc::so(2), 9);
    B.name = "so2-torus-flat";
    return B;
}

LatticeBundle bundle_r2_torus_flat() {
    auto G = GroupDesc::rn(2);
    Mat ta = G->identity(), tb = G->identity();
    ta(0, 2) = 1;
    tb(1, 2) = 1;
    LatticeBundle B = make_bundle(complex_torus(), G, {ta, tb}, 9);
    B.name = "r2-torus-flat";
    return B;
}

LatticeBundle bundle_so3_sphere_clutch(int k, int n) {
    if (n < 3) throw Unsupported("sphere clutch bundle needs n >= 3");
    Complex2 C = complex_sphere_clutch(n);
    LatticeBundle B;
    B.name = "so3-sphere-clutch-" + std::to_string(k);
    B.base = C;
    B.G = GroupDesc::so(3);
    B.edge_transport.assign(C.n_edges(), SampledPath{});
    auto constant_id = [&]() {
        SampledPath p;
        p.points = {B.G->identity(), B.G->identity()};
        return p;
    };
    for (int i = 0; i < n; ++i) B.edge_transport[i] = constant_id();     // north meridians
    for (int i = 0; i < n; ++i) B.edge_transport[n + i] = constant_id(); // equator
    for (int i = 0; i < n; ++i) {
        // South meridian i crosses the clutching band where the gauge twists
        // by the degree-k equator loop evaluated at angle 2 pi i / n; the
        // transport sweeps the full angle rather than its principal residue.
        double total = 2 * kPi * k * static_cast<double>(i) / n;
        int steps = std::max(1, static_cast<int>(std::ceil(std::abs(total) / (kPi / 4))));
        SampledPath p;
        for (int j = 0; j <= steps; ++j) p.points.push_back(rot_z(total * j / steps));
        B.edge_transport[2 * n + i] = p;
    }
    B.validate();
    return B;
}

LatticeBundle builtin_bundle(const std::string& name) {
    if (name == "so2-torus-flat") return bundle_so2_torus_flat();
    if (name == "r2-torus-flat") return bundle_r2_torus_flat();
    const std::string prefix = "so3-sphere-clutch-";
    if (name.rfind(prefix, 0) == 0) {
        std::string rest = name.substr(prefix.size());
        int n = 8;
        auto paren = rest.find('(');
        if (paren != std::string::npos && rest.back() == ')') {
            n = std::stoi(rest.substr(paren + 1, rest.size() - paren - 2));
            rest = rest.substr(0, paren);
        }
        return bundle_so3_sphere_clutch(std::stoi(rest), n);
    }
    throw Unsupported("unknown builtin bundle " + name);
}

LatticeBundle gauge_transform(const LatticeBundle& B, const std::vector<Mat>& u) {
    if (static_cast<int>(u.size()) != B.base.n_vertices)
        throw BaseMismatch("need one gauge element per vertex");
    for (const Mat& m : u)
        if (!B.G->contains(m, 1e-8))
            throw BaseMismatch("gauge element outside the structure group");
    LatticeBundle out = B;
    out.name = B.name + "/gauge";
    for (int e = 0; e < B.base.n_edges(); ++e) {
        const Mat& ut = u[B.base.edges[e].tail];
        const Mat& uh = u[B.base.edges[e].head];
        Mat X = B.G->log(ut.inverse() * uh);
        const auto& pts = B.edge_transport[e].points;
        const int P = static_cast<int>(pts.size());
        for (int i = 0; i < P; ++i) {
            double s = smooth_step(static_cast<double>(i) / (P - 1));
            Mat w = ut * B.G->exp(s * X);
            out.edge_transport[e].points[i] = w * pts[i] * ut.inverse();
        }
    }
    out.validate();
    return out;
}

LatticeBundle refine_bundle(const LatticeBundle& B) {
    LatticeBundle out = B;
    out.name = B.name + "/fine";
    for (auto& path : out.edge_transport) {
        std::vector<Mat> pts;
        pts.reserve(2 * path.points.size());
        for (size_t i = 0; i + 1 < path.points.size(); ++i) {
            const Mat& a = path.points[i];
            const Mat& b = path.points[i + 1];
            pts.push_back(a);
            Mat step = a.inverse() * b;
            pts.push_back(a * B.G->exp(0.5 * B.G->log(step)));
        }
        pts.push_back(path.points.back());
        path.points = std::move(pts);
    }
    out.validate();
    return out;
}

std::vector<Mat> rho_sequence(const LatticeBundle& B, const EdgePath& p,
                              std::vector<int>* edge_sample_begin) {
    validate_path(B.base, p);
    std::vector<Mat> rho;
    rho.push_back(B.G->identity());
    if (edge_sample_begin) edge_sample_begin->clear();
    for (int s : p.word) {
        if (edge_sample_begin) edge_sample_begin->push_back(static_cast<int>(rho.size()) - 1);
        const auto& pts = B.edge_transport[std::abs(s) - 1].points;
        const int P = static_cast<int>(pts.size());
        Mat at_start = rho.back();
        for (int j = 1; j < P; ++j) {
            Mat step = s > 0 ? pts[j] : Mat(pts[P - 1 - j] * pts[P - 1].inverse());
            rho.push_back(step * at_start);
        }
    }
    if (edge_sample_begin) edge_sample_begin->push_back(static_cast<int>(rho.size()) - 1);
    return rho;
}

BundlePath lift_horizontal(const LatticeBundle& B, const EdgePath& p, const Mat& start_frame) {
    if (!B.G->contains(start_frame, 1e-8))
        throw BaseMismatch("start frame outside the structure group");
    BundlePath out;
    out.start_vertex = p.start_vertex;
    out.base = p;
    out.rho = rho_sequence(B, p, &out.edge_sample_begin);
    out.frames.reserve(out.rho.size());
    for (const Mat& r : out.rho) out.frames.push_back(r * start_frame);
    out.closed = path_closed(B.base, p) &&
                 mat_dist(out.frames.front(), out.frames.back()) < 1e-9;
    return out;
}

LoopLift horizontal_loop_lift(const LatticeBundle& B, const EdgePath& loop,
                              bool connected_group, const Mat& start_frame) {
    if (!path_closed(B.base, loop) || loop.word.empty())
        throw InvalidPath("loop lifting needs a nonempty closed edge path");
    if (!B.G->contains(start_frame, 1e-8))
        throw BaseMismatch("start frame outside the structure group");
    std::vector<int> begins;
    std::vector<Mat> rho = rho_sequence(B, loop, &begins);

    Mat defect = start_frame.inverse() * rho.back() * start_frame;
    Mat Y;
    if (connected_group) {
        try {
            Y = B.G->log(defect);
        } catch (const Error&) {
            throw CannotClose("holonomy defect cannot be joined to the identity");
        }
    } else {
        if (mat_dist(defect, B.G->identity()) > 1e-9)
            throw CannotClose("holonomy defect lies outside the identity component");
        Y = Mat::Zero(defect.rows(), defect.cols());
    }

    LoopLift L;
    L.base_loop = loop;
    const int steps = loop.steps();
    for (int k = 0; k <= steps; ++k) L.fiber_points.push_back(rho[begins[k]] * start_frame);

    for (int k = 0; k < steps; ++k) {
        SampledPath seg;
        seg.sitting_instants = true;
        const int P = begins[k + 1] - begins[k] + 1;
        for (int j = 0; j < P; ++j) {
            Mat v = rho[begins[k] + j] * start_frame;
            if (k == steps - 1) {
                double u = smooth_step(static_cast<double>(j) / (P - 1));
                v = v * B.G->exp(-u * Y);
            }
            seg.points.push_back(v);
        }
        L.segment_paths.push_back(std::move(seg));
    }
    L.fiber_points.back() = L.fiber_points.front();
    L.segment_paths.back().points.back() = L.fiber_points.front();
    return L;
}

LoopLift horizontal_loop_lift(const LatticeBundle& B, const EdgePath& loop,
                              bool connected_group) {
    return horizontal_loop_lift(B, loop, connected_group, B.G->identity());
}

void validate_loop_lift(const LatticeBundle& B, const LoopLift& L) {
    validate_path(B.base, L.base_loop);
    if (!path_closed(B.base, L.base_loop))
        throw InvalidPath("loop lift base is not closed");
    const int steps = L.base_loop.steps();
    if (static_cast<int>(L.fiber_points.size()) != steps + 1 ||
        static_cast<int>(L.segment_paths.size()) != steps)
        throw InvalidPath("loop lift has wrong segment structure");
    if (!same_matrix(L.fiber_points.front(), L.fiber_points.back()))
        throw InvalidPath("loop lift does not close");
    for (int k = 0; k < steps; ++k) {
        const auto& seg = L.segment_paths[k].points;
        size_t want = B.edge_transport[std::abs(L.base_loop.word[k]) - 1].points.size();
        if (seg.size() != want)
            throw InvalidPath("loop lift segment sampling disagrees with the edge refinement");
        if (mat_dist(seg.front(), L.fiber_points[k]) > 1e-9 ||
            mat_dist(seg.back(), L.fiber_points[k + 1]) > 1e-9)
            throw InvalidPath("loop lift segment endpoints disagree with fiber points");
        for (const Mat& m : seg)
            if (!B.G->contains(m, 1e-8))
                throw BaseMismatch("loop lift sample leaves the structure group");
    }
}

LoopLift fiber_inserted(const LatticeBundle& B, const LoopLift& L, int step,
                        const SampledPath& loop_in_G) {
    if (step < 0 || step >= L.base_loop.steps())
        throw InvalidPath("fiber insertion step out of range");
    const auto& pts = loop_in_G.points;
    const int Q = static_cast<int>(pts.size());
    if (Q < 2 || mat_dist(pts.front(), B.G->identity()) > 1e-12 ||
        mat_dist(pts.back(), B.G->identity()) > 1e-12)
        throw InvalidPath("inserted fiber loop must start and end at the identity");

    auto eval = [&](double t) -> Mat {
        double x = t * (Q - 1);
        int q = std::min(Q - 2, static_cast<int>(std::floor(x)));
        double f = x - q;
        if (f < 1e-15) return pts[q];
        return pts[q] * B.G->exp(f * B.G->log(pts[q].inverse() * pts[q + 1]));
    };

    LoopLift out = L;
    auto& seg = out.segment_paths[step].points;
    const int P = static_cast<int>(seg.size());
    for (int j = 1; j < P - 1; ++j)
        seg[j] = seg[j] * eval(static_cast<double>(j) / (P - 1));
    return out;
}

BundlePath fiber_loop(const LatticeBundle& B, int vertex, const SampledPath& frames) {
    if (vertex < 0 || vertex >= B.base.n_vertices)
        throw BaseMismatch("fiber loop vertex out of range");
    if (frames.points.size() < 2) throw InvalidPath("fiber loop needs at least two samples");
    BundlePath out;
    out.start_vertex = vertex;
    out.base.start_vertex = vertex;
    out.rho.assign(frames.points.size(), B.G->identity());
    out.frames = frames.points;
    out.edge_sample_begin = {0};
    out.closed = mat_dist(out.frames.front(), out.frames.back()) < 1e-9;
    return out;
}

BundlePath to_bundle_path(const LatticeBundle& B, const LoopLift& L) {
    validate_loop_lift(B, L);
    BundlePath out;
    out.start_vertex = L.base_loop.start_vertex;
    out.base = L.base_loop;
    out.rho = rho_sequence(B, L.base_loop, &out.edge_sample_begin);
    out.frames.push_back(L.fiber_points.front());
    for (const SampledPath& seg : L.segment_paths)
        for (size_t j = 1; j < seg.points.size(); ++j) out.frames.push_back(seg.points[j]);
    if (out.frames.size() != out.rho.size())
        throw InvalidPath("loop lift sampling disagrees with the bundle refinement");
    out.closed = true;
    return out;
}

BundlePath subpath(const LatticeBundle& B, const BundlePath& p, int a, int b) {
    if (a < 0 || b < 0 || a >= p.samples() || b >= p.samples())
        throw InvalidPath("subpath range out of bounds");
    BundlePath out;
    out.start_vertex = p.start_vertex;
    const int n = std::abs(b - a) + 1;
    const int dir = b >= a ? 1 : -1;
    Mat base_inv = p.rho[a].inverse();
    for (int j = 0; j < n; ++j) {
        int idx = a + dir * j;
        out.frames.push_back(p.frames[idx]);
        out.rho.push_back(p.rho[idx] * base_inv);
    }
    out.edge_sample_begin = {0};
    out.closed = mat_dist(out.frames.front(), out.frames.back()) < 1e-9;
    return out;
}

BundlePath gauge_transform_path(const LatticeBundle& B, const std::vector<Mat>& u,
                                const BundlePath& path) {
    BundlePath out = path;
    auto apply = [&](int idx, const Mat& w) {
        out.frames[idx] = w * path.frames[idx];
        out.rho[idx] = w * path.rho[idx];
    };
    for (size_t j = 0; j < path.base.word.size(); ++j) {
        int s = path.base.word[j];
        const Edge& e = B.base.edges[std::abs(s) - 1];
        const Mat& ut = u[e.tail];
        Mat X = B.G->log(ut.inverse() * u[e.head]);
        const int P = static_cast<int>(B.edge_transport[std::abs(s) - 1].points.size());
        // Shared boundary samples get written by both incident edges; the
        // interpolated gauge agrees there, so the double write is harmless.
        for (int i = 0; i < P; ++i) {
            int fwd = s > 0 ? i : P - 1 - i;
            double sp = smooth_step(static_cast<double>(fwd) / (P - 1));
            apply(path.edge_sample_begin[j] + i, ut * B.G->exp(sp * X));
        }
    }
    // A fiber tail sits over a single vertex where the gauge is constant.
    int tail_begin = path.base.word.empty() ? 0 : path.edge_sample_begin.back() + 1;
    const Mat& uv = u[path_end(B.base, path.base)];
    for (int idx = tail_begin; idx < path.samples(); ++idx) apply(idx, uv);
    return out;
}

} // namespace gerbeloop
