#include "gerbeloop/extension.hpp"

#include <cctype>
#include <cmath>

#include "gerbeloop/errors.hpp"

namespace gerbeloop {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest rotation angle present in an algebra element, read off the
// spectrum. Nilpotent algebras report zero, which is what we want: their
// exponential charts are global.
double max_angle(const Mat& X) {
    Eigen::ComplexEigenSolver<Mat> es(X, false);
    double a = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        a = std::max(a, std::abs(es.eigenvalues()(i).imag()));
    return a;
}

Mat blockdiag(const Mat& a, const Mat& b) {
    Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

std::string strip_spaces(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

} // namespace

Mat CentralExtension::t(const Mat& ghat) const {
    switch (kind) {
    case ExtKind::Spin:
    case ExtKind::SpinC:
        return Ghat->cl->vector_action(ghat).cast<std::complex<double>>();
    case ExtKind::Heisenberg: {
        Mat m = Mat::Identity(3, 3);
        m(0, 2) = ghat(0, 1);
        m(1, 2) = ghat(1, 2);
        return m;
    }
    case ExtKind::Trivial:
        return ghat.bottomRightCorner(G->mat_dim(), G->mat_dim());
    }
    throw Unsupported("unknown extension kind");
}

Mat CentralExtension::incl(const Mat& a) const {
    const int d = Ghat->mat_dim();
    switch (kind) {
    case ExtKind::Spin:
    case ExtKind::SpinC:
        return a(0, 0) * Mat::Identity(d, d);
    case ExtKind::Heisenberg: {
        Mat m = Mat::Identity(3, 3);
        m(0, 2) = a(0, 1);
        return m;
    }
    case ExtKind::Trivial:
        return blockdiag(a, Mat::Identity(G->mat_dim(), G->mat_dim()));
    }
    throw Unsupported("unknown extension kind");
}

Mat CentralExtension::incl_inv(const Mat& k, double tol) const {
    Mat a;
    switch (kind) {
    case ExtKind::Spin:
        a = Mat::Constant(1, 1, k(0, 0).real() < 0 ? -1.0 : 1.0);
        break;
    case ExtKind::SpinC: {
        std::complex<double> z = k(0, 0);
        double r = std::abs(z);
        if (r < 0.5) throw NotInKernel("spinc kernel element has non-unit scalar part");
        a = Mat::Constant(1, 1, z / r);
        break;
    }
    case ExtKind::Heisenberg: {
        a = Mat::Identity(2, 2);
        a(0, 1) = k(0, 2).real();
        break;
    }
    case ExtKind::Trivial: {
        a = k.topLeftCorner(A->mat_dim(), A->mat_dim());
        if (A->is_discrete()) {
            // Snap to the exact group element so downstream cochain
            // arithmetic stays integral.
            double best = 1e30;
            Mat snapped = a;
            for (const Mat& e : A->elements()) {
                double d = mat_dist(e, a);
                if (d < best) { best = d; snapped = e; }
            }
            a = snapped;
        }
        break;
    }
    default:
        throw Unsupported("unknown extension kind");
    }
    double defect = mat_dist(incl(a), k);
    if (defect > tol)
        throw NotInKernel("element is not in the extension kernel (defect " +
                          std::to_string(defect) + ")");
    return a;
}

bool CentralExtension::in_kernel(const Mat& k, double tol) const {
    try {
        incl_inv(k, tol);
        return true;
    } catch (const NotInKernel&) {
        return false;
    }
}

Mat CentralExtension::t_star(const Mat& Xhat) const {
    return G->algebra_from_coords(tstar_mat * Ghat->algebra_coords(Xhat));
}

Mat CentralExtension::sigma(const Mat& X) const {
    return Ghat->algebra_from_coords(sigma_mat * G->algebra_coords(X));
}

Eigen::VectorXd CentralExtension::a_coords(const Mat& kernel_alg) const {
    const int n = a_dim();
    Eigen::VectorXd c(n);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        // The incl_* basis elements are mutually orthogonal in the Frobenius
        // inner product for every builtin, so projection coefficients suffice.
        double bb = a_alg_basis[i].cwiseAbs2().sum();
        c(i) = (a_alg_basis[i].conjugate().cwiseProduct(kernel_alg)).sum().real() / bb;
        norm2 += bb;
    }
    Mat resid = kernel_alg - a_from_coords(c);
    if (resid.norm() > 1e-7 * std::max(1.0, kernel_alg.norm()))
        throw NotInKernel("algebra element has a component outside the kernel algebra");
    return c;
}

Mat CentralExtension::a_from_coords(const Eigen::VectorXd& c) const {
    Mat m = Mat::Zero(Ghat->mat_dim(), Ghat->mat_dim());
    for (int i = 0; i < a_dim(); ++i) m += c(i) * a_alg_basis[i];
    return m;
}

Eigen::VectorXd CentralExtension::split_coords(const Mat& Xhat, Mat* g_part) const {
    Mat Xg = t_star(Xhat);
    Eigen::VectorXd c = a_coords(Xhat - sigma(Xg));
    if (g_part) *g_part = Xg;
    return c;
}

double CentralExtension::a_scalar(const Mat& a_element) const {
    switch (A->kind) {
    case GroupKind::Z2:
        return a_element(0, 0).real() < 0 ? 1.0 : 0.0;
    case GroupKind::Zm: {
        double th = std::arg(a_element(0, 0)) / (2 * kPi);
        double k = std::round(th * A->n);
        return std::fmod(std::fmod(k, A->n) + A->n, A->n);
    }
    case GroupKind::U1: {
        double th = std::arg(a_element(0, 0)) / (2 * kPi);
        return th - std::floor(th);
    }
    case GroupKind::RealLine:
        return a_element(0, 1).real();
    default:
        throw Unsupported("no scalar coordinate for this kernel group");
    }
}

Mat CentralExtension::a_element_from_scalar(double v) const {
    switch (A->kind) {
    case GroupKind::Z2:
        return Mat::Constant(1, 1, std::fmod(std::fmod(v, 2.0) + 2.0, 2.0) > 0.5 ? -1.0 : 1.0);
    case GroupKind::Zm:
        return Mat::Constant(1, 1, std::polar(1.0, 2 * kPi * v / A->n));
    case GroupKind::U1:
        return Mat::Constant(1, 1, std::polar(1.0, 2 * kPi * v));
    case GroupKind::RealLine: {
        Mat m = Mat::Identity(2, 2);
        m(0, 1) = v;
        return m;
    }
    default:
        throw Unsupported("no scalar coordinate for this kernel group");
    }
}

namespace {

// t_* on a single Ghat-algebra basis element, computed from the exact form of
// t for each kind rather than by finite differences.
Mat project_alg(const CentralExtension& E, const Mat& B) {
    switch (E.kind) {
    case ExtKind::Spin:
    case ExtKind::SpinC:
        return E.Ghat->cl->vector_action_deriv(B).cast<std::complex<double>>();
    case ExtKind::Heisenberg: {
        Mat m = Mat::Zero(3, 3);
        m(0, 2) = B(0, 1);
        m(1, 2) = B(1, 2);
        return m;
    }
    case ExtKind::Trivial:
        return B.bottomRightCorner(E.G->mat_dim(), E.G->mat_dim());
    }
    throw Unsupported("unknown extension kind");
}

void finish_extension(CentralExtension& E) {
    const auto hat_basis = E.Ghat->algebra_basis();
    const int dh = static_cast<int>(hat_basis.size());
    const int dg = E.G->alg_dim();
    E.tstar_mat.resize(dg, dh);
    for (int j = 0; j < dh; ++j)
        E.tstar_mat.col(j) = E.G->algebra_coords(project_alg(E, hat_basis[j]));
    E.sigma_mat = E.tstar_mat.completeOrthogonalDecomposition().pseudoInverse();
    Eigen::MatrixXd check = E.tstar_mat * E.sigma_mat;
    if ((check - Eigen::MatrixXd::Identity(dg, dg)).norm() > 1e-10)
        throw SplitMismatch("projection derivative is not surjective");

    // incl_* images of the kernel's algebra basis inside Ghat's algebra.
    const int d = E.Ghat->mat_dim();
    switch (E.kind) {
    case ExtKind::Spin:
        break; // discrete kernel, no algebra
    case ExtKind::SpinC:
        E.a_alg_basis.push_back(std::complex<double>(0, 1) * Mat::Identity(d, d));
        break;
    case ExtKind::Heisenberg: {
        Mat m = Mat::Zero(3, 3);
        m(0, 2) = 1;
        E.a_alg_basis.push_back(m);
        break;
    }
    case ExtKind::Trivial:
        for (const Mat& b : E.A->algebra_basis())
            E.a_alg_basis.push_back(
                blockdiag(b, Mat::Zero(E.G->mat_dim(), E.G->mat_dim())));
        break;
    }
    E.kernel_is_discrete = E.A->is_discrete();
}

} // namespace

CentralExtension make_extension(const std::string& raw) {
    const std::string name = strip_spaces(raw);
    CentralExtension E;
    E.descr = name;
    auto arg_of = [&](const std::string& prefix) -> std::string {
        return name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    };
    if (name.rfind("spin(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(arg_of("spin"));
        if (n < 2 || n > 4)
            throw Unsupported("spin(n) supported for n in {2,3,4}, got " + name);
        E.kind = ExtKind::Spin;
        E.A = GroupDesc::z2();
        E.Ghat = GroupDesc::spin(n);
        E.G = GroupDesc::so(n);
    } else if (name.rfind("spinc(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(arg_of("spinc"));
        if (n < 2 || n > 4)
            throw Unsupported("spinc(n) supported for n in {2,3,4}, got " + name);
        E.kind = ExtKind::SpinC;
        E.A = GroupDesc::u1();
        E.Ghat = GroupDesc::spinc(n);
        E.G = GroupDesc::so(n);
    } else if (name == "heisenberg") {
        E.kind = ExtKind::Heisenberg;
        E.A = GroupDesc::real_line();
        E.Ghat = GroupDesc::heisenberg();
        E.G = GroupDesc::rn(2);
    } else if (name.rfind("trivial(", 0) == 0 && name.back() == ')') {
        std::string args = arg_of("trivial");
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw Unsupported("trivial(A,G) needs two arguments, got " + name);
        std::string a = args.substr(0, comma), g = args.substr(comma + 1);
        GroupPtr A, G;
        if (a == "R") A = GroupDesc::real_line();
        else if (a == "U1") A = GroupDesc::u1();
        else if (a == "Z2") A = GroupDesc::z2();
        else if (a.size() == 2 && a[0] == 'Z' && a[1] >= '3' && a[1] <= '9')
            A = GroupDesc::zm(a[1] - '0');
        else throw Unsupported("unknown kernel group " + a);
        if (g == "SO(2)") G = GroupDesc::so(2);
        else if (g == "SO(3)") G = GroupDesc::so(3);
        else if (g == "SO(4)") G = GroupDesc::so(4);
        else if (g == "R1") G = GroupDesc::rn(1);
        else if (g == "R2") G = GroupDesc::rn(2);
        else if (g == "R3") G = GroupDesc::rn(3);
        else throw Unsupported("unknown base group " + g);
        E.kind = ExtKind::Trivial;
        E.A = A;
        E.G = G;
        E.Ghat = GroupDesc::product(A, G);
    } else {
        throw Unsupported("unknown extension name " + raw);
    }
    finish_extension(E);
    return E;
}

AlgebraElement compute_omega(const CentralExtension& E, const Mat& X, const Mat& Y) {
    Mat sX = E.sigma(X), sY = E.sigma(Y);
    Mat D = sX * sY - sY * sX - E.sigma(X * Y - Y * X);
    if (E.t_star(D).norm() > 1e-9 * std::max(1.0, D.norm()))
        throw SplitMismatch("omega value escaped the kernel algebra");
    return {E.A->algebra_from_coords(E.a_coords(D)), E.A};
}

AlgebraElement compute_Z(const CentralExtension& E, const Mat& g, const Mat& X) {
    Mat ghat = lift_element_any(E, g);
    Mat D = ghat.inverse() * E.sigma(X) * ghat - E.sigma(g.inverse() * X * g);
    if (E.t_star(D).norm() > 1e-9 * std::max(1.0, D.norm()))
        throw SplitMismatch("Z value escaped the kernel algebra");
    return {E.A->algebra_from_coords(E.a_coords(D)), E.A};
}

double a_value(const CentralExtension& E, const AlgebraElement& a) {
    if (E.a_dim() == 0) return 0.0;
    return E.A->algebra_coords(a.m)(0);
}

AlgebraElement Reduction::evaluate(const CentralExtension& E, const Mat& frame,
                                   const Mat& X) const {
    if (kind == ReductionKind::Trivial) {
        Mat z = Mat::Zero(E.A->identity().rows(), E.A->identity().cols());
        return {z, E.A};
    }
    return compute_Z(E, frame, frame * X * frame.inverse());
}

Reduction canonical_reduction(const CentralExtension& E) {
    Reduction r;
    r.kind = (E.kind == ExtKind::Spin || E.kind == ExtKind::SpinC)
                 ? ReductionKind::Trivial
                 : ReductionKind::GaugeExtended;
    return r;
}

Mat lift_element(const CentralExtension& E, const Mat& g, const std::optional<Mat>& near) {
    if (!near) {
        Mat X;
        try {
            X = E.G->log(g);
        } catch (const MeshTooCoarse&) {
            throw AmbiguousLift("element lies outside the split exponential chart");
        }
        if (max_angle(X) >= kPi - 1e-6)
            throw AmbiguousLift(
                "element at the chart boundary; pass a nearby lift to pick a sheet");
        return E.Ghat->exp(E.sigma(X));
    }
    Mat h = E.t(*near);
    Mat X;
    try {
        X = E.G->log(h.inverse() * g);
    } catch (const MeshTooCoarse&) {
        throw AmbiguousLift("hint is antipodal to the requested element");
    }
    return (*near) * E.Ghat->exp(E.sigma(X));
}

Mat lift_element_any(const CentralExtension& E, const Mat& g) {
    try {
        return lift_element(E, g);
    } catch (const AmbiguousLift&) {
    }
    // Peel off a fixed small factor to move g inside the chart; which sheet
    // we land on is irrelevant to callers of this function.
    for (const Mat& B : E.G->algebra_basis()) {
        for (double amp : {0.4, 0.9, 1.6}) {
            Mat N = amp * B;
            try {
                Mat h = E.G->exp(-N) * g;
                Mat lift = E.Ghat->exp(E.sigma(N)) * lift_element(E, h);
                return lift;
            } catch (const AmbiguousLift&) {
            } catch (const MeshTooCoarse&) {
            }
        }
    }
    throw AmbiguousLift("no chart decomposition found for element");
}

SampledPath horizontal_lift_path(const CentralExtension& E, const SampledPath& path,
                                 const Mat& start) {
    if (path.points.empty()) throw InvalidPath("cannot lift an empty path");
    if (mat_dist(E.t(start), path.points.front()) > 1e-8)
        throw BaseMismatch("start lift does not project to the path's start point");
    SampledPath out;
    out.sitting_instants = path.sitting_instants;
    out.points.reserve(path.points.size());
    out.points.push_back(start);
    for (size_t k = 0; k + 1 < path.points.size(); ++k) {
        Mat d;
        try {
            d = E.G->log(path.points[k].inverse() * path.points[k + 1]);
        } catch (const MeshTooCoarse&) {
            throw MeshTooCoarse("path step " + std::to_string(k) +
                                " leaves the principal branch; refine the sampling");
        }
        if (max_angle(d) > kPi / 2)
            throw MeshTooCoarse("path step " + std::to_string(k) +
                                " rotates by more than pi/2; refine the sampling");
        out.points.push_back(out.points.back() * E.Ghat->exp(E.sigma(d)));
    }
    return out;
}

Mat kernel_defect(const CentralExtension& E, const SampledPath& lifted_loop, double tol) {
    if (lifted_loop.points.size() < 2)
        throw InvalidPath("lifted loop needs at least two samples");
    const Mat& p0 = lifted_loop.points.front();
    const Mat& p1 = lifted_loop.points.back();
    if (mat_dist(E.t(p0), E.t(p1)) > 1e-6)
        throw CannotClose("projected loop does not close");
    return E.incl_inv(p1 * p0.inverse(), tol);
}

} // namespace gerbeloop
