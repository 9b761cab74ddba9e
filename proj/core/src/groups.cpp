#include "gerbeloop/groups.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

namespace gerbeloop {

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const Clifford> clifford_cache(int n) {
    static std::shared_ptr<const Clifford> cache[6];
    if (!cache[n]) cache[n] = std::make_shared<Clifford>(n);
    return cache[n];
}

Mat so2_from_angle(double t) {
    Mat m(2, 2);
    m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return m;
}

/* Robust SO(3) log, Rodrigues form; angle pi resolved with a deterministic
 * positive-axis convention so the result is well defined at the branch edge. */
Mat so3_log(const Mat& gc) {
    Eigen::Matrix3d g = gc.real().topLeftCorner(3, 3);
    double c = (g.trace() - 1.0) / 2.0;
    c = std::clamp(c, -1.0, 1.0);
    double theta = std::acos(c);
    Eigen::Matrix3d K;
    if (theta < 1e-8) {
        K = (g - g.transpose()) / 2.0;
    } else if (kPi - theta > 1e-6) {
        K = theta / (2.0 * std::sin(theta)) * (g - g.transpose());
    } else {
        /* Near-pi rotation: extract the axis from the symmetric part. */
        Eigen::Matrix3d B = (g + Eigen::Matrix3d::Identity()) / 2.0;
        int k = 0;
        B.diagonal().maxCoeff(&k);
        Eigen::Vector3d w = B.col(k) / std::sqrt(B(k, k));
        for (int i = 0; i < 3; ++i) {
            if (std::abs(w(i)) > 1e-9) {
                if (w(i) < 0) w = -w;
                break;
            }
        }
        K = Eigen::Matrix3d::Zero();
        K(0, 1) = -w(2) * theta;
        K(1, 0) = w(2) * theta;
        K(0, 2) = w(1) * theta;
        K(2, 0) = -w(1) * theta;
        K(1, 2) = -w(0) * theta;
        K(2, 1) = w(0) * theta;
    }
    return K.cast<std::complex<double>>();
}

Mat strict_upper(const Mat& m) {
    Mat r = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j <= i && j < m.cols(); ++j) r(i, j) = 0.0;
    return r;
}

} // namespace

double smooth_step(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double mat_dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

int GroupDesc::mat_dim() const {
    switch (kind) {
        case GroupKind::SOn: return n;
        case GroupKind::Spin:
        case GroupKind::SpinC: return 1 << n;
        case GroupKind::U1:
        case GroupKind::Z2:
        case GroupKind::Zm: return 1;
        case GroupKind::RealLine: return 2;
        case GroupKind::Rn: return n + 1;
        case GroupKind::Heisenberg: return 3;
        case GroupKind::Product: return left->mat_dim() + right->mat_dim();
    }
    return 0;
}

bool GroupDesc::is_discrete() const {
    switch (kind) {
        case GroupKind::Z2:
        case GroupKind::Zm: return true;
        case GroupKind::Product: return left->is_discrete() && right->is_discrete();
        default: return false;
    }
}

int GroupDesc::alg_dim() const {
    switch (kind) {
        case GroupKind::SOn: return n * (n - 1) / 2;
        case GroupKind::Spin: return n * (n - 1) / 2;
        case GroupKind::SpinC: return n * (n - 1) / 2 + 1;
        case GroupKind::U1: return 1;
        case GroupKind::Z2:
        case GroupKind::Zm: return 0;
        case GroupKind::RealLine: return 1;
        case GroupKind::Rn: return n;
        case GroupKind::Heisenberg: return 3;
        case GroupKind::Product: return left->alg_dim() + right->alg_dim();
    }
    return 0;
}

std::string GroupDesc::name() const {
    switch (kind) {
        case GroupKind::SOn: return "SO(" + std::to_string(n) + ")";
        case GroupKind::Spin: return "Spin(" + std::to_string(n) + ")";
        case GroupKind::SpinC: return "SpinC(" + std::to_string(n) + ")";
        case GroupKind::U1: return "U1";
        case GroupKind::Z2: return "Z2";
        case GroupKind::Zm: return "Z" + std::to_string(n);
        case GroupKind::RealLine: return "R";
        case GroupKind::Rn: return "R^" + std::to_string(n);
        case GroupKind::Heisenberg: return "H3";
        case GroupKind::Product: return left->name() + "x" + right->name();
    }
    return "?";
}

Mat GroupDesc::identity() const { return Mat::Identity(mat_dim(), mat_dim()); }

std::vector<Mat> GroupDesc::algebra_basis() const {
    std::vector<Mat> basis;
    int d = mat_dim();
    switch (kind) {
        case GroupKind::SOn:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Mat b = Mat::Zero(d, d);
                    b(j, i) = 1.0;
                    b(i, j) = -1.0;
                    basis.push_back(b);
                }
            break;
        case GroupKind::Spin:
        case GroupKind::SpinC:
            for (int slot = 0; slot < static_cast<int>(cl->bivector_slots().size()); ++slot)
                basis.push_back(cl->blade_matrix(cl->bivector_slots()[slot]).cast<std::complex<double>>());
            if (kind == GroupKind::SpinC)
                basis.push_back(std::complex<double>(0.0, 1.0) * Mat::Identity(d, d));
            break;
        case GroupKind::U1:
            basis.push_back(std::complex<double>(0.0, 1.0) * Mat::Identity(1, 1));
            break;
        case GroupKind::Z2:
        case GroupKind::Zm: break;
        case GroupKind::RealLine: {
            Mat b = Mat::Zero(2, 2);
            b(0, 1) = 1.0;
            basis.push_back(b);
            break;
        }
        case GroupKind::Rn:
            for (int i = 0; i < n; ++i) {
                Mat b = Mat::Zero(d, d);
                b(i, n) = 1.0;
                basis.push_back(b);
            }
            break;
        case GroupKind::Heisenberg: {
            for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
                Mat b = Mat::Zero(3, 3);
                b(i, j) = 1.0;
                basis.push_back(b);
            }
            break;
        }
        case GroupKind::Product: {
            int dl = left->mat_dim();
            for (const Mat& b : left->algebra_basis()) {
                Mat e = Mat::Zero(d, d);
                e.topLeftCorner(dl, dl) = b;
                basis.push_back(e);
            }
            for (const Mat& b : right->algebra_basis()) {
                Mat e = Mat::Zero(d, d);
                e.bottomRightCorner(d - dl, d - dl) = b;
                basis.push_back(e);
            }
            break;
        }
    }
    return basis;
}

Mat GroupDesc::exp(const Mat& X) const {
    switch (kind) {
        case GroupKind::RealLine:
        case GroupKind::Rn:
            return Mat::Identity(mat_dim(), mat_dim()) + X;
        case GroupKind::Heisenberg:
            return Mat::Identity(3, 3) + X + 0.5 * (X * X);
        case GroupKind::U1:
            return (Mat(1, 1) << std::exp(X(0, 0))).finished();
        case GroupKind::Product: {
            int dl = left->mat_dim(), d = mat_dim();
            Mat r = Mat::Zero(d, d);
            r.topLeftCorner(dl, dl) = left->exp(X.topLeftCorner(dl, dl));
            r.bottomRightCorner(d - dl, d - dl) = right->exp(X.bottomRightCorner(d - dl, d - dl));
            return r;
        }
        default:
            return X.exp();
    }
}

Mat GroupDesc::log(const Mat& g) const {
    switch (kind) {
        case GroupKind::SOn: {
            if (n == 2) {
                double t = std::atan2(g(1, 0).real(), g(0, 0).real());
                Mat X = Mat::Zero(2, 2);
                X(1, 0) = t;
                X(0, 1) = -t;
                return X;
            }
            if (n == 3) return so3_log(g);
            Mat X = g.log();
            /* A principal complex log of a real rotation must come back real
             * and antisymmetric; a pi-rotation plane breaks that. */
            if (X.imag().norm() > 1e-8 || (X + X.transpose()).norm() > 1e-6)
                throw MeshTooCoarse("SO(n) log: rotation outside the principal branch");
            return X;
        }
        case GroupKind::RealLine:
        case GroupKind::Rn:
            return g - Mat::Identity(mat_dim(), mat_dim());
        case GroupKind::Heisenberg: {
            Mat N = g - Mat::Identity(3, 3);
            return N - 0.5 * (N * N);
        }
        case GroupKind::U1: {
            Mat X(1, 1);
            X(0, 0) = std::complex<double>(0.0, std::arg(g(0, 0)));
            return X;
        }
        case GroupKind::Spin:
        case GroupKind::SpinC: {
            Mat X = g.log();
            if (!algebra_contains(X, 1e-7))
                throw MeshTooCoarse(name() + " log: element outside the principal chart");
            return X;
        }
        case GroupKind::Product: {
            int dl = left->mat_dim(), d = mat_dim();
            Mat r = Mat::Zero(d, d);
            r.topLeftCorner(dl, dl) = left->log(g.topLeftCorner(dl, dl));
            r.bottomRightCorner(d - dl, d - dl) = right->log(g.bottomRightCorner(d - dl, d - dl));
            return r;
        }
        case GroupKind::Z2:
        case GroupKind::Zm:
            if ((g - identity()).norm() < 1e-12) return Mat::Zero(1, 1);
            throw MeshTooCoarse("discrete group has no logarithm off the identity");
    }
    throw Unsupported("log: unhandled group kind");
}

bool GroupDesc::contains(const Mat& m, double tol) const {
    if (m.rows() != mat_dim() || m.cols() != mat_dim()) return false;
    switch (kind) {
        case GroupKind::SOn: {
            if (m.imag().norm() > tol) return false;
            Eigen::MatrixXd r = m.real();
            if ((r * r.transpose() - Eigen::MatrixXd::Identity(n, n)).norm() > tol) return false;
            return std::abs(r.determinant() - 1.0) < tol * 10;
        }
        case GroupKind::Spin: {
            CVec c = cl->coeffs_of(m);
            if (c.imag().norm() > tol) return false;
            if (cl->odd_part_norm(c) > tol) return false;
            Mat rev = cl->matrix_of(cl->reverse(c));
            return (m * rev - Mat::Identity(mat_dim(), mat_dim())).norm() > tol ? false : true;
        }
        case GroupKind::SpinC: {
            CVec c = cl->coeffs_of(m);
            if (cl->odd_part_norm(c) > tol) return false;
            Mat rev = cl->matrix_of(cl->reverse(c));
            Mat p = m * rev;
            std::complex<double> z = p(0, 0);
            if (std::abs(std::abs(z) - 1.0) > tol) return false;
            return (p - z * Mat::Identity(mat_dim(), mat_dim())).norm() < tol * 10;
        }
        case GroupKind::U1:
            return std::abs(std::abs(m(0, 0)) - 1.0) < tol;
        case GroupKind::Z2:
            return std::abs(m(0, 0) - 1.0) < tol || std::abs(m(0, 0) + 1.0) < tol;
        case GroupKind::Zm: {
            std::complex<double> p = std::pow(m(0, 0), n);
            return std::abs(p - 1.0) < tol * n && std::abs(std::abs(m(0, 0)) - 1.0) < tol;
        }
        case GroupKind::RealLine:
        case GroupKind::Rn: {
            Mat d = m - Mat::Identity(mat_dim(), mat_dim());
            return strict_upper(d).isApprox(d, 0.0) || (d - strict_upper(d)).norm() < tol;
        }
        case GroupKind::Heisenberg: {
            if (m.imag().norm() > tol) return false;
            Mat d = m - Mat::Identity(3, 3);
            return (d - strict_upper(d)).norm() < tol;
        }
        case GroupKind::Product: {
            int dl = left->mat_dim(), d = mat_dim();
            if (m.topRightCorner(dl, d - dl).norm() > tol) return false;
            if (m.bottomLeftCorner(d - dl, dl).norm() > tol) return false;
            return left->contains(m.topLeftCorner(dl, dl), tol) &&
                   right->contains(m.bottomRightCorner(d - dl, d - dl), tol);
        }
    }
    return false;
}

bool GroupDesc::algebra_contains(const Mat& X, double tol) const {
    Eigen::VectorXd c = algebra_coords(X);
    return (algebra_from_coords(c) - X).norm() < tol;
}

Eigen::VectorXd GroupDesc::algebra_coords(const Mat& X) const {
    std::vector<Mat> basis = algebra_basis();
    Eigen::VectorXd c(basis.size());
    switch (kind) {
        case GroupKind::SOn: {
            int k = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) c(k++) = X(j, i).real();
            break;
        }
        case GroupKind::Spin:
        case GroupKind::SpinC: {
            CVec coeffs = cl->coeffs_of(X);
            int nb = static_cast<int>(cl->bivector_slots().size());
            for (int k = 0; k < nb; ++k) c(k) = coeffs(cl->bivector_slots()[k]).real();
            if (kind == GroupKind::SpinC) c(nb) = coeffs(0).imag();
            break;
        }
        case GroupKind::U1:
            c(0) = X(0, 0).imag();
            break;
        case GroupKind::RealLine:
            c(0) = X(0, 1).real();
            break;
        case GroupKind::Rn:
            for (int i = 0; i < n; ++i) c(i) = X(i, n).real();
            break;
        case GroupKind::Heisenberg:
            c(0) = X(0, 1).real();
            c(1) = X(1, 2).real();
            c(2) = X(0, 2).real();
            break;
        case GroupKind::Product: {
            int dl = left->mat_dim(), d = mat_dim();
            Eigen::VectorXd cl_ = left->algebra_coords(X.topLeftCorner(dl, dl));
            Eigen::VectorXd cr = right->algebra_coords(X.bottomRightCorner(d - dl, d - dl));
            c << cl_, cr;
            break;
        }
        default:
            break;
    }
    return c;
}

Mat GroupDesc::algebra_from_coords(const Eigen::VectorXd& c) const {
    std::vector<Mat> basis = algebra_basis();
    Mat X = Mat::Zero(mat_dim(), mat_dim());
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) X += c(k) * basis[k];
    return X;
}

std::vector<Mat> GroupDesc::elements() const {
    std::vector<Mat> out;
    switch (kind) {
        case GroupKind::Z2: {
            out.push_back((Mat(1, 1) << 1.0).finished());
            out.push_back((Mat(1, 1) << -1.0).finished());
            break;
        }
        case GroupKind::Zm: {
            for (int k = 0; k < n; ++k) {
                double t = 2.0 * kPi * k / n;
                out.push_back((Mat(1, 1) << std::complex<double>(std::cos(t), std::sin(t))).finished());
            }
            break;
        }
        default:
            throw Unsupported("elements(): group is not finite");
    }
    return out;
}

GroupPtr GroupDesc::so(int n) {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::SOn;
    g->n = n;
    return g;
}
GroupPtr GroupDesc::spin(int n) {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::Spin;
    g->n = n;
    g->cl = clifford_cache(n);
    return g;
}
GroupPtr GroupDesc::spinc(int n) {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::SpinC;
    g->n = n;
    g->cl = clifford_cache(n);
    return g;
}
GroupPtr GroupDesc::u1() {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::U1;
    return g;
}
GroupPtr GroupDesc::z2() {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::Z2;
    return g;
}
GroupPtr GroupDesc::zm(int m) {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::Zm;
    g->n = m;
    return g;
}
GroupPtr GroupDesc::real_line() {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::RealLine;
    return g;
}
GroupPtr GroupDesc::rn(int d) {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::Rn;
    g->n = d;
    return g;
}
GroupPtr GroupDesc::heisenberg() {
    auto g = std::make_shared<GroupDesc>();
    g->kind = GroupKind::Heisenberg;
    return g;
}
GroupPtr GroupDesc::product(GroupPtr a, GroupPtr g) {
    auto p = std::make_shared<GroupDesc>();
    p->kind = GroupKind::Product;
    p->left = std::move(a);
    p->right = std::move(g);
    return p;
}

SampledPath geodesic_from_identity(const GroupDesc& grp, const Mat& g, int samples) {
    Mat X = grp.log(g);
    SampledPath p;
    p.sitting_instants = true;
    p.points.reserve(samples + 1);
    for (int k = 0; k <= samples; ++k) {
        double s = smooth_step(static_cast<double>(k) / samples);
        p.points.push_back(grp.exp(s * X));
    }
    return p;
}

SampledPath reverse_path(const SampledPath& p) {
    SampledPath r;
    r.sitting_instants = p.sitting_instants;
    r.points.assign(p.points.rbegin(), p.points.rend());
    return r;
}

} // namespace gerbeloop
