#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gerbeloop/clifford.hpp"
#include "gerbeloop/errors.hpp"

namespace gerbeloop {

enum class GroupKind {
    SOn,        // n x n special orthogonal
    Spin,       // even unit elements of Cl(n), left-regular representation
    SpinC,      // U(1)-scaled Spin(n) inside complexified Cl(n)
    U1,         // 1 x 1 unit complex
    Z2,         // {+1, -1} as 1 x 1
    Zm,         // m-th roots of unity as 1 x 1
    RealLine,   // (R, +) as 2 x 2 unipotent
    Rn,         // (R^d, +) as (d+1) x (d+1) translations
    Heisenberg, // 3 x 3 unit upper triangular
    Product     // block diagonal A x G
};

struct GroupDesc;
using GroupPtr = std::shared_ptr<const GroupDesc>;

/* Immutable description of a matrix group: which matrices belong to it, what
 * its Lie algebra looks like, and how to move between the two. Elements are
 * plain Eigen matrices; all groups here multiply as matrices. */
struct GroupDesc {
    GroupKind kind;
    int n = 0; // SO(n)/Spin(n)/SpinC(n) rank, Rn dimension, or Zm modulus
    std::shared_ptr<const Clifford> cl; // Spin / SpinC only
    GroupPtr left, right;               // Product only

    int mat_dim() const;
    bool is_discrete() const;
    int alg_dim() const;
    std::string name() const;

    Mat identity() const;
    std::vector<Mat> algebra_basis() const;

    Mat exp(const Mat& X) const;
    /* Principal-branch logarithm. SO(2)/SO(3) use closed forms with the
     * rotation-angle-in-(-pi, pi] convention (exactly pi maps to +pi).
     * Steps outside the principal branch raise MeshTooCoarse. */
    Mat log(const Mat& g) const;

    bool contains(const Mat& m, double tol) const;
    bool algebra_contains(const Mat& X, double tol) const;

    /* Coordinates of an algebra element in algebra_basis() order. */
    Eigen::VectorXd algebra_coords(const Mat& X) const;
    Mat algebra_from_coords(const Eigen::VectorXd& c) const;

    /* Discrete groups only: the full element list. */
    std::vector<Mat> elements() const;

    static GroupPtr so(int n);
    static GroupPtr spin(int n);
    static GroupPtr spinc(int n);
    static GroupPtr u1();
    static GroupPtr z2();
    static GroupPtr zm(int m);
    static GroupPtr real_line();
    static GroupPtr rn(int d);
    static GroupPtr heisenberg();
    static GroupPtr product(GroupPtr a, GroupPtr g);
};

struct GroupElement {
    Mat m;
    GroupPtr grp;
};

struct AlgebraElement {
    Mat m;
    GroupPtr grp;
};

/* Uniformly parameterized matrix path; sitting_instants marks paths that have
 * been reparameterized to sit still near both endpoints. */
struct SampledPath {
    std::vector<Mat> points;
    bool sitting_instants = false;

    int steps() const { return static_cast<int>(points.size()) - 1; }
};

/* Quintic smooth step: S(0)=0, S(1)=1, S'(0)=S'(1)=S''(0)=S''(1)=0. */
double smooth_step(double u);

double mat_dist(const Mat& a, const Mat& b);

/* Geodesic segment from the identity to g (exp of t*log g), smooth-stepped. */
SampledPath geodesic_from_identity(const GroupDesc& grp, const Mat& g, int samples);

SampledPath reverse_path(const SampledPath& p);

} // namespace gerbeloop
