#pragma once

#include <optional>
#include <string>

#include "gerbeloop/groups.hpp"

namespace gerbeloop {

enum class ExtKind { Spin, SpinC, Heisenberg, Trivial };

/* Central extension A -> Ghat -> G of matrix groups, together with the fixed
 * linear split sigma of the projection's derivative. The split is the
 * canonical one for each builtin (bivector lift for spin/spinc, zero-center
 * lift for the Heisenberg model, zero-A lift for products); everything
 * downstream (transports, cocycles, curvings) is defined relative to it. */
struct CentralExtension {
    ExtKind kind;
    std::string descr;
    GroupPtr A, Ghat, G;
    bool kernel_is_discrete = false;

    /* sigma and t_* as coordinate matrices in algebra_basis() order. */
    Eigen::MatrixXd sigma_mat; // alg_dim(Ghat) x alg_dim(G)
    Eigen::MatrixXd tstar_mat; // alg_dim(G) x alg_dim(Ghat)
    std::vector<Mat> a_alg_basis; // incl_* images of A's algebra basis in Ghat's algebra

    Mat t(const Mat& ghat) const;
    Mat incl(const Mat& a) const;
    /* Inverse of incl on the kernel; raises NotInKernel past tol. */
    Mat incl_inv(const Mat& k, double tol = 1e-10) const;
    bool in_kernel(const Mat& k, double tol = 1e-10) const;

    Mat t_star(const Mat& Xhat) const;
    Mat sigma(const Mat& X) const;

    int a_dim() const { return static_cast<int>(a_alg_basis.size()); }
    /* Coordinates of a kernel-algebra element in the incl_* basis. */
    Eigen::VectorXd a_coords(const Mat& kernel_alg) const;
    Mat a_from_coords(const Eigen::VectorXd& c) const;

    /* Split Xhat = kernel part + sigma(t_*(Xhat)); returns the kernel part's
     * coordinates and, via out param, the projected G-algebra element. */
    Eigen::VectorXd split_coords(const Mat& Xhat, Mat* g_part = nullptr) const;

    /* Canonical scalar coordinate of an A group element (Z2 -> {0,1},
     * Zm -> k/1, U1 -> angle/2pi in [0,1), R -> translation amount). */
    double a_scalar(const Mat& a_element) const;
    Mat a_element_from_scalar(double v) const;
};

CentralExtension make_extension(const std::string& name);

enum class ReductionKind { Trivial, GaugeExtended };

/* Reduction r(p, X) of the extension data to the bundle: evaluated on a gauge
 * frame (the coordinate of p over a vertex) and X in G's algebra, valued in
 * A's algebra. The gauge-extended form sets r = 0 at the canonical frame and
 * extends through the frame action, which keeps the defining transformation
 * law exact; the trivial form is identically zero. */
struct Reduction {
    ReductionKind kind = ReductionKind::Trivial;

    AlgebraElement evaluate(const CentralExtension& E, const Mat& frame,
                            const Mat& X) const;
};

Reduction canonical_reduction(const CentralExtension& E);

/* omega(X, Y) = [sigma X, sigma Y] - sigma([X, Y]), valued in A's algebra. */
AlgebraElement compute_omega(const CentralExtension& E, const Mat& X, const Mat& Y);

/* Z(g, X) = Ad_{ghat^-1}(sigma X) - sigma(Ad_{g^-1} X), valued in A's algebra;
 * centrality of A makes the lift choice irrelevant. */
AlgebraElement compute_Z(const CentralExtension& E, const Mat& g, const Mat& X);

double a_value(const CentralExtension& E, const AlgebraElement& a);

/* Lift through the sigma-exponential chart. Without a hint the element must
 * lie inside the chart (rotation angles strictly below pi), else
 * AmbiguousLift; with a hint the lift continues the hint's sheet. */
Mat lift_element(const CentralExtension& E, const Mat& g,
                 const std::optional<Mat>& near = std::nullopt);

/* Some deterministic lift, valid for any g (used where any kernel translate
 * is equally good). */
Mat lift_element_any(const CentralExtension& E, const Mat& g);

/* Discrete horizontal transport: ghat_{k+1} = ghat_k exp(sigma(log(g_k^-1 g_{k+1}))).
 * Steps outside the chart raise MeshTooCoarse. */
SampledPath horizontal_lift_path(const CentralExtension& E, const SampledPath& path,
                                 const Mat& start);

/* end * start^-1 of a lifted loop, pulled back through incl. */
Mat kernel_defect(const CentralExtension& E, const SampledPath& lifted_loop,
                  double tol = 1e-6);

} // namespace gerbeloop
