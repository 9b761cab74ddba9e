#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace gerbeloop {

using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/* Clifford algebra Cl(n) with e_i^2 = +1, basis blades indexed by bitmask.
 * Elements are carried around as their left-multiplication matrices on the
 * 2^n-dimensional algebra; that makes the rotor group an honest matrix group
 * (multiplication, inverse, exp, log are the matrix ones) while coefficients
 * stay recoverable as the first column. */
class Clifford {
public:
    explicit Clifford(int n);

    int n() const { return n_; }
    int dim() const { return dim_; }

    /* Sign of e_A * e_B with the +1 metric; the product blade is A ^ B. */
    static int mul_sign(unsigned a, unsigned b);

    const Eigen::MatrixXd& blade_matrix(unsigned mask) const { return blades_[mask]; }
    Mat matrix_of(const CVec& coeffs) const;
    CVec coeffs_of(const Mat& left_mult) const { return left_mult.col(0); }

    CVec reverse(const CVec& coeffs) const;
    CVec grade(const CVec& coeffs, int k) const;
    double odd_part_norm(const CVec& coeffs) const;

    /* Grade-1 coefficient slots, in generator order. */
    const std::vector<int>& vector_slots() const { return vec_slots_; }
    /* Grade-2 slots with their generator pairs (i, j), i < j. */
    const std::vector<std::pair<int, int>>& bivector_pairs() const { return biv_pairs_; }
    const std::vector<int>& bivector_slots() const { return biv_slots_; }

    /* v -> R v R^{-1} restricted to grade 1, as an n x n real matrix.
     * For even unit R this is the covered rotation. */
    Eigen::MatrixXd vector_action(const Mat& R) const;
    /* Derivative of vector_action at the identity, applied to a left-mult
     * matrix LB of an algebra element: v -> [B, v]. */
    Eigen::MatrixXd vector_action_deriv(const Mat& LB) const;

private:
    int n_;
    int dim_;
    std::vector<Eigen::MatrixXd> blades_;
    std::vector<int> vec_slots_;
    std::vector<int> biv_slots_;
    std::vector<std::pair<int, int>> biv_pairs_;
};

} // namespace gerbeloop
