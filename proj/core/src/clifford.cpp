#include "gerbeloop/clifford.hpp"

#include <bit>
#include <stdexcept>

namespace gerbeloop {

int Clifford::mul_sign(unsigned a, unsigned b) {
    /* Count transpositions needed to merge e_A e_B into canonical order.
     * Repeated generators square to +1, so overlaps add no sign. */
    int swaps = 0;
    for (unsigned i = 0; i < 32; ++i) {
        if (!(b & (1u << i))) continue;
        unsigned higher = a >> (i + 1);
        swaps += std::popcount(higher);
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

Clifford::Clifford(int n) : n_(n), dim_(1 << n) {
    if (n < 1 || n > 5) throw std::invalid_argument("Clifford: n out of range");
    blades_.resize(dim_);
    for (unsigned b = 0; b < static_cast<unsigned>(dim_); ++b) {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(dim_, dim_);
        for (unsigned c = 0; c < static_cast<unsigned>(dim_); ++c) {
            L(b ^ c, c) = static_cast<double>(mul_sign(b, c));
        }
        blades_[b] = L;
    }
    for (int i = 0; i < n_; ++i) vec_slots_.push_back(1 << i);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            biv_slots_.push_back((1 << i) | (1 << j));
            biv_pairs_.emplace_back(i, j);
        }
}

Mat Clifford::matrix_of(const CVec& coeffs) const {
    Mat m = Mat::Zero(dim_, dim_);
    for (int b = 0; b < dim_; ++b) {
        if (coeffs(b) != std::complex<double>(0.0, 0.0))
            m += coeffs(b) * blades_[b];
    }
    return m;
}

CVec Clifford::reverse(const CVec& coeffs) const {
    CVec r = coeffs;
    for (int b = 0; b < dim_; ++b) {
        int k = std::popcount(static_cast<unsigned>(b));
        if ((k * (k - 1) / 2) % 2 == 1) r(b) = -r(b);
    }
    return r;
}

CVec Clifford::grade(const CVec& coeffs, int k) const {
    CVec r = CVec::Zero(dim_);
    for (int b = 0; b < dim_; ++b)
        if (std::popcount(static_cast<unsigned>(b)) == k) r(b) = coeffs(b);
    return r;
}

double Clifford::odd_part_norm(const CVec& coeffs) const {
    double s = 0.0;
    for (int b = 0; b < dim_; ++b)
        if (std::popcount(static_cast<unsigned>(b)) % 2 == 1) s += std::norm(coeffs(b));
    return std::sqrt(s);
}

Eigen::MatrixXd Clifford::vector_action(const Mat& R) const {
    Mat Rinv = R.inverse();
    Eigen::MatrixXd out(n_, n_);
    for (int i = 0; i < n_; ++i) {
        Mat w = R * blades_[vec_slots_[i]] * Rinv;
        CVec c = w.col(0);
        for (int j = 0; j < n_; ++j) out(j, i) = c(vec_slots_[j]).real();
    }
    return out;
}

Eigen::MatrixXd Clifford::vector_action_deriv(const Mat& LB) const {
    Eigen::MatrixXd out(n_, n_);
    for (int i = 0; i < n_; ++i) {
        Mat w = LB * blades_[vec_slots_[i]] - blades_[vec_slots_[i]] * LB;
        CVec c = w.col(0);
        for (int j = 0; j < n_; ++j) out(j, i) = c(vec_slots_[j]).real();
    }
    return out;
}

} // namespace gerbeloop
