#pragma once

#include <Eigen/Dense>

namespace gerbeloop {

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/* S = U * D * V with U, V unimodular, S diagonal with nonnegative entries
 * s_0 | s_1 | ... Solving D x = t reduces to S y = U t with x = V y, which is
 * how every coefficient ring downstream consumes this. */
struct SmithForm {
    IMat S, U, V;
    int rank = 0;
};

SmithForm smith_normal_form(const IMat& D);

} // namespace gerbeloop
