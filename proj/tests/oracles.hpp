#pragma once

// Reference implementations the test suites compare the library against.
// Everything here is written from the raw definitions: GF(2) elimination,
// gcd-of-minors divisor chains, hand-rolled quaternion and Heisenberg
// arithmetic, plain quadrature. None of it calls back into the library's
// solvers or transport code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// ---------------------------------------------------------------- GF(2)

using BitRow = std::vector<std::uint8_t>;

inline int gf2_eliminate(std::vector<BitRow>& m) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c]) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        for (int r = 0; r < rows; ++r)
            if (r != rank && m[r][c])
                for (int k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank;
}

inline int gf2_rank(std::vector<BitRow> m) { return gf2_eliminate(m); }

// Solvability of A x = b over GF(2): rank(A) == rank([A | b]).
inline bool gf2_solvable(std::vector<BitRow> a, const BitRow& b) {
    const int ra = gf2_rank(a);
    for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
    return gf2_rank(std::move(a)) == ra;
}

// --------------------------------------------- integer elementary divisors

using IMat64 = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// gcd of all k x k minors (0 when every minor vanishes). Brute force over
// index subsets; meant for the desk-scale incidence matrices in the tests.
inline long long gcd_of_minors(const IMat64& M, int k) {
    const int r = static_cast<int>(M.rows()), c = static_cast<int>(M.cols());
    if (k > std::min(r, c)) return 0;
    std::vector<int> ri(k), ci(k);
    std::function<long long(int, int, std::vector<int>&, int)> walk_cols;
    auto det_of = [&](const std::vector<int>& rr, const std::vector<int>& cc) {
        Eigen::MatrixXd sub(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub(i, j) = static_cast<double>(M(rr[i], cc[j]));
        return static_cast<long long>(std::llround(sub.determinant()));
    };
    long long g = 0;
    std::function<void(int, int)> pick_rows = [&](int from, int got) {
        if (got == k) {
            std::function<void(int, int)> pick_cols = [&](int cfrom, int cgot) {
                if (cgot == k) {
                    g = std::gcd(g, std::llabs(det_of(ri, ci)));
                    return;
                }
                for (int j = cfrom; j < c; ++j) {
                    ci[cgot] = j;
                    pick_cols(j + 1, cgot + 1);
                }
            };
            pick_cols(0, 0);
            return;
        }
        for (int i = from; i < r; ++i) {
            ri[got] = i;
            pick_rows(i + 1, got + 1);
        }
    };
    pick_rows(0, 0);
    return g;
}

// Elementary divisors d_1 | d_2 | ... via the minor-gcd chain
// d_k = gcd(k-minors) / gcd((k-1)-minors), stopping at the first zero gcd.
inline std::vector<long long> elementary_divisors(const IMat64& M) {
    std::vector<long long> out;
    long long prev = 1;
    for (int k = 1; k <= std::min(M.rows(), M.cols()); ++k) {
        long long g = gcd_of_minors(M, k);
        if (g == 0) break;
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

// ------------------------------------------------------------- Heisenberg

// Coordinates of the unit upper-triangular 3x3 matrix [[1,a,c],[0,1,b],[0,0,1]].
struct HeisTriple {
    double a = 0, b = 0, c = 0;
};

inline HeisTriple heis_mul(const HeisTriple& p, const HeisTriple& q) {
    return {p.a + q.a, p.b + q.b, p.c + q.c + p.a * q.b};
}

inline HeisTriple heis_inv(const HeisTriple& p) { return {-p.a, -p.b, -p.c + p.a * p.b}; }

inline HeisTriple heis_from_mat(const Eigen::MatrixXcd& m) {
    return {m(0, 1).real(), m(1, 2).real(), m(0, 2).real()};
}

// Signed area enclosed by a closed polygon (shoelace).
inline double polygon_area(const std::vector<Eigen::Vector2d>& pts) {
    double twice = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        twice += pts[i].x() * pts[i + 1].y() - pts[i + 1].x() * pts[i].y();
    return twice / 2;
}

// ------------------------------------------------------------ quaternions

struct Quat {
    double w = 1, x = 0, y = 0, z = 0;
};

inline Quat quat_mul(const Quat& p, const Quat& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

inline double quat_norm(const Quat& q) {
    return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

inline Eigen::Matrix3d quat_rotation(const Quat& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    Eigen::Matrix3d R;
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return R;
}

// Identification of even Cl(3) rotor coefficients with a quaternion, pinned
// once against the blade table: with blades indexed by generator bitmask,
// q = (c[0], -c[e2e3], +c[e1e3], -c[e1e2]) = (c[0], -c[6], c[5], -c[3]).
inline Quat quat_of_rotor_coeffs(const Eigen::VectorXcd& c) {
    return {c(0).real(), -c(6).real(), c(5).real(), -c(3).real()};
}

inline double quat_dist(const Quat& p, const Quat& q) {
    return std::sqrt((p.w - q.w) * (p.w - q.w) + (p.x - q.x) * (p.x - q.x) +
                     (p.y - q.y) * (p.y - q.y) + (p.z - q.z) * (p.z - q.z));
}

// -------------------------------------------------------------- quadrature

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3;
}

inline double midpoint2(const std::function<double(double, double)>& f, double x0,
                        double x1, double y0, double y1, int nx, int ny) {
    const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
    double acc = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            acc += f(x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy);
    return acc * hx * hy;
}

// ------------------------------------------------------------ U(1) helpers

inline double wrap_unit(double x) { return x - std::floor(x); }

// Distance on R/Z.
inline double turn_dist(double a, double b) {
    double d = wrap_unit(a - b);
    return std::min(d, 1.0 - d);
}

// Net winding (in turns) of a sampled unit-complex loop by angle continuation.
inline double winding_turns(const std::vector<std::complex<double>>& loop) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i)
        total += std::arg(loop[i + 1] / loop[i]);
    return total / (2 * M_PI);
}

} // namespace oracle
