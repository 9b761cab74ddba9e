#include "gerbeloop/snf.hpp"

#include <cstdlib>

namespace gerbeloop {

namespace {

void swap_rows(IMat& S, IMat& U, int a, int b) {
    S.row(a).swap(S.row(b));
    U.row(a).swap(U.row(b));
}

void swap_cols(IMat& S, IMat& V, int a, int b) {
    S.col(a).swap(S.col(b));
    V.col(a).swap(V.col(b));
}

void add_row(IMat& S, IMat& U, int dst, int src, long long c) {
    S.row(dst) += c * S.row(src);
    U.row(dst) += c * U.row(src);
}

void add_col(IMat& S, IMat& V, int dst, int src, long long c) {
    S.col(dst) += c * S.col(src);
    V.col(dst) += c * V.col(src);
}

} // namespace

SmithForm smith_normal_form(const IMat& D) {
    const int rows = static_cast<int>(D.rows());
    const int cols = static_cast<int>(D.cols());
    SmithForm out;
    out.S = D;
    out.U = IMat::Identity(rows, rows);
    out.V = IMat::Identity(cols, cols);
    IMat& S = out.S;
    IMat& U = out.U;
    IMat& V = out.V;

    int k = 0;
    while (k < rows && k < cols) {
        // Pivot: smallest nonzero entry in the remaining block.
        int pi = -1, pj = -1;
        long long best = 0;
        for (int i = k; i < rows; ++i)
            for (int j = k; j < cols; ++j) {
                long long a = std::llabs(S(i, j));
                if (a != 0 && (pi < 0 || a < best)) { pi = i; pj = j; best = a; }
            }
        if (pi < 0) break;
        swap_rows(S, U, k, pi);
        swap_cols(S, V, k, pj);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int i = k + 1; i < rows; ++i) {
                if (S(i, k) == 0) continue;
                long long q = S(i, k) / S(k, k);
                add_row(S, U, i, k, -q);
                if (S(i, k) != 0) { swap_rows(S, U, k, i); dirty = true; }
            }
            for (int j = k + 1; j < cols; ++j) {
                if (S(k, j) == 0) continue;
                long long q = S(k, j) / S(k, k);
                add_col(S, V, j, k, -q);
                if (S(k, j) != 0) { swap_cols(S, V, k, j); dirty = true; }
            }
        }
        // Divisibility chain: fold any entry the pivot misses back into play.
        bool fixed = true;
        for (int i = k + 1; i < rows && fixed; ++i)
            for (int j = k + 1; j < cols && fixed; ++j)
                if (S(i, j) % S(k, k) != 0) {
                    add_row(S, U, k, i, 1);
                    fixed = false;
                }
        if (!fixed) continue;
        if (S(k, k) < 0) {
            S.row(k) = -S.row(k);
            U.row(k) = -U.row(k);
        }
        ++k;
    }
    out.rank = k;
    return out;
}

} // namespace gerbeloop
