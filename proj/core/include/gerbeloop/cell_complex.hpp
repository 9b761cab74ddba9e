#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gerbeloop/snf.hpp"

namespace gerbeloop {

struct Edge {
    int tail = 0, head = 0;
};

/* Boundary word of a 2-cell: signed 1-based edge indices, +k traversing edge
 * k-1 tail to head, -k the reverse. Consecutive steps must chain and the word
 * must close; the face's base vertex is where the first step starts. */
struct Face {
    std::vector<int> word;
};

struct Complex2 {
    std::string name;
    int n_vertices = 0;
    std::vector<Edge> edges;
    std::vector<Face> faces;
    int basepoint = 0;
    /* Optional embedding; empty for combinatorial complexes. */
    std::vector<Eigen::Vector3d> positions;

    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
    int euler_characteristic() const { return n_vertices - n_edges() + n_faces(); }

    void validate() const;

    /* Vertex where step s of face f starts. */
    int step_start(int f, int s) const;
    int face_base_vertex(int f) const { return step_start(f, 0); }

    IMat d0() const; // n_edges x n_vertices, head minus tail
    IMat d1() const; // n_faces x n_edges, signed occurrence counts
};

Complex2 builtin_complex(const std::string& name);
Complex2 complex_circle(int n);
Complex2 complex_torus();
Complex2 complex_torus_grid(int n);
Complex2 complex_genus(int g);
Complex2 complex_cylinder(int n);
Complex2 complex_sphere_clutch(int n);
Complex2 complex_sphere2();
Complex2 complex_octahedron();

enum class Ring { Z, Zm, R, U1 };

/* Cellular cochain with values in one of the supported coefficient rings.
 * Integer rings keep integral doubles; U1 values live in [0,1). */
struct Cochain {
    int degree = 0;
    Ring ring = Ring::Z;
    int mod = 0; // Zm only
    Eigen::VectorXd vals;

    static Cochain zeros(const Complex2& C, int degree, Ring ring, int mod = 0);
    long long ival(int i) const;
    void reduce();
};

Cochain coboundary(const Complex2& C, const Cochain& x);
bool cochain_is_zero(const Cochain& x, double tol = 1e-9);
Cochain cochain_sub(const Cochain& a, const Cochain& b);

/* Outcome of a divisibility query against the integer normal form of the
 * relevant incidence matrix. When unsolvable, obstruction_invariants holds
 * the residues of the target against the elementary divisors, one entry per
 * constraint row (all zero exactly when solvable over Z-like rings). */
struct CohomologySolution {
    bool solvable = false;
    std::optional<Cochain> witness;
    std::vector<long long> obstruction_invariants;
    std::vector<long long> elementary_divisors;
};

/* Decide target = coboundary(x) in target's ring and produce a witness x.
 * Degree must be 1 or 2 and the target must be a cocycle. */
CohomologySolution solve_coboundary(const Complex2& C, const Cochain& target,
                                    double tol = 1e-9);

bool is_coboundary(const Complex2& C, const Cochain& target, double tol = 1e-9);

/* One degree-1 cocycle per cohomology class with Z/m coefficients. The zero
 * class is always reps[0]. */
std::vector<Cochain> h1_representatives(const Complex2& C, int m);
std::vector<Cochain> h1_representatives(const Complex2& C, Ring ring, int mod = 0);

/* Normal form of an incidence-style integer matrix, computed once per shape
 * and shared; safe under concurrent use. */
const SmithForm& cached_smith(const IMat& D);

} // namespace gerbeloop
