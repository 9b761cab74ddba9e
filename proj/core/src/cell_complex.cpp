#include "gerbeloop/cell_complex.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <set>

#include "gerbeloop/errors.hpp"

namespace gerbeloop {

namespace {

int edge_start(const Complex2& C, int signed_edge) {
    const Edge& e = C.edges[std::abs(signed_edge) - 1];
    return signed_edge > 0 ? e.tail : e.head;
}

int edge_end(const Complex2& C, int signed_edge) {
    const Edge& e = C.edges[std::abs(signed_edge) - 1];
    return signed_edge > 0 ? e.head : e.tail;
}

long long modinv(long long a, long long m) {
    long long t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    return ((t % m) + m) % m;
}

long long reduce_mod(long long v, long long m) { return ((v % m) + m) % m; }

} // namespace

void Complex2::validate() const {
    for (const Edge& e : edges)
        if (e.tail < 0 || e.tail >= n_vertices || e.head < 0 || e.head >= n_vertices)
            throw Error("edge endpoint out of range in complex " + name);
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& w = faces[f].word;
        if (w.empty()) throw Error("empty face word in complex " + name);
        for (size_t s = 0; s < w.size(); ++s) {
            int k = std::abs(w[s]);
            if (k < 1 || k > n_edges())
                throw Error("face word references missing edge in complex " + name);
            int next = w[(s + 1) % w.size()];
            if (edge_end(*this, w[s]) != edge_start(*this, next))
                throw Error("face word does not chain in complex " + name);
        }
    }
    if (basepoint < 0 || basepoint >= n_vertices)
        throw Error("basepoint out of range in complex " + name);
    if (!positions.empty() && static_cast<int>(positions.size()) != n_vertices)
        throw Error("embedding size mismatch in complex " + name);
}

int Complex2::step_start(int f, int s) const {
    return edge_start(*this, faces[f].word[s]);
}

IMat Complex2::d0() const {
    IMat D = IMat::Zero(n_edges(), n_vertices);
    for (int e = 0; e < n_edges(); ++e) {
        D(e, edges[e].head) += 1;
        D(e, edges[e].tail) -= 1;
    }
    return D;
}

IMat Complex2::d1() const {
    IMat D = IMat::Zero(n_faces(), n_edges());
    for (int f = 0; f < n_faces(); ++f)
        for (int s : faces[f].word)
            D(f, std::abs(s) - 1) += (s > 0 ? 1 : -1);
    return D;
}

Complex2 complex_circle(int n) {
    if (n < 1) throw Unsupported("circle(n) needs n >= 1");
    Complex2 C;
    C.name = "circle(" + std::to_string(n) + ")";
    C.n_vertices = n;
    for (int i = 0; i < n; ++i) C.edges.push_back({i, (i + 1) % n});
    C.validate();
    return C;
}

Complex2 complex_genus(int g) {
    if (g < 1) throw Unsupported("genus(g) needs g >= 1");
    Complex2 C;
    C.name = g == 1 ? "torus" : "genus(" + std::to_string(g) + ")";
    C.n_vertices = 1;
    Face f;
    for (int i = 0; i < g; ++i) {
        C.edges.push_back({0, 0});
        C.edges.push_back({0, 0});
        int a = 2 * i + 1, b = 2 * i + 2;
        f.word.insert(f.word.end(), {a, b, -a, -b});
    }
    C.faces.push_back(f);
    C.validate();
    return C;
}

Complex2 complex_torus() { return complex_genus(1); }

Complex2 complex_torus_grid(int n) {
    if (n < 1) throw Unsupported("torus_grid(n) needs n >= 1");
    Complex2 C;
    C.name = "torus_grid(" + std::to_string(n) + ")";
    C.n_vertices = n * n;
    auto v = [&](int i, int j) { return (i % n) * n + (j % n); };
    // Horizontal edge (i,j)->(i,j+1) is index i*n+j, vertical (i,j)->(i+1,j)
    // is n^2+i*n+j.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) C.edges.push_back({v(i, j), v(i, j + 1)});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) C.edges.push_back({v(i, j), v(i + 1, j)});
    auto h = [&](int i, int j) { return (i % n) * n + (j % n) + 1; };
    auto vv = [&](int i, int j) { return n * n + (i % n) * n + (j % n) + 1; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            C.faces.push_back({{h(i, j), vv(i, j + 1), -h(i + 1, j), -vv(i, j)}});
    C.validate();
    return C;
}

Complex2 complex_cylinder(int n) {
    if (n < 1) throw Unsupported("cylinder(n) needs n >= 1");
    Complex2 C;
    C.name = "cylinder(" + std::to_string(n) + ")";
    C.n_vertices = 2 * n;
    for (int i = 0; i < n; ++i) C.edges.push_back({i, (i + 1) % n});         // bottom ring
    for (int i = 0; i < n; ++i) C.edges.push_back({n + i, n + (i + 1) % n}); // top ring
    for (int i = 0; i < n; ++i) C.edges.push_back({i, n + i});               // verticals
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        C.faces.push_back({{i + 1, 2 * n + j + 1, -(n + i + 1), -(2 * n + i + 1)}});
    }
    C.validate();
    return C;
}

Complex2 complex_sphere_clutch(int n) {
    if (n < 1) throw Unsupported("sphere_clutch(n) needs n >= 1");
    Complex2 C;
    C.name = "sphere_clutch(" + std::to_string(n) + ")";
    C.n_vertices = n + 2; // 0 = north pole, 1 = south pole, 2.. = equator
    auto eq = [&](int i) { return 2 + (i % n); };
    for (int i = 0; i < n; ++i) C.edges.push_back({0, eq(i)});       // north meridians
    for (int i = 0; i < n; ++i) C.edges.push_back({eq(i), eq(i + 1)}); // equator
    for (int i = 0; i < n; ++i) C.edges.push_back({eq(i), 1});       // south meridians
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        C.faces.push_back({{i + 1, n + i + 1, -(j + 1)}});
        C.faces.push_back({{n + i + 1, 2 * n + j + 1, -(2 * n + i + 1)}});
    }
    C.validate();
    return C;
}

Complex2 complex_sphere2() {
    Complex2 C;
    C.name = "sphere2";
    C.n_vertices = 2;
    C.edges.push_back({0, 1});
    C.edges.push_back({0, 1});
    C.faces.push_back({{1, -2}});
    C.faces.push_back({{2, -1}});
    C.validate();
    return C;
}

Complex2 complex_octahedron() {
    Complex2 C;
    C.name = "octahedron";
    C.n_vertices = 6;
    C.positions = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
    const std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {0, 4}, {0, 5},
                                                    {1, 2}, {1, 3}, {1, 5}, {2, 3},
                                                    {2, 4}, {3, 4}, {3, 5}, {4, 5}};
    for (auto [a, b] : pairs) C.edges.push_back({a, b});
    auto signed_edge = [&](int a, int b) {
        for (int k = 0; k < C.n_edges(); ++k) {
            if (C.edges[k].tail == a && C.edges[k].head == b) return k + 1;
            if (C.edges[k].tail == b && C.edges[k].head == a) return -(k + 1);
        }
        throw Error("octahedron edge lookup failed");
    };
    std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {1, 3, 2}, {3, 4, 2}, {4, 0, 2},
                                            {1, 0, 5}, {3, 1, 5}, {4, 3, 5}, {0, 4, 5}};
    for (auto t : tris) {
        Eigen::Vector3d pa = C.positions[t[0]], pb = C.positions[t[1]],
                        pc = C.positions[t[2]];
        if ((pb - pa).cross(pc - pa).dot(pa + pb + pc) < 0) std::swap(t[1], t[2]);
        C.faces.push_back(
            {{signed_edge(t[0], t[1]), signed_edge(t[1], t[2]), signed_edge(t[2], t[0])}});
    }
    C.validate();
    return C;
}

Complex2 builtin_complex(const std::string& name) {
    auto numeric_arg = [&](const std::string& prefix) -> std::optional<int> {
        if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return std::nullopt;
        return std::stoi(name.substr(prefix.size() + 1,
                                     name.size() - prefix.size() - 2));
    };
    if (name == "torus") return complex_torus();
    if (name == "sphere2") return complex_sphere2();
    if (name == "octahedron") return complex_octahedron();
    if (name == "sphere_clutch") return complex_sphere_clutch(8);
    if (auto n = numeric_arg("circle")) return complex_circle(*n);
    if (auto n = numeric_arg("genus")) return complex_genus(*n);
    if (auto n = numeric_arg("cylinder")) return complex_cylinder(*n);
    if (auto n = numeric_arg("sphere_clutch")) return complex_sphere_clutch(*n);
    if (auto n = numeric_arg("torus_grid")) return complex_torus_grid(*n);
    throw Unsupported("unknown builtin complex " + name);
}

Cochain Cochain::zeros(const Complex2& C, int degree, Ring ring, int mod) {
    Cochain x;
    x.degree = degree;
    x.ring = ring;
    x.mod = mod;
    int n = degree == 0 ? C.n_vertices : degree == 1 ? C.n_edges() : C.n_faces();
    x.vals = Eigen::VectorXd::Zero(n);
    return x;
}

long long Cochain::ival(int i) const {
    double v = vals(i);
    long long r = std::llround(v);
    if (std::abs(v - r) > 1e-6) throw Error("cochain value is not integral");
    return r;
}

void Cochain::reduce() {
    if (ring == Ring::Zm) {
        for (int i = 0; i < vals.size(); ++i)
            vals(i) = static_cast<double>(reduce_mod(ival(i), mod));
    } else if (ring == Ring::U1) {
        for (int i = 0; i < vals.size(); ++i) vals(i) -= std::floor(vals(i));
    }
}

Cochain coboundary(const Complex2& C, const Cochain& x) {
    if (x.degree > 1) throw DegreeError("no coboundary above degree 1 on a 2-complex");
    IMat D = x.degree == 0 ? C.d0() : C.d1();
    if (x.vals.size() != D.cols()) throw DegreeError("cochain size does not match complex");
    Cochain out;
    out.degree = x.degree + 1;
    out.ring = x.ring;
    out.mod = x.mod;
    out.vals = D.cast<double>() * x.vals;
    out.reduce();
    return out;
}

bool cochain_is_zero(const Cochain& x, double tol) {
    for (int i = 0; i < x.vals.size(); ++i) {
        double v = x.vals(i);
        double d;
        switch (x.ring) {
        case Ring::Zm: {
            double r = std::fmod(std::fmod(v, x.mod) + x.mod, x.mod);
            d = std::min(r, x.mod - r);
            break;
        }
        case Ring::U1: {
            double r = v - std::floor(v);
            d = std::min(r, 1.0 - r);
            break;
        }
        default:
            d = std::abs(v);
        }
        if (d > tol) return false;
    }
    return true;
}

Cochain cochain_sub(const Cochain& a, const Cochain& b) {
    if (a.degree != b.degree || a.ring != b.ring || a.mod != b.mod ||
        a.vals.size() != b.vals.size())
        throw DegreeError("cochain shapes differ");
    Cochain out = a;
    out.vals = a.vals - b.vals;
    out.reduce();
    return out;
}

const SmithForm& cached_smith(const IMat& D) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<SmithForm>> cache;
    std::string key = std::to_string(D.rows()) + "x" + std::to_string(D.cols());
    for (int i = 0; i < D.rows(); ++i)
        for (int j = 0; j < D.cols(); ++j) key += "," + std::to_string(D(i, j));
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<SmithForm>(smith_normal_form(D));
    return *slot;
}

CohomologySolution solve_coboundary(const Complex2& C, const Cochain& target,
                                    double tol) {
    if (target.degree != 1 && target.degree != 2)
        throw DegreeError("coboundary targets live in degree 1 or 2");
    if (target.degree == 1 && !cochain_is_zero(coboundary(C, target), std::max(tol, 1e-9)))
        throw NotACocycle("degree-1 target is not closed");
    IMat D = target.degree == 1 ? C.d0() : C.d1();
    if (target.vals.size() != D.rows())
        throw DegreeError("cochain size does not match complex");
    const int rows = static_cast<int>(D.rows());
    const int cols = static_cast<int>(D.cols());
    const SmithForm& sf = cached_smith(D);
    Eigen::VectorXd c = sf.U.cast<double>() * target.vals;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);

    CohomologySolution sol;
    sol.solvable = true;
    for (int i = 0; i < std::min(rows, cols); ++i)
        sol.elementary_divisors.push_back(sf.S(i, i));

    auto integral = [&](double v) {
        long long r = std::llround(v);
        if (std::abs(v - r) > 1e-6) throw Error("integer ring cochain is not integral");
        return r;
    };

    switch (target.ring) {
    case Ring::Z:
        for (int i = 0; i < rows; ++i) {
            long long ci = integral(c(i));
            long long res;
            if (i < sf.rank && i < cols) {
                long long s = sf.S(i, i);
                res = reduce_mod(ci, s);
                if (res == 0) y(i) = static_cast<double>(ci / s);
            } else {
                res = ci;
            }
            sol.obstruction_invariants.push_back(res);
            if (res != 0) sol.solvable = false;
        }
        break;
    case Ring::Zm: {
        long long m = target.mod;
        for (int i = 0; i < rows; ++i) {
            long long ci = reduce_mod(integral(c(i)), m);
            long long res;
            if (i < sf.rank && i < cols) {
                long long s = sf.S(i, i);
                long long g = std::gcd(s, m);
                res = ci % g;
                if (res == 0) {
                    long long mg = m / g;
                    y(i) = mg == 1 ? 0.0
                                   : static_cast<double>(
                                         reduce_mod((ci / g) * modinv(s / g, mg), mg));
                }
            } else {
                res = ci % m;
            }
            sol.obstruction_invariants.push_back(res);
            if (res != 0) sol.solvable = false;
        }
        break;
    }
    case Ring::R:
        for (int i = 0; i < rows; ++i) {
            if (i < sf.rank && i < cols)
                y(i) = c(i) / static_cast<double>(sf.S(i, i));
            else if (std::abs(c(i)) > tol)
                sol.solvable = false;
        }
        break;
    case Ring::U1:
        // Solving D x = t mod 1: rows past the rank must be integral, the
        // unimodularity of U letting an integer correction absorb them.
        for (int i = 0; i < rows; ++i) {
            if (i < sf.rank && i < cols)
                y(i) = c(i) / static_cast<double>(sf.S(i, i));
            else if (std::abs(c(i) - std::round(c(i))) > tol)
                sol.solvable = false;
        }
        break;
    }

    if (!sol.solvable) return sol;

    Cochain x;
    x.degree = target.degree - 1;
    x.ring = target.ring;
    x.mod = target.mod;
    x.vals = sf.V.cast<double>() * y;
    x.reduce();
    if (!cochain_is_zero(cochain_sub(coboundary(C, x), target), std::max(tol, 1e-7)))
        throw Error("coboundary solver produced an invalid solution");
    sol.witness = std::move(x);
    return sol;
}

bool is_coboundary(const Complex2& C, const Cochain& target, double tol) {
    return solve_coboundary(C, target, tol).solvable;
}

std::vector<Cochain> h1_representatives(const Complex2& C, int m) {
    if (m < 2) throw Unsupported("h1_representatives needs a modulus >= 2");
    const int E = C.n_edges();
    const SmithForm& sf = cached_smith(C.d1());

    // Generators of the cocycle lattice mod m, in edge coordinates.
    std::vector<IVec> gens;
    for (int i = 0; i < E; ++i) {
        long long scale = 1;
        if (i < sf.rank) {
            long long g = std::gcd(sf.S(i, i), static_cast<long long>(m));
            scale = m / g;
            if (scale % m == 0) continue;
        }
        IVec v = scale * sf.V.col(i);
        for (int j = 0; j < E; ++j) v(j) = reduce_mod(v(j), m);
        gens.push_back(v);
    }

    auto as_cochain = [&](const IVec& v) {
        Cochain x = Cochain::zeros(C, 1, Ring::Zm, m);
        for (int j = 0; j < E; ++j) x.vals(j) = static_cast<double>(v(j));
        return x;
    };

    std::set<std::vector<long long>> seen;
    std::queue<IVec> frontier;
    std::vector<Cochain> reps;
    IVec zero = IVec::Zero(E);
    seen.insert(std::vector<long long>(E, 0));
    frontier.push(zero);
    reps.push_back(as_cochain(zero));

    while (!frontier.empty()) {
        IVec u = frontier.front();
        frontier.pop();
        for (const IVec& g : gens) {
            IVec w = u + g;
            for (int j = 0; j < E; ++j) w(j) = reduce_mod(w(j), m);
            std::vector<long long> key(w.data(), w.data() + E);
            if (!seen.insert(key).second) continue;
            if (seen.size() > 65536)
                throw Unsupported("cocycle group too large to enumerate");
            frontier.push(w);
            Cochain xw = as_cochain(w);
            bool fresh = true;
            for (const Cochain& r : reps)
                if (is_coboundary(C, cochain_sub(xw, r))) {
                    fresh = false;
                    break;
                }
            if (fresh) reps.push_back(xw);
        }
    }
    return reps;
}

std::vector<Cochain> h1_representatives(const Complex2& C, Ring ring, int mod) {
    if (ring != Ring::Zm)
        throw Unsupported("h1_representatives needs a finite coefficient group");
    return h1_representatives(C, mod);
}

} // namespace gerbeloop
