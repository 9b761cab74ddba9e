#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gerbeloop/errors.hpp"

namespace gerbeloop::cli {

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump_value(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * static_cast<size_t>(depth), ' ');
    const std::string inner(2 * static_cast<size_t>(depth + 1), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += inner;
            out += Json(it.key()).dump();
            out += ": ";
            dump_value(it.value(), out, depth + 1);
            if (k + 1 < j.size()) out += ",";
            out += "\n";
        }
        out += pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (size_t k = 0; k < j.size(); ++k) {
            out += inner;
            dump_value(j[k], out, depth + 1);
            if (k + 1 < j.size()) out += ",";
            out += "\n";
        }
        out += pad + "]";
        return;
    }
    case Json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace

std::string dump_report(const Json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Unsupported("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Unsupported(path + ": " + e.what());
    }
    return j;
}

namespace {

Json expect_array(const Json& j, const char* key, const std::string& path) {
    if (j.is_array()) return j;
    if (j.is_object() && j.contains(key) && j[key].is_array()) return j[key];
    throw Unsupported(path + ": expected an array or an object with \"" +
                      std::string(key) + "\"");
}

GroupPtr group_from_name(const std::string& name) {
    auto arg = [&](const char* head) -> int {
        std::string h(head);
        if (name.size() <= h.size() + 1 || name.compare(0, h.size(), h) != 0)
            return -1;
        if (name[h.size()] != '(' || name.back() != ')') return -1;
        return std::stoi(name.substr(h.size() + 1, name.size() - h.size() - 2));
    };
    if (int n = arg("so"); n > 0) return GroupDesc::so(n);
    if (int n = arg("spin"); n > 0) return GroupDesc::spin(n);
    if (int n = arg("spinc"); n > 0) return GroupDesc::spinc(n);
    if (int n = arg("rn"); n > 0) return GroupDesc::rn(n);
    if (int n = arg("zm"); n > 1) return GroupDesc::zm(n);
    if (name == "u1") return GroupDesc::u1();
    if (name == "z2") return GroupDesc::z2();
    if (name == "r") return GroupDesc::real_line();
    if (name == "heisenberg") return GroupDesc::heisenberg();
    throw Unsupported("unknown group \"" + name + "\"");
}

} // namespace

Cochain load_cochain_file(const Complex2& C, const std::string& path) {
    Json j = load_json_file(path);
    int degree = 1;
    Ring ring = Ring::Zm;
    int mod = 2;
    Json values;
    if (j.is_array()) {
        values = j;
    } else if (j.is_object()) {
        degree = j.value("degree", 1);
        std::string rname = j.value("ring", std::string("Zm"));
        if (rname == "Z2") {
            ring = Ring::Zm;
            mod = 2;
        } else if (rname == "Zm") {
            ring = Ring::Zm;
            mod = j.value("mod", 2);
        } else if (rname == "Z") {
            ring = Ring::Z;
            mod = 0;
        } else if (rname == "R") {
            ring = Ring::R;
            mod = 0;
        } else if (rname == "U1") {
            ring = Ring::U1;
            mod = 0;
        } else {
            throw Unsupported(path + ": unknown ring \"" + rname + "\"");
        }
        if (!j.contains("values") || !j["values"].is_array())
            throw Unsupported(path + ": missing \"values\" array");
        values = j["values"];
    } else {
        throw Unsupported(path + ": expected an object or an array");
    }
    if (ring == Ring::Zm && mod < 2)
        throw Unsupported(path + ": Zm needs mod >= 2");
    Cochain c = Cochain::zeros(C, degree, ring, mod);
    if (static_cast<int>(values.size()) != c.vals.size())
        throw Unsupported(path + ": got " + std::to_string(values.size()) +
                          " values, complex " + C.name + " needs " +
                          std::to_string(c.vals.size()));
    for (int i = 0; i < c.vals.size(); ++i) {
        if (!values[i].is_number())
            throw Unsupported(path + ": values must be numbers");
        c.vals(i) = values[i].get<double>();
    }
    c.reduce();
    return c;
}

std::vector<double> load_face_values(const Complex2& C, const std::string& path) {
    Json arr = expect_array(load_json_file(path), "faces", path);
    if (static_cast<int>(arr.size()) != C.n_faces())
        throw Unsupported(path + ": got " + std::to_string(arr.size()) +
                          " values, complex " + C.name + " has " +
                          std::to_string(C.n_faces()) + " faces");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw Unsupported(path + ": face values must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

SampledPath load_group_loop(const std::string& path, GroupPtr* group) {
    Json j = load_json_file(path);
    if (!j.is_object() || !j.contains("group") || !j.contains("points"))
        throw Unsupported(path + ": expected {\"group\":..., \"points\":...}");
    std::string gname = j["group"].get<std::string>();
    GroupPtr G = group_from_name(gname);
    const Json& pts = j["points"];
    if (!pts.is_array() || pts.size() < 2)
        throw Unsupported(path + ": need at least two sample points");
    int d = G->mat_dim();
    SampledPath p;
    for (const auto& row : pts) {
        if (!row.is_array() || static_cast<int>(row.size()) != d * d)
            throw Unsupported(path + ": each point must list " +
                              std::to_string(d * d) + " row-major entries");
        Mat m(d, d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                m(i, k) = row[static_cast<size_t>(i * d + k)].get<double>();
        p.points.push_back(m);
    }
    if (group) *group = G;
    return p;
}

FourierForm load_fourier_form(const std::string& path) {
    Json arr = expect_array(load_json_file(path), "modes", path);
    FourierForm F;
    for (const auto& mj : arr) {
        if (!mj.is_object())
            throw Unsupported(path + ": each mode must be an object");
        FourierForm::Mode m;
        m.m = mj.value("m", 0);
        m.n = mj.value("n", 0);
        m.ac = mj.value("ac", 0.0);
        m.as = mj.value("as", 0.0);
        if (m.m == 0 && m.n == 0 && (m.ac != 0.0 || m.as != 0.0))
            throw Unsupported(path + ": the (0,0) mode has no periodic potential");
        F.modes.push_back(m);
    }
    if (F.modes.empty()) throw Unsupported(path + ": no modes given");
    return F;
}

LoopsConfig load_loops_config(const std::string& path, LoopsConfig defaults) {
    Json j = load_json_file(path);
    if (!j.is_object()) throw Unsupported(path + ": expected an object");
    LoopsConfig lc = defaults;
    lc.fans = j.value("fans", defaults.fans);
    lc.fan_size = j.value("fanSize", defaults.fan_size);
    lc.seed = j.value("seed", defaults.seed);
    lc.max_triples = j.value("maxTriples", defaults.max_triples);
    lc.max_quadruples = j.value("maxQuadruples", defaults.max_quadruples);
    if (lc.fans < 1 || lc.fan_size < 3)
        throw Unsupported(path + ": need fans >= 1 and fanSize >= 3");
    return lc;
}

namespace {

Complex2 complex_from_json(const Json& j, const std::string& path);

} // namespace

Complex2 load_complex_file(const std::string& path) {
    return complex_from_json(load_json_file(path), path);
}

LatticeBundle load_bundle_file(const std::string& path) {
    Json j = load_json_file(path);
    if (!j.is_object() || !j.contains("complex") || !j.contains("group") ||
        !j.contains("edges"))
        throw Unsupported(path + ": bundle needs complex, group and edges keys");
    Complex2 C = j["complex"].is_string()
                     ? builtin_complex(j["complex"].get<std::string>())
                     : complex_from_json(j["complex"], path);
    GroupPtr G = group_from_name(j["group"].get<std::string>());
    const Json& rows = j["edges"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != C.n_edges())
        throw Unsupported(path + ": need one edge matrix per edge (" +
                          std::to_string(C.n_edges()) + ")");
    const int d = G->mat_dim();
    std::vector<Mat> elems;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != d * d)
            throw Unsupported(path + ": each edge matrix must list " +
                              std::to_string(d * d) + " row-major entries");
        Mat m(d, d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                m(i, k) = row[static_cast<size_t>(i * d + k)].get<double>();
        if (!G->contains(m, 1e-8))
            throw Unsupported(path + ": edge matrix outside the structure group");
        elems.push_back(std::move(m));
    }
    int samples = j.value("samples", 17);
    try {
        LatticeBundle B = make_bundle(C, G, elems, samples);
        B.name = j.value("name", std::string("bundle:") + path);
        return B;
    } catch (const Unsupported&) {
        throw;
    } catch (const Error& e) {
        throw Unsupported(path + ": " + e.what());
    }
}

namespace {

Complex2 complex_from_json(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges") ||
        !j.contains("faces"))
        throw Unsupported(path + ": mesh needs vertices, edges and faces keys");
    Complex2 C;
    C.name = j.value("name", std::string("mesh:") + path);
    C.n_vertices = j["vertices"].get<int>();
    for (const Json& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw Unsupported(path + ": each edge is a [tail, head] pair");
        C.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    for (const Json& w : j["faces"]) {
        Face f;
        for (const Json& s : w) f.word.push_back(s.get<int>());
        C.faces.push_back(std::move(f));
    }
    C.basepoint = j.value("basepoint", 0);
    try {
        C.validate();
    } catch (const Error& e) {
        throw Unsupported(path + ": " + e.what());
    }
    return C;
}

} // namespace

CentralExtension load_extension_file(const std::string& path) {
    Json j = load_json_file(path);
    if (!j.is_object() || !j.contains("kind"))
        throw Unsupported(path + ": expected an object with a \"kind\" key");
    CentralExtension E = make_extension(j["kind"].get<std::string>());
    if (j.contains("sigma")) {
        const Json& rows = j["sigma"];
        const int dh = E.Ghat->alg_dim(), dg = E.G->alg_dim();
        if (!rows.is_array() || static_cast<int>(rows.size()) != dh)
            throw Unsupported(path + ": sigma needs " + std::to_string(dh) + " rows");
        Eigen::MatrixXd s(dh, dg);
        for (int i = 0; i < dh; ++i) {
            if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dg)
                throw Unsupported(path + ": sigma rows need " + std::to_string(dg) +
                                  " entries");
            for (int k = 0; k < dg; ++k) s(i, k) = rows[i][k].get<double>();
        }
        Eigen::MatrixXd check = E.tstar_mat * s;
        if ((check - Eigen::MatrixXd::Identity(dg, dg)).norm() > 1e-10)
            throw Unsupported(path + ": sigma is not a right inverse of the projection");
        E.sigma_mat = s;
        E.descr += "+sigma";
    }
    return E;
}

Json extension_to_json(const CentralExtension& E) {
    Json j;
    j["kind"] = E.descr;
    j["dims"] = {{"kernel", E.A->mat_dim()},
                 {"total", E.Ghat->mat_dim()},
                 {"base", E.G->mat_dim()}};
    Json rows = Json::array();
    for (int i = 0; i < E.sigma_mat.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < E.sigma_mat.cols(); ++k) row.push_back(E.sigma_mat(i, k));
        rows.push_back(row);
    }
    j["sigma"] = rows;
    return j;
}

Json to_json(const std::vector<double>& v) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

Json to_json(const Eigen::VectorXd& v) {
    Json arr = Json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

} // namespace gerbeloop::cli
