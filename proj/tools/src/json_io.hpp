#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gerbeloop/cell_complex.hpp"
#include "gerbeloop/chart_forms.hpp"
#include "gerbeloop/extension.hpp"
#include "gerbeloop/groups.hpp"
#include "gerbeloop/lattice_bundle.hpp"

namespace gerbeloop::cli {

using Json = nlohmann::ordered_json;

/* Deterministic serialization: insertion-ordered keys, two-space indent,
 * every float printed with 17 significant digits. */
std::string dump_report(const Json& j);

Json load_json_file(const std::string& path);

/* {"degree":1,"ring":"Zm","mod":2,"values":[...]} or a bare value array
 * (degree 1, Zm mod 2). "Z2" is accepted as shorthand for Zm mod 2. */
Cochain load_cochain_file(const Complex2& C, const std::string& path);

/* Mesh format {"vertices":n,"edges":[[tail,head],...],"faces":[[±e1,...],...],
 * "basepoint":0,"name":"..."} with 1-based signed edge indices in face words. */
Complex2 load_complex_file(const std::string& path);

/* {"faces":[...]} or a bare array, one value per face. */
std::vector<double> load_face_values(const Complex2& C, const std::string& path);

/* {"group":"so(3)","points":[[row-major matrix]...]} */
SampledPath load_group_loop(const std::string& path, GroupPtr* group);

/* {"complex":"torus"|{inline mesh},"group":"so(2)","edges":[[row-major
 * matrix],...],"samples":17} with one matrix per edge of the complex. */
LatticeBundle load_bundle_file(const std::string& path);

/* {"modes":[{"m":..,"n":..,"ac":..,"as":..}, ...]} */
FourierForm load_fourier_form(const std::string& path);

/* {"kind":"spin(3)"} names a builtin; an optional "sigma" key overrides the
 * split with a row-major algebra-coordinate matrix, which must still be a
 * right inverse of the projection derivative. */
CentralExtension load_extension_file(const std::string& path);

/* Descriptor for the schema above, including the split matrix in use. */
Json extension_to_json(const CentralExtension& E);

struct LoopsConfig {
    int fans = 2;
    int fan_size = 3;
    unsigned seed = 1;
    int max_triples = 0;
    int max_quadruples = 0;
};

/* {"fans":2,"fanSize":3,"seed":1,"maxTriples":0,"maxQuadruples":0}, every
 * key optional. The caller supplies the defaults to fill in. */
LoopsConfig load_loops_config(const std::string& path, LoopsConfig defaults);

Json to_json(const std::vector<double>& v);
Json to_json(const Eigen::VectorXd& v);

} // namespace gerbeloop::cli
