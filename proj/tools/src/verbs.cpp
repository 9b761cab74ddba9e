#include "verbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>

#include "gerbeloop/chart_forms.hpp"
#include "gerbeloop/errors.hpp"
#include "gerbeloop/lifting_gerbe.hpp"
#include "gerbeloop/loop_registry.hpp"
#include "gerbeloop/spin_structures.hpp"
#include "gerbeloop/transgression.hpp"

namespace gerbeloop::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

void log_note(const std::string& msg) {
    const char* lvl = std::getenv("GERBELOOP_LOG");
    if (lvl && *lvl) std::cerr << "[gerbeloop] " << msg << "\n";
}

double default_tol(const std::string& verb) {
    if (verb == "check-curving") return 1e-4;
    if (verb == "scalar-curvature" || verb == "transgress" || verb == "spinc-check")
        return 1e-8;
    return 1e-6;
}

std::string complex_name_for(const std::string& surface) {
    if (surface == "sphere") return "octahedron";
    if (surface == "genus2") return "genus(2)";
    return surface;
}

bool has_frame_model(const std::string& surface) {
    return surface == "sphere" || surface == "octahedron" || surface == "torus" ||
           surface == "genus2";
}

std::string default_extension_for(const GroupPtr& G) {
    if (G->kind == GroupKind::SOn) return "spin(" + std::to_string(G->n) + ")";
    if (G->kind == GroupKind::Rn && G->n == 2) return "heisenberg";
    throw Unsupported("no default extension for structure group " + G->name() +
                      "; pass --extension");
}

struct Setup {
    LiftingGerbe Gb;
    std::string ext_name;
    std::string bundle_name;
    std::string surface_name;
};

bool looks_like_file(const std::string& s) {
    return s.size() > 5 && s.compare(s.size() - 5, 5, ".json") == 0;
}

CentralExtension named_extension(const std::string& name) {
    return looks_like_file(name) ? load_extension_file(name) : make_extension(name);
}

Setup build_setup(const RunConfig& cfg, const std::string& fallback_ext,
                  const std::string& fallback_surface = "torus") {
    Setup S;
    if (!cfg.bundle.empty()) {
        LatticeBundle B = looks_like_file(cfg.bundle) ? load_bundle_file(cfg.bundle)
                                                      : builtin_bundle(cfg.bundle);
        S.ext_name = cfg.extension.empty() ? default_extension_for(B.G) : cfg.extension;
        S.bundle_name = cfg.bundle;
        S.surface_name = B.base.name;
        S.Gb = make_gerbe(std::move(B), named_extension(S.ext_name));
    } else {
        S.ext_name = cfg.extension.empty() ? fallback_ext : cfg.extension;
        CentralExtension E = named_extension(S.ext_name);
        std::string surface = cfg.surface.empty() ? fallback_surface : cfg.surface;
        if (E.G->kind == GroupKind::SOn && E.G->n == 2 && has_frame_model(surface)) {
            FrameBundleModel FM = frame_bundle_model(surface);
            S.bundle_name = FM.bundle.name;
            S.surface_name = FM.surface.name;
            S.Gb = make_gerbe(std::move(FM.bundle), std::move(E));
        } else {
            Complex2 C = looks_like_file(surface)
                             ? load_complex_file(surface)
                             : builtin_complex(complex_name_for(surface));
            LatticeBundle B = make_flat_bundle(C, E.G, 5);
            S.bundle_name = "flat/" + E.G->name() + "/" + C.name;
            S.surface_name = C.name;
            S.Gb = make_gerbe(std::move(B), std::move(E));
        }
    }
    S.Gb.validate();
    log_note("gerbe over " + S.bundle_name + " through " + S.ext_name);
    return S;
}

Json base_inputs(const RunConfig& cfg, const Setup& S, double tol) {
    Json in = Json::object();
    in["extension"] = S.ext_name;
    in["bundle"] = S.bundle_name;
    in["surface"] = S.surface_name;
    in["seed"] = cfg.seed;
    in["tol"] = tol;
    in["quadDepth"] = cfg.quad_depth;
    if (!cfg.rho_path.empty()) in["rho"] = cfg.rho_path;
    if (!cfg.twist_path.empty()) in["twist"] = cfg.twist_path;
    if (!cfg.loop_path.empty()) in["loop"] = cfg.loop_path;
    if (!cfg.loops_config_path.empty()) in["loopsConfig"] = cfg.loops_config_path;
    return in;
}

LoopsConfig resolve_loops(const RunConfig& cfg, LoopsConfig defaults) {
    defaults.seed = cfg.seed;
    if (cfg.loops_config_path.empty()) return defaults;
    return load_loops_config(cfg.loops_config_path, defaults);
}

Lift chosen_lift(const Setup& S, const RunConfig& cfg) {
    if (cfg.twist_path.empty()) return witness_lift(S.Gb);
    Cochain alpha = load_cochain_file(S.Gb.bundle.base, cfg.twist_path);
    return twisted_lift(S.Gb, alpha);
}

std::string ring_label(const Cochain& c) {
    switch (c.ring) {
    case Ring::Z: return "Z";
    case Ring::Zm: return "Zm";
    case Ring::R: return "R";
    case Ring::U1: return "U1";
    }
    return "?";
}

Json cochain_json(const Cochain& c) {
    Json j = Json::object();
    j["degree"] = c.degree;
    j["ring"] = ring_label(c);
    if (c.ring == Ring::Zm) j["mod"] = c.mod;
    j["values"] = to_json(c.vals);
    return j;
}

/* Closed loop through the identity of the structure group, used to move a
 * loop lift to a different sheet of the same base loop. */
SampledPath closed_group_loop(const GroupPtr& G, int which, int samples) {
    if (G->kind == GroupKind::SOn) {
        int a = 0, b = 1;
        double turns = 1.0;
        if (which % 2 == 1) {
            if (G->n >= 3) {
                a = 1;
                b = 2;
            } else {
                turns = 2.0;
            }
        }
        Mat X = Mat::Zero(G->n, G->n);
        X(a, b) = -2.0 * kPi * turns;
        X(b, a) = 2.0 * kPi * turns;
        return one_parameter_loop(G, X, samples);
    }
    if (G->kind == GroupKind::Rn) {
        int d = G->n;
        double r = which % 2 == 0 ? 0.7 : 1.3;
        SampledPath p;
        for (int k = 0; k < samples; ++k) {
            double t = static_cast<double>(k) / (samples - 1);
            Mat m = G->identity();
            m(0, d) += r * (std::cos(2.0 * kPi * t) - 1.0);
            if (d >= 2) m(1, d) += r * std::sin(2.0 * kPi * t);
            p.points.push_back(m);
        }
        return p;
    }
    throw Unsupported("no builtin fiber loop for group " + G->name());
}

/* Canonical horizontal lifts of registry loops, built on demand. */
struct LiftCache {
    const LatticeBundle* B = nullptr;
    const LoopRegistry* R = nullptr;
    std::map<int, LoopLift> lifts;

    const LoopLift& get(int loop_index) {
        auto it = lifts.find(loop_index);
        if (it == lifts.end())
            it = lifts.emplace(loop_index, horizontal_loop_lift(*B, R->loops[loop_index]))
                     .first;
        return it->second;
    }
};

VerbResult verb_obstruction(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    Cochain w = obstruction_cocycle(S.Gb);
    CohomologySolution cls = obstruction_class(S.Gb);
    r.results["cocycle"] = cochain_json(w);
    r.results["classTrivial"] = cls.solvable;
    Json inv = Json::array();
    for (long long v : cls.obstruction_invariants) inv.push_back(v);
    r.results["obstructionInvariants"] = inv;
    r.passed = true;
    return r;
}

VerbResult verb_lifts(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    CohomologySolution cls = obstruction_class(S.Gb);
    r.results["classTrivial"] = cls.solvable;
    if (!cls.solvable) {
        r.results["liftClasses"] = 0;
        r.passed = true;
        return r;
    }
    if (!S.Gb.ext.kernel_is_discrete) {
        Lift L = witness_lift(S.Gb);
        r.results["kernelDiscrete"] = false;
        r.results["witnessAlpha"] = cochain_json(lift_alpha(S.Gb, L));
        r.passed = true;
        return r;
    }
    std::vector<Lift> lifts = enumerate_lifts(S.Gb);
    Ring ring;
    int mod;
    kernel_ring(S.Gb.ext, &ring, &mod);
    int h1 = static_cast<int>(h1_representatives(S.Gb.bundle.base, mod).size());
    bool pairwise_distinct = true;
    for (size_t i = 0; i < lifts.size(); ++i)
        for (size_t j = i + 1; j < lifts.size(); ++j)
            if (lifts_equivalent(S.Gb, lifts[i], lifts[j])) pairwise_distinct = false;
    Json alphas = Json::array();
    for (const Lift& L : lifts) alphas.push_back(to_json(lift_alpha(S.Gb, L).vals));
    r.results["kernelDiscrete"] = true;
    r.results["liftClasses"] = static_cast<int>(lifts.size());
    r.results["h1Classes"] = h1;
    r.results["pairwiseInequivalent"] = pairwise_distinct;
    r.results["alphas"] = alphas;
    r.passed = pairwise_distinct && static_cast<int>(lifts.size()) == h1;
    return r;
}

VerbResult verb_scalar_curvature(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    Lift L = chosen_lift(S, cfg);
    ScalarCurvature sc = scalar_curvature(S.Gb, L, nullptr, true);
    double err = 0.0, total = 0.0;
    for (size_t f = 0; f < sc.face_values.size(); ++f) {
        total += sc.face_values[f];
        err = std::max(err, std::abs(sc.face_values[f] - (*sc.sampled_values)[f]));
    }
    r.results["faceValues"] = to_json(sc.face_values);
    r.results["sampledValues"] = to_json(*sc.sampled_values);
    r.results["total"] = total;
    r.max_error = err;
    r.passed = err <= tol;
    return r;
}

VerbResult verb_check_curving(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "heisenberg");
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    const double h = 0.2;
    const int n_samples = 6;
    CurvingCheck chk = check_curving_identity(S.Gb, 0, h, n_samples, cfg.seed, tol);
    r.results["coarseH"] = chk.coarse_h;
    r.results["fineH"] = chk.fine_h;
    r.results["coarseError"] = chk.coarse_err;
    r.results["fineError"] = chk.fine_err;
    r.results["ratio"] = chk.ratio();
    r.results["samples"] = n_samples;
    r.max_error = chk.fine_err;
    r.passed = chk.passed;
    return r;
}

VerbResult verb_transgress(const RunConfig& cfg, double tol) {
    VerbResult r;
    FourierForm F;
    if (!cfg.rho_path.empty())
        F = load_fourier_form(cfg.rho_path);
    else
        F = sample_fourier_form(cfg.seed);

    const double y0 = 0.3;
    ChartLoop circle;
    circle.pos = [y0](double t) { return Eigen::Vector2d(t, y0); };
    circle.vel = [](double) { return Eigen::Vector2d(1.0, 0.0); };
    auto vertical = [](double) { return Eigen::Vector2d(0.0, 1.0); };
    auto tangent = [&circle](double t) { return circle.vel(t); };

    int panels = 1 << std::max(4, cfg.quad_depth);
    double value = transgress_form(F.form(), circle, vertical, panels);
    double refined = transgress_form(F.form(), circle, vertical, 2 * panels);

    double closed = 0.0;
    for (const auto& m : F.modes)
        if (m.m == 0)
            closed += m.ac * std::cos(2.0 * kPi * m.n * y0) +
                      m.as * std::sin(2.0 * kPi * m.n * y0);

    double tangent_value = transgress_form(F.form(), circle, tangent, panels);

    Eigen::Vector2d lo(0.1, 0.2), hi(0.45, 0.7);
    Eigen::Vector2d bl = lo, br(hi.x(), lo.y()), tr = hi, tl(lo.x(), hi.y());
    int stokes_panels = std::max(256, panels);
    double area = rect_form_integral(F, lo, hi, stokes_panels);
    double boundary = segment_potential_integral(F, bl, br, stokes_panels) +
                      segment_potential_integral(F, br, tr, stokes_panels) +
                      segment_potential_integral(F, tr, tl, stokes_panels) +
                      segment_potential_integral(F, tl, bl, stokes_panels);

    r.inputs["rho"] = cfg.rho_path.empty() ? "fourier:" + std::to_string(cfg.seed)
                                           : cfg.rho_path;
    r.inputs["seed"] = cfg.seed;
    r.inputs["tol"] = tol;
    r.inputs["quadDepth"] = cfg.quad_depth;
    r.results["value"] = value;
    r.results["refinedValue"] = refined;
    r.results["closedForm"] = closed;
    r.results["tangentValue"] = tangent_value;
    r.results["stokesArea"] = area;
    r.results["stokesBoundary"] = boundary;
    r.max_error = std::max({std::abs(value - closed), std::abs(value - refined),
                            std::abs(tangent_value), std::abs(area - boundary)});
    r.passed = r.max_error <= tol;
    return r;
}

struct FusionLab {
    Setup S;
    LoopRegistry R;
    std::vector<RegistryTriple> triples;
    LiftCache cache;
    std::map<std::array<int, 3>, Mat> f_cache;

    Mat fusion(const PathFan& fan, int fan_index, int a, int b, int c) {
        std::array<int, 3> key{fan_index * 1000000 + a, b, c};
        auto it = f_cache.find(key);
        if (it != f_cache.end()) return it->second;
        PathTriple t{fan.paths[a], fan.paths[b], fan.paths[c]};
        std::array<LoopLift, 3> lifts{cache.get(fan.beta[a][b]), cache.get(fan.beta[b][c]),
                                      cache.get(fan.beta[a][c])};
        Mat f = fusion_value(S.Gb, t, lifts).f_value;
        f_cache.emplace(key, f);
        return f;
    }
};

VerbResult verb_fusion_check(const RunConfig& cfg, double tol) {
    LoopsConfig defaults;
    defaults.fans = 4;
    defaults.fan_size = 6;
    LoopsConfig lc = resolve_loops(cfg, defaults);

    FusionLab lab{build_setup(cfg, "spin(2)"), {}, {}, {}, {}};
    const LatticeBundle& B = lab.S.Gb.bundle;
    lab.R = make_loop_registry(B.base, lc.fans, lc.seed, lc.fan_size);
    lab.triples = registry_triples(lab.R);
    lab.cache.B = &B;
    lab.cache.R = &lab.R;

    VerbResult r;
    r.inputs = base_inputs(cfg, lab.S, tol);
    r.inputs["fans"] = lc.fans;
    r.inputs["fanSize"] = lc.fan_size;

    const int fiber_samples = 33;
    SampledPath gl0 = closed_group_loop(B.G, 0, fiber_samples);
    SampledPath gl1 = closed_group_loop(B.G, 1, fiber_samples);

    /* Cocycle law over changing lifts of a fixed base loop. */
    double cocycle_max = 0.0;
    std::vector<int> law_loops;
    for (const RegistryTriple& t : lab.triples) {
        if (static_cast<int>(law_loops.size()) >= 4) break;
        if (std::find(law_loops.begin(), law_loops.end(), t.b12) == law_loops.end())
            law_loops.push_back(t.b12);
    }
    for (int li : law_loops) {
        const LoopLift& l1 = lab.cache.get(li);
        LoopLift l2 = fiber_inserted(B, l1, 0, gl0);
        int step2 = std::min<int>(1, static_cast<int>(l1.base_loop.word.size()) - 1);
        LoopLift l3 = fiber_inserted(B, l1, step2, gl1);
        GroupElement g12 = loop_cocycle(lab.S.Gb, l1, l2);
        GroupElement g23 = loop_cocycle(lab.S.Gb, l2, l3);
        GroupElement g13 = loop_cocycle(lab.S.Gb, l1, l3);
        cocycle_max = std::max(cocycle_max, mat_dist(Mat(g12.m * g23.m), g13.m));
    }

    /* Fusion under changes of the three chosen lifts. */
    double change_max = 0.0;
    int triples_used = 0;
    int combo_cursor = 1;
    for (size_t fi = 0; fi < lab.R.fans.size(); ++fi) {
        const PathFan& fan = lab.R.fans[fi];
        int n = static_cast<int>(fan.paths.size());
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c) {
                    if (lc.max_triples > 0 && triples_used >= lc.max_triples) goto triples_done;
                    ++triples_used;
                    PathTriple t{fan.paths[a], fan.paths[b], fan.paths[c]};
                    const LoopLift& l12 = lab.cache.get(fan.beta[a][b]);
                    const LoopLift& l23 = lab.cache.get(fan.beta[b][c]);
                    const LoopLift& l13 = lab.cache.get(fan.beta[a][c]);
                    Mat f = lab.fusion(fan, static_cast<int>(fi), a, b, c);
                    LoopLift alt12 = fiber_inserted(B, l12, 0, gl0);
                    LoopLift alt23 = fiber_inserted(B, l23, 0, gl1);
                    LoopLift alt13 = fiber_inserted(B, l13, 0, gl0);
                    Mat g12 = loop_cocycle(lab.S.Gb, l12, alt12).m;
                    Mat g23 = loop_cocycle(lab.S.Gb, l23, alt23).m;
                    Mat g13 = loop_cocycle(lab.S.Gb, l13, alt13).m;
                    bool full = triples_used <= 4;
                    for (int combo = 1; combo < 8; ++combo) {
                        if (!full && combo != (combo_cursor % 7) + 1) continue;
                        std::array<LoopLift, 3> lifts{combo & 1 ? alt12 : l12,
                                                      combo & 2 ? alt23 : l23,
                                                      combo & 4 ? alt13 : l13};
                        Mat fprime = fusion_value(lab.S.Gb, t, lifts).f_value;
                        Mat expected = f;
                        if (combo & 1) expected = expected * g12.inverse();
                        if (combo & 2) expected = expected * g23.inverse();
                        if (combo & 4) expected = expected * g13;
                        change_max = std::max(change_max, mat_dist(fprime, expected));
                    }
                    if (!full) ++combo_cursor;
                }
    }
triples_done:;

    /* Associativity across quadruples inside each fan. */
    double quad_max = 0.0;
    int quads_used = 0;
    for (size_t fi = 0; fi < lab.R.fans.size(); ++fi) {
        const PathFan& fan = lab.R.fans[fi];
        int n = static_cast<int>(fan.paths.size());
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    for (int d = c + 1; d < n; ++d) {
                        if (lc.max_quadruples > 0 && quads_used >= lc.max_quadruples)
                            goto quads_done;
                        ++quads_used;
                        int fidx = static_cast<int>(fi);
                        Mat lhs = lab.fusion(fan, fidx, a, b, c) * lab.fusion(fan, fidx, a, c, d);
                        Mat rhs = lab.fusion(fan, fidx, b, c, d) * lab.fusion(fan, fidx, a, b, d);
                        quad_max = std::max(quad_max, mat_dist(lhs, rhs));
                    }
    }
quads_done:;

    r.results["loops"] = lab.R.n_loops();
    r.results["triples"] = triples_used;
    r.results["quadruples"] = quads_used;
    r.results["cocycleLawMax"] = cocycle_max;
    r.results["liftChangeMax"] = change_max;
    r.results["quadrupleLawMax"] = quad_max;
    r.max_error = std::max({cocycle_max, change_max, quad_max});

    if (!lab.S.Gb.ext.kernel_is_discrete) {
        log_note("rebuilding transport at doubled quadrature depth");
        FusionLab fine{Setup{}, {}, {}, {}, {}};
        fine.S.ext_name = lab.S.ext_name;
        fine.S.bundle_name = lab.S.bundle_name + "/fine";
        fine.S.surface_name = lab.S.surface_name;
        fine.S.Gb = make_gerbe(refine_bundle(B), named_extension(lab.S.ext_name));
        fine.R = lab.R;
        fine.cache.B = &fine.S.Gb.bundle;
        fine.cache.R = &fine.R;
        double fine_quad = 0.0;
        int fine_quads = 0;
        for (size_t fi = 0; fi < fine.R.fans.size() && fine_quads < 12; ++fi) {
            const PathFan& fan = fine.R.fans[fi];
            int n = static_cast<int>(fan.paths.size());
            for (int a = 0; a < n && fine_quads < 12; ++a)
                for (int b = a + 1; b < n && fine_quads < 12; ++b)
                    for (int c = b + 1; c < n && fine_quads < 12; ++c)
                        for (int d = c + 1; d < n && fine_quads < 12; ++d) {
                            ++fine_quads;
                            int fidx = static_cast<int>(fi);
                            Mat lhs = fine.fusion(fan, fidx, a, b, c) *
                                      fine.fusion(fan, fidx, a, c, d);
                            Mat rhs = fine.fusion(fan, fidx, b, c, d) *
                                      fine.fusion(fan, fidx, a, b, d);
                            fine_quad = std::max(fine_quad, mat_dist(lhs, rhs));
                        }
        }
        r.results["refinedQuadrupleLawMax"] = fine_quad;
        r.max_error = std::max(r.max_error, fine_quad);
    }

    r.passed = r.max_error <= tol;
    return r;
}

Json section_json(const CentralExtension& E, const LoopSection& s, const LoopRegistry& R) {
    Json values = Json::array();
    for (const auto& fe : s.assignment) values.push_back(E.a_scalar(fe.a_value));
    Json j = Json::object();
    j["loops"] = static_cast<int>(s.assignment.size());
    j["labels"] = [&] {
        Json arr = Json::array();
        for (const auto& l : R.labels) arr.push_back(l);
        return arr;
    }();
    j["values"] = values;
    j["claimedCurvature"] = to_json(s.claimed_curvature);
    return j;
}

VerbResult verb_section_from_lift(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    LoopsConfig lc = resolve_loops(cfg, {});
    LoopRegistry R = make_loop_registry(S.Gb.bundle.base, lc.fans, lc.seed, lc.fan_size);
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    Lift L = chosen_lift(S, cfg);
    LoopSection s = section_from_lift(S.Gb, R, L);
    SectionReport rep = verify_section(S.Gb, R, s, tol);
    r.results["section"] = section_json(S.Gb.ext, s, R);
    r.results["maxFusionError"] = rep.max_fusion_error;
    r.results["maxCurvatureError"] = rep.max_curvature_error;
    if (!rep.failure.empty()) r.results["failure"] = rep.failure;
    r.max_error = std::max(rep.max_fusion_error, rep.max_curvature_error);
    r.passed = rep.passed;
    return r;
}

VerbResult verb_verify_section(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    LoopsConfig lc = resolve_loops(cfg, {});
    LoopRegistry R = make_loop_registry(S.Gb.bundle.base, lc.fans, lc.seed, lc.fan_size);
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    Lift L = chosen_lift(S, cfg);
    LoopSection s = section_from_lift(S.Gb, R, L);
    SectionReport rep = verify_section(S.Gb, R, s, tol);
    double rho_err = 0.0;
    if (!cfg.rho_path.empty()) {
        std::vector<double> rho = load_face_values(S.Gb.bundle.base, cfg.rho_path);
        for (size_t f = 0; f < rho.size(); ++f)
            rho_err = std::max(rho_err, std::abs(s.claimed_curvature[f] - rho[f]));
        r.results["rhoMatchError"] = rho_err;
    }
    r.results["maxFusionError"] = rep.max_fusion_error;
    r.results["maxCurvatureError"] = rep.max_curvature_error;
    r.results["verified"] = rep.passed;
    if (!rep.failure.empty()) r.results["failure"] = rep.failure;
    r.max_error = std::max({rep.max_fusion_error, rep.max_curvature_error, rho_err});
    r.passed = rep.passed && rho_err <= tol;
    return r;
}

VerbResult verb_reconstruct_lift(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    LoopsConfig lc = resolve_loops(cfg, {});
    LoopRegistry R = make_loop_registry(S.Gb.bundle.base, lc.fans, lc.seed, lc.fan_size);
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    Lift L = chosen_lift(S, cfg);
    LoopSection s = section_from_lift(S.Gb, R, L);
    Lift back = lift_from_section(S.Gb, R, s);
    bool eq = lifts_equivalent(S.Gb, L, back, std::min(tol, 1e-6));
    r.results["alphaIn"] = to_json(lift_alpha(S.Gb, L).vals);
    r.results["alphaOut"] = to_json(lift_alpha(S.Gb, back).vals);
    r.results["equivalent"] = eq;
    r.passed = eq;
    r.max_error = eq ? 0.0 : 1.0;
    return r;
}

VerbResult verb_spin_census(const RunConfig& cfg, double tol) {
    if (!cfg.extension.empty() && cfg.extension != "spin(2)")
        throw Unsupported("the census lifts oriented frame bundles through spin(2)");
    std::string surface = cfg.surface.empty() ? "torus" : cfg.surface;
    if (!has_frame_model(surface))
        throw Unsupported("no frame bundle model for surface " + surface);
    FrameBundleModel FM = frame_bundle_model(surface);
    CensusReport rep = spin_census(FM);
    VerbResult r;
    r.inputs["extension"] = "spin(2)";
    r.inputs["bundle"] = FM.bundle.name;
    r.inputs["surface"] = FM.surface.name;
    r.inputs["seed"] = cfg.seed;
    r.inputs["tol"] = tol;
    r.inputs["quadDepth"] = cfg.quad_depth;
    r.results["candidates"] = rep.candidates;
    r.results["lassoCount"] = rep.lasso_count;
    r.results["obstructionVanishes"] = rep.obstruction_vanishes;
    r.results["liftClasses"] = rep.lift_classes;
    r.results["fusionSections"] = rep.fusion_sections;
    r.results["h1Classes"] = rep.h1_count;
    r.results["countsAgree"] = rep.counts_agree;
    r.passed = rep.obstruction_vanishes && rep.counts_agree;
    return r;
}

VerbResult verb_monodromy(const RunConfig& cfg, double tol) {
    VerbResult r;
    r.inputs["seed"] = cfg.seed;
    r.inputs["tol"] = tol;
    r.inputs["quadDepth"] = cfg.quad_depth;
    int samples = 4 * std::max(4, cfg.quad_depth) + 1;
    if (!cfg.loop_path.empty()) {
        GroupPtr G;
        SampledPath loop = load_group_loop(cfg.loop_path, &G);
        r.inputs["loop"] = cfg.loop_path;
        r.inputs["group"] = G->name();
        int m = monodromy(G, loop);
        r.results["samples"] = static_cast<int>(loop.points.size());
        r.results["monodromy"] = m;
        r.passed = true;
        return r;
    }
    GroupPtr G = GroupDesc::so(3);
    Mat X = Mat::Zero(3, 3);
    X(0, 1) = -2.0 * kPi;
    X(1, 0) = 2.0 * kPi;
    int m2 = monodromy(G, one_parameter_loop(G, X, samples));
    int m4 = monodromy(G, one_parameter_loop(G, Mat(2.0 * X), 2 * samples));
    r.inputs["group"] = G->name();
    r.results["samples"] = samples;
    r.results["monodromy"] = m2;
    r.results["monodromy4pi"] = m4;
    r.results["productLaw"] = m2 * m2 == m4;
    r.passed = m2 * m2 == m4;
    return r;
}

VerbResult verb_spinc_check(const RunConfig& cfg, double tol) {
    RunConfig local = cfg;
    if (local.extension.empty()) local.extension = "spinc(2)";
    Setup S = build_setup(local, "spinc(2)");
    if (S.Gb.ext.kind != ExtKind::SpinC)
        throw Unsupported("spinc-check needs a spinc extension");
    VerbResult r;
    r.inputs = base_inputs(local, S, tol);
    Lift L = chosen_lift(S, local);
    Factor2Report rep = spinc_factor2(S.Gb, L, tol);
    double det_total = 0.0, sc_total = 0.0;
    for (double v : rep.det_face_curvature) det_total += v;
    for (double v : rep.scalar_face_values) sc_total += v;
    r.results["detFaceCurvature"] = to_json(rep.det_face_curvature);
    r.results["scalarFaceValues"] = to_json(rep.scalar_face_values);
    r.results["detTotal"] = det_total;
    r.results["scalarTotal"] = sc_total;
    r.max_error = rep.max_error;
    r.passed = rep.passed;
    return r;
}

VerbResult verb_verify_theorem_a(const RunConfig& cfg, double tol) {
    Setup S = build_setup(cfg, "spin(2)");
    LoopsConfig lc = resolve_loops(cfg, {});
    LoopRegistry R = make_loop_registry(S.Gb.bundle.base, lc.fans, lc.seed, lc.fan_size);
    VerbResult r;
    r.inputs = base_inputs(cfg, S, tol);
    const Complex2& C = S.Gb.bundle.base;

    if (S.Gb.ext.kernel_is_discrete) {
        std::vector<Lift> lifts = enumerate_lifts(S.Gb);
        Ring ring;
        int mod;
        kernel_ring(S.Gb.ext, &ring, &mod);
        int h1 = static_cast<int>(h1_representatives(C, mod).size());
        std::vector<LoopSection> sections;
        int verified = 0, round_trips = 0;
        double max_err = 0.0;
        for (const Lift& L : lifts) {
            LoopSection s = section_from_lift(S.Gb, R, L);
            SectionReport rep = verify_section(S.Gb, R, s, tol);
            max_err = std::max({max_err, rep.max_fusion_error, rep.max_curvature_error});
            if (rep.passed) ++verified;
            Lift back = lift_from_section(S.Gb, R, s);
            if (lifts_equivalent(S.Gb, L, back)) ++round_trips;
            sections.push_back(std::move(s));
        }
        bool distinct = true;
        for (size_t i = 0; i < sections.size(); ++i)
            for (size_t j = i + 1; j < sections.size(); ++j) {
                double gap = 0.0;
                for (size_t l = 0; l < sections[i].assignment.size(); ++l)
                    gap = std::max(gap, mat_dist(sections[i].assignment[l].a_value,
                                                 sections[j].assignment[l].a_value));
                if (gap <= tol) distinct = false;
            }
        int n = static_cast<int>(lifts.size());
        r.results["liftClasses"] = n;
        r.results["h1Classes"] = h1;
        r.results["sectionsVerified"] = verified;
        r.results["roundTripsPassed"] = round_trips;
        r.results["sectionsDistinct"] = distinct;
        r.max_error = max_err;
        r.passed = verified == n && round_trips == n && distinct && n == h1;
        return r;
    }

    std::vector<Cochain> twists;
    twists.push_back(Cochain::zeros(C, 1, Ring::U1));
    for (int i = 0; i < 8; ++i)
        twists.push_back(sample_flat_u1_twist(C, cfg.seed + 101 * (i + 1)));
    {
        std::mt19937 rng(cfg.seed + 7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Cochain v = Cochain::zeros(C, 0, Ring::U1);
        for (int i = 0; i < C.n_vertices; ++i) v.vals(i) = u(rng);
        Cochain partner = twists[1];
        partner.vals += coboundary(C, v).vals;
        partner.reduce();
        twists.push_back(partner);
    }
    SpincBijectionReport rep = spinc_bijection(S.Gb, R, twists, {}, tol);
    r.results["twists"] = rep.n_samples;
    r.results["roundTripsPassed"] = rep.round_trips_passed;
    r.results["distinctSectionsOk"] = rep.distinct_sections_ok;
    r.max_error = rep.max_error;
    r.passed = rep.passed;
    return r;
}

} // namespace

const std::vector<std::string>& verb_names() {
    static const std::vector<std::string> names = {
        "obstruction",       "lifts",          "scalar-curvature", "check-curving",
        "transgress",        "fusion-check",   "section-from-lift", "verify-section",
        "reconstruct-lift",  "spin-census",    "monodromy",        "spinc-check",
        "verify-theorem-a"};
    return names;
}

VerbResult run_verb(const RunConfig& cfg) {
    double tol = cfg.tol_set ? cfg.tol : default_tol(cfg.verb);
    log_note("running " + cfg.verb + " at tol " + std::to_string(tol));
    if (cfg.verb == "obstruction") return verb_obstruction(cfg, tol);
    if (cfg.verb == "lifts") return verb_lifts(cfg, tol);
    if (cfg.verb == "scalar-curvature") return verb_scalar_curvature(cfg, tol);
    if (cfg.verb == "check-curving") return verb_check_curving(cfg, tol);
    if (cfg.verb == "transgress") return verb_transgress(cfg, tol);
    if (cfg.verb == "fusion-check") return verb_fusion_check(cfg, tol);
    if (cfg.verb == "section-from-lift") return verb_section_from_lift(cfg, tol);
    if (cfg.verb == "verify-section") return verb_verify_section(cfg, tol);
    if (cfg.verb == "reconstruct-lift") return verb_reconstruct_lift(cfg, tol);
    if (cfg.verb == "spin-census") return verb_spin_census(cfg, tol);
    if (cfg.verb == "monodromy") return verb_monodromy(cfg, tol);
    if (cfg.verb == "spinc-check") return verb_spinc_check(cfg, tol);
    if (cfg.verb == "verify-theorem-a") return verb_verify_theorem_a(cfg, tol);
    throw Unsupported("unknown verb " + cfg.verb);
}

} // namespace gerbeloop::cli
