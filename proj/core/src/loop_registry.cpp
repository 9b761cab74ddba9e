#include "gerbeloop/loop_registry.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace gerbeloop {

namespace {

int signed_tail_vertex(const Complex2& C, int s) {
    const Edge& e = C.edges[std::abs(s) - 1];
    return s > 0 ? e.tail : e.head;
}

int signed_head_vertex(const Complex2& C, int s) {
    const Edge& e = C.edges[std::abs(s) - 1];
    return s > 0 ? e.head : e.tail;
}

std::vector<std::vector<int>> incidence(const Complex2& C) {
    std::vector<std::vector<int>> inc(C.n_vertices);
    for (int e = 0; e < C.n_edges(); ++e) {
        inc[C.edges[e].tail].push_back(e + 1);
        inc[C.edges[e].head].push_back(-(e + 1));
    }
    return inc;
}

int register_loop(LoopRegistry& R, const EdgePath& loop, const std::string& label) {
    int idx = find_loop(R, loop);
    if (idx >= 0) return idx;
    R.loops.push_back(loop);
    R.labels.push_back(label);
    return R.n_loops() - 1;
}

} // namespace

int find_loop(const LoopRegistry& R, const EdgePath& loop) {
    for (int i = 0; i < R.n_loops(); ++i)
        if (R.loops[i].start_vertex == loop.start_vertex && R.loops[i].word == loop.word)
            return i;
    return -1;
}

LoopRegistry make_loop_registry(const Complex2& C, int n_fans, unsigned seed, int fan_size) {
    C.validate();
    if (fan_size < 3 || fan_size > 8)
        throw Unsupported("path fans hold between three and eight paths");
    LoopRegistry R;
    R.base = C;

    std::vector<std::vector<int>> inc = incidence(C);
    R.parent_edge.assign(C.n_vertices, 0);
    std::vector<int> order;
    std::vector<bool> seen(C.n_vertices, false);
    std::deque<int> queue{C.basepoint};
    seen[C.basepoint] = true;
    R.edge_in_tree.assign(C.n_edges(), false);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (int s : inc[v]) {
            int w = signed_head_vertex(C, s);
            if (seen[w]) continue;
            seen[w] = true;
            R.parent_edge[w] = s;
            R.edge_in_tree[std::abs(s) - 1] = true;
            queue.push_back(w);
        }
    }
    if (static_cast<int>(order.size()) != C.n_vertices)
        throw BaseMismatch("complex is not connected");

    R.tree_paths.resize(C.n_vertices);
    for (int v : order) {
        if (v == C.basepoint) {
            R.tree_paths[v] = make_path(C, {});
            continue;
        }
        int s = R.parent_edge[v];
        EdgePath p = R.tree_paths[signed_tail_vertex(C, s)];
        p.word.push_back(s);
        R.tree_paths[v] = make_path(C, p.word);
    }

    register_loop(R, make_path(C, {}), "const");

    for (int e = 0; e < C.n_edges(); ++e) {
        if (R.edge_in_tree[e]) continue;
        EdgePath out = R.tree_paths[C.edges[e].tail];
        EdgePath loop = concat_path(C, out, make_path(C, {e + 1}));
        loop = concat_path(C, loop, reversed_path(C, R.tree_paths[C.edges[e].head]));
        R.lasso_edges.push_back(e);
        R.lasso_loop.push_back(register_loop(R, loop, "lasso e" + std::to_string(e)));
    }

    R.face_loop.resize(C.n_faces());
    R.face_insert_pos.resize(C.n_faces());
    for (int f = 0; f < C.n_faces(); ++f) {
        const EdgePath& out = R.tree_paths[C.face_base_vertex(f)];
        EdgePath loop = out;
        loop.word.insert(loop.word.end(), C.faces[f].word.begin(), C.faces[f].word.end());
        EdgePath back = reversed_path(C, out);
        loop.word.insert(loop.word.end(), back.word.begin(), back.word.end());
        loop = make_path(C, loop.word);
        R.face_loop[f] = register_loop(R, loop, "face f" + std::to_string(f));
        R.face_insert_pos[f] = out.steps();
    }

    std::mt19937 rng(seed);
    auto random_walk = [&](int length) {
        EdgePath p;
        p.start_vertex = C.basepoint;
        int v = C.basepoint;
        for (int i = 0; i < length; ++i) {
            const auto& opts = inc[v];
            std::uniform_int_distribution<int> pick(0, static_cast<int>(opts.size()) - 1);
            int s = opts[pick(rng)];
            p.word.push_back(s);
            v = signed_head_vertex(C, s);
        }
        return p;
    };

    for (int k = 0; k < n_fans; ++k) {
        PathFan fan;
        bool done = false;
        for (int attempt = 0; attempt < 60 && !done; ++attempt) {
            int length = 2 + attempt % 4;
            EdgePath first = random_walk(length);
            int far = path_end(C, first);
            std::vector<EdgePath> paths{first};
            for (int tries = 0; tries < 6000 && static_cast<int>(paths.size()) < fan_size;
                 ++tries) {
                EdgePath w = random_walk(length);
                if (path_end(C, w) != far) continue;
                bool dup = false;
                for (const EdgePath& q : paths) dup = dup || q.word == w.word;
                if (!dup) paths.push_back(w);
            }
            if (static_cast<int>(paths.size()) < fan_size) continue;
            fan.paths = paths;
            done = true;
        }
        if (!done)
            throw Unsupported("could not assemble a path fan on this complex");
        const int n = fan_size;
        fan.beta.assign(n, std::vector<int>(n, -1));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                EdgePath beta = composite_loop(C, fan.paths[i], fan.paths[j]);
                std::string label =
                    "beta f" + std::to_string(k) + ":" + std::to_string(i) + std::to_string(j);
                fan.beta[i][j] = register_loop(R, beta, label);
            }
        R.fans.push_back(std::move(fan));
    }
    return R;
}

std::vector<RegistryTriple> registry_triples(const LoopRegistry& R) {
    std::vector<RegistryTriple> out;
    for (const PathFan& fan : R.fans) {
        const int n = static_cast<int>(fan.paths.size());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    RegistryTriple t;
                    t.paths = {fan.paths[i], fan.paths[j], fan.paths[k]};
                    t.b12 = fan.beta[i][j];
                    t.b23 = fan.beta[j][k];
                    t.b13 = fan.beta[i][k];
                    t.midpoint_steps = fan.paths[i].steps();
                    out.push_back(std::move(t));
                }
    }
    return out;
}

} // namespace gerbeloop
