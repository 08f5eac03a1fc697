#include "junctionlab/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace jl {

namespace {
constexpr double PI = 3.14159265358979323846;
}

jvec apply_mat(const imat& M, const jvec& v) {
    size_t n = M.size();
    jvec out(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += M[i][j] * v[j];
    return out;
}

imat mat_mul(const imat& A, const imat& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    imat C(n, std::vector<long long>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t p = 0; p < k; ++p)
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][p] * B[p][j];
    return C;
}

imat identity_mat(int n) {
    imat I(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

Model slice_model(double eps, cplx t) {
    Model m;
    m.f = Poly({cplx(0.0), cplx(0.0), cplx(-3.0)});
    m.g = Poly({t * eps, cplx(0.0), cplx(0.0), cplx(2.0) - t});
    return m;
}

std::vector<cplx> slice_points(double eps, cplx t) {
    cplx c6 = (cplx(2.0) - t) * (cplx(2.0) - t) - cplx(4.0);
    cplx c3 = cplx(2.0) * (cplx(2.0) - t) * t * eps;
    cplx c0 = t * t * eps * eps;
    if (std::abs(c6) < 1e-12) throw numeric_error("family degenerate at this loop parameter");
    Poly d({c0, cplx(0.0), cplx(0.0), c3, cplx(0.0), cplx(0.0), c6});
    std::vector<cplx> pts = poly_roots(d);
    if (pts.size() != 6) throw numeric_error("family degenerate at this loop parameter");
    return pts;
}

namespace {

cplx loop_t(const FamilyLoop& loop, double theta) {
    return cplx(1.0 - loop.radius) + loop.radius * std::exp(cplx(0.0, theta));
}

// optimal assignment of cur points to prev slots, minimizing total distance
template <size_t K>
std::array<cplx, K> match_points(const std::array<cplx, K>& prev, const std::vector<cplx>& cur) {
    std::array<int, K> perm;
    std::iota(perm.begin(), perm.end(), 0);
    std::array<int, K> best = perm;
    double best_cost = 1e300;
    do {
        double cost = 0;
        for (size_t i = 0; i < K; ++i) cost += std::abs(prev[i] - cur[perm[i]]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::array<cplx, K> out;
    for (size_t i = 0; i < K; ++i) out[i] = cur[best[i]];
    return out;
}

std::array<int, 6> slot_order(const std::array<cplx, 6>& pts) {
    std::array<int, 6> order;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ccw_key(pts[a]) < ccw_key(pts[b]); });
    return order;
}

ivec2 pl_apply(const ivec2& gamma, const ivec2& x, bool inverse) {
    long long c = x[0] * gamma[1] - x[1] * gamma[0];
    long long s = inverse ? 1 : -1;
    return {x[0] + s * c * gamma[0], x[1] + s * c * gamma[1]};
}

struct BraidState {
    std::vector<ivec2> classes;
    imat T;
    std::vector<std::string> word;

    explicit BraidState(const std::vector<ivec2>& cl0)
        : classes(cl0), T(identity_mat(static_cast<int>(cl0.size()))) {}

    void exchange(int i) {
        int j = i + 1;
        ivec2 gi = classes[i], gj = classes[j];
        long long c = skew(gi, gj);
        classes[i] = pl_apply(gi, gj, true);
        classes[j] = gi;
        int n = static_cast<int>(classes.size());
        imat E = identity_mat(n);
        E[i][i] = 0;
        E[i][j] = 1;
        E[j][i] = 1;
        E[j][j] = c;
        T = mat_mul(E, T);
        word.push_back("ex" + std::to_string(i));
    }

    void rotate() {
        int n = static_cast<int>(classes.size());
        std::rotate(classes.rbegin(), classes.rbegin() + 1, classes.rend());
        imat P(n, std::vector<long long>(n, 0));
        P[0][n - 1] = 1;
        for (int k = 1; k < n; ++k) P[k][k - 1] = 1;
        T = mat_mul(P, T);
        word.push_back("rot");
    }
};

bool is_cyclic_shift(const std::array<int, 6>& prev, const std::array<int, 6>& cur) {
    if (cur[0] != prev[5]) return false;
    for (int k = 1; k < 6; ++k)
        if (cur[k] != prev[k - 1]) return false;
    return true;
}

}  // namespace

int loop_fiber_rotation(const FamilyLoop& loop) {
    const int steps = 720;
    auto fiber_roots = [&](double theta) {
        return cubic_roots(cplx(0.0), loop_t(loop, theta) * loop.eps);
    };
    std::vector<cplx> r0 = fiber_roots(0.0);
    std::array<cplx, 3> cur{r0[0], r0[1], r0[2]};
    const std::array<cplx, 3> start = cur;
    for (int k = 1; k <= steps; ++k) {
        cur = match_points<3>(cur, fiber_roots(2.0 * PI * k / steps));
    }
    // CCW labels at theta = 0
    std::array<int, 3> label;
    std::iota(label.begin(), label.end(), 0);
    std::stable_sort(label.begin(), label.end(),
                     [&](int a, int b) { return ccw_key(start[a]) < ccw_key(start[b]); });
    std::array<int, 3> to_label;  // start index -> CCW label
    for (int m = 0; m < 3; ++m) to_label[label[m]] = m;
    // tracked root starting at CCW label m ends nearest CCW label end[m]
    std::array<int, 3> end{};
    for (int i = 0; i < 3; ++i) {
        int bestj = -1;
        double bestd = 1e300;
        for (int j = 0; j < 3; ++j) {
            double d = std::abs(cur[i] - start[j]);
            if (d < bestd) {
                bestd = d;
                bestj = j;
            }
        }
        if (bestd > 1e-6) throw invariant_error("unsupported loop fiber monodromy");
        end[to_label[i]] = to_label[bestj];
    }
    for (int rho = 0; rho < 3; ++rho) {
        bool ok = true;
        for (int m = 0; m < 3; ++m)
            if (end[m] != (m + rho) % 3) ok = false;
        if (ok) return rho;
    }
    throw invariant_error("unsupported loop fiber monodromy");
}

imat2 fiber_monodromy(int rotation) {
    imat2 M{{{1, 0}, {0, 1}}};
    const imat2 step{{{0, 1}, {-1, 1}}};
    for (int k = 0; k < rotation; ++k) {
        imat2 next{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                next[i][j] = step[i][0] * M[0][j] + step[i][1] * M[1][j];
        M = next;
    }
    return M;
}

BraidOutcome extract_braid(const std::vector<ivec2>& classes0, const FamilyLoop& loop,
                           const Tolerances& tol) {
    if (classes0.size() != 6) throw invariant_error("loop transport expects six prongs");
    std::vector<cplx> init_raw = slice_points(loop.eps, loop_t(loop, 0.0));
    std::vector<cplx> init_sorted = init_raw;
    ccw_sort(init_sorted);
    std::array<cplx, 6> pts;
    for (int i = 0; i < 6; ++i) pts[i] = init_sorted[i];  // slot i = id i at theta 0
    const std::array<cplx, 6> initial = pts;
    std::array<int, 6> order = slot_order(pts);

    BraidState braid(classes0);

    // advance from the configuration at theta_a (pts/order) to theta_b,
    // bisecting whenever the angular-order change is not a single elementary event
    auto advance = [&](auto&& self, double theta_a, double theta_b, int depth) -> void {
        std::vector<cplx> raw = slice_points(loop.eps, loop_t(loop, theta_b));
        std::array<cplx, 6> cur = match_points<6>(pts, raw);
        if (depth == 0) {
            double maxmove = 0, minsep = 1e300;
            for (int i = 0; i < 6; ++i) {
                maxmove = std::max(maxmove, std::abs(cur[i] - pts[i]));
                for (int j = i + 1; j < 6; ++j)
                    minsep = std::min(minsep, std::abs(pts[i] - pts[j]));
            }
            if (maxmove >= 0.45 * minsep)
                throw numeric_error(
                    "discriminant points unstable over a loop step; increase loop steps");
        }
        std::array<int, 6> cur_order = slot_order(cur);
        if (cur_order == order) {
            pts = cur;
            return;
        }
        bool resolved = false;
        std::vector<int> swaps;
        if (is_cyclic_shift(order, cur_order)) {
            resolved = true;
        } else {
            std::array<int, 6> sim = order;
            int i = 0;
            bool ok = true;
            while (i < 5) {
                if (sim[i] == cur_order[i + 1] && sim[i + 1] == cur_order[i]) {
                    swaps.push_back(i);
                    std::swap(sim[i], sim[i + 1]);
                    i += 2;
                } else if (sim[i] == cur_order[i]) {
                    ++i;
                } else {
                    ok = false;
                    break;
                }
            }
            if (ok && sim == cur_order && !swaps.empty()) resolved = true;
        }
        if (!resolved) {
            if (depth >= 24)
                throw numeric_error("loop braid event could not be decomposed; points may collide");
            double mid = 0.5 * (theta_a + theta_b);
            self(self, theta_a, mid, depth + 1);
            self(self, mid, theta_b, depth + 1);
            return;
        }
        if (swaps.empty())
            braid.rotate();
        else
            for (int i : swaps) braid.exchange(i);
        pts = cur;
        order = cur_order;
    };

    for (int k = 1; k <= loop.steps; ++k) {
        double a = 2.0 * PI * (k - 1) / loop.steps;
        double b = 2.0 * PI * k / loop.steps;
        advance(advance, a, b, 0);
    }

    // the loop must close: final points coincide with the initial set
    std::vector<cplx> init_vec(initial.begin(), initial.end());
    std::array<cplx, 6> closed = match_points<6>(pts, init_vec);
    for (int i = 0; i < 6; ++i)
        if (std::abs(closed[i] - pts[i]) > 100 * tol.tol_merge)
            throw invariant_error("loop did not return to the initial configuration");

    BraidOutcome out;
    out.word = braid.word;
    out.classes = braid.classes;
    out.transport = braid.T;
    return out;
}

AutomorphismResult induced_automorphism(const std::vector<ivec2>& classes0,
                                        const std::vector<jvec>& kernel,
                                        const std::vector<jvec>& roots,
                                        const JunctionBasis& B, const FamilyLoop& loop,
                                        const Tolerances& tol) {
    BraidOutcome braid = extract_braid(classes0, loop, tol);
    int rho = loop_fiber_rotation(loop);
    imat2 Mt = fiber_monodromy(rho);

    const int n = static_cast<int>(classes0.size());
    AutomorphismResult res;
    res.braid_word = braid.word;
    res.transport = braid.transport;
    res.fiber_rotation = rho;
    // frame fix: the fiber monodromy carries each transported prong class back
    // to the initial class, up to a sign absorbed into the junction coordinates
    res.sig.assign(n, 1);
    for (int j = 0; j < n; ++j) {
        ivec2 v{Mt[0][0] * braid.classes[j][0] + Mt[0][1] * braid.classes[j][1],
                Mt[1][0] * braid.classes[j][0] + Mt[1][1] * braid.classes[j][1]};
        if (v == classes0[j])
            res.sig[j] = 1;
        else if (v[0] == -classes0[j][0] && v[1] == -classes0[j][1])
            res.sig[j] = -1;
        else
            throw invariant_error("transported prong classes do not match the loop frame");
    }
    res.matrix = braid.transport;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) res.matrix[i][j] *= res.sig[i];

    // validations: the automorphism must preserve the lattice structure exactly
    long long det = det_int(res.matrix);
    if (det != 1 && det != -1) throw invariant_error("lattice automorphism is not unimodular");
    for (size_t i = 0; i < kernel.size(); ++i)
        for (size_t j = i; j < kernel.size(); ++j)
            if (pairing(apply_mat(res.matrix, kernel[i]), apply_mat(res.matrix, kernel[j]), B) !=
                pairing(kernel[i], kernel[j], B))
                throw invariant_error("lattice automorphism does not preserve the pairing");
    std::set<jvec> rootset(roots.begin(), roots.end());
    for (const auto& r : roots)
        if (!rootset.count(apply_mat(res.matrix, r)))
            throw invariant_error("lattice automorphism does not preserve the root set");
    // charge equivariance with the fiber monodromy
    for (int j = 0; j < n; ++j) {
        jvec ej(n, 0);
        ej[j] = 1;
        ivec2 a = asymptotic_charge(apply_mat(res.matrix, ej), B);
        ivec2 want{Mt[0][0] * classes0[j][0] + Mt[0][1] * classes0[j][1],
                   Mt[1][0] * classes0[j][0] + Mt[1][1] * classes0[j][1]};
        if (a != want)
            throw invariant_error("lattice automorphism is not charge equivariant");
    }
    imat acc = identity_mat(n);
    const imat I = identity_mat(n);
    for (int p = 1; p <= 24; ++p) {
        acc = mat_mul(res.matrix, acc);
        if (acc == I) {
            res.order = p;
            break;
        }
    }
    return res;
}

namespace {

const std::map<std::string, imat>& cartan_catalog() {
    static const std::map<std::string, imat> cat = {
        {"A1", {{2}}},
        {"A2", {{2, -1}, {-1, 2}}},
        {"A3", {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}},
        {"A4", {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}},
        {"B2", {{2, -1}, {-2, 2}}},
        {"G2", {{2, -1}, {-3, 2}}},
        {"B3", {{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}}},
        {"C3", {{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}}},
        {"B4", {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -2, 2}}},
        {"C4", {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -2}, {0, 0, -1, 2}}},
        {"D4", {{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}}},
        {"F4", {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}}},
    };
    return cat;
}

std::string classify_cartan_component(const imat& cartan, const std::vector<int>& comp) {
    int n = static_cast<int>(comp.size());
    if (n > 4) throw invariant_error("unrecognized diagram");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (const auto& [label, ref] : cartan_catalog()) {
        if (static_cast<int>(ref.size()) != n) continue;
        std::vector<int> p = perm;
        do {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    if (cartan[comp[p[i]]][comp[p[j]]] != ref[i][j]) ok = false;
            if (ok) return label;
        } while (std::next_permutation(p.begin(), p.end()));
    }
    throw invariant_error("unrecognized diagram");
}

}  // namespace

std::string classify_cartan(const imat& cartan) {
    int n = static_cast<int>(cartan.size());
    if (n == 0) return "trivial";
    for (int i = 0; i < n; ++i)
        if (cartan[i][i] != 2) throw invariant_error("unrecognized diagram");
    // connected components via nonzero off-diagonals
    std::vector<int> seen(n, 0);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<int> comp, stack{i};
        seen[i] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int j = 0; j < n; ++j)
                if (j != v && !seen[j] && (cartan[v][j] != 0 || cartan[j][v] != 0)) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
        }
        std::sort(comp.begin(), comp.end());
        labels.push_back(classify_cartan_component(cartan, comp));
    }
    std::sort(labels.begin(), labels.end());
    std::string out;
    for (size_t k = 0; k < labels.size(); ++k) {
        if (k) out += "+";
        out += labels[k];
    }
    return out;
}

FoldResult fold(const AlgebraReport& rep, const std::vector<jvec>& roots, const imat& lambda,
                const JunctionBasis& B) {
    FoldResult out;
    const auto& simples = rep.simples;
    const int s = static_cast<int>(simples.size());
    if (s == 0) {
        out.folded_algebra = rep.algebra;
        return out;
    }
    const size_t N = B.cycles.size();
    // twice the Weyl vector: sum of the positive roots of the chosen system
    jvec rho2(N, 0);
    for (const auto& r : positive_roots(roots, B))
        for (size_t i = 0; i < N; ++i) rho2[i] += r[i];

    // walk lambda(2 rho) back into the chamber of the simple system; the
    // recorded reflections conjugate lambda into a simple-system stabilizer
    jvec v = apply_mat(lambda, rho2);
    std::vector<int> refl_word;
    for (int guard = 0;; ++guard) {
        if (guard >= 1000) throw invariant_error("no stable simple system found");
        int pick = -1;
        for (int i = 0; i < s; ++i)
            if (pairing2(v, simples[i], B) > 0) {
                pick = i;
                break;
            }
        if (pick < 0) break;
        long long c = pairing2(v, simples[pick], B);
        if (c % 2 != 0) throw invariant_error("no stable simple system found");
        for (size_t m = 0; m < N; ++m) v[m] += (c / 2) * simples[pick][m];
        refl_word.push_back(pick);
    }
    if (v != rho2) throw invariant_error("no stable simple system found");

    auto stabilized = [&](const jvec& x) {
        jvec y = apply_mat(lambda, x);
        for (int i : refl_word) {
            long long c = pairing2(y, simples[i], B);
            if (c % 2 != 0) throw invariant_error("no stable simple system found");
            for (size_t m = 0; m < N; ++m) y[m] += (c / 2) * simples[i][m];
        }
        return y;
    };

    out.perm.assign(s, -1);
    for (int i = 0; i < s; ++i) {
        jvec img = stabilized(simples[i]);
        auto it = std::find(simples.begin(), simples.end(), img);
        if (it == simples.end()) throw invariant_error("no stable simple system found");
        out.perm[i] = static_cast<int>(it - simples.begin());
    }

    std::vector<int> orbit_of(s, -1);
    for (int i = 0; i < s; ++i) {
        if (orbit_of[i] >= 0) continue;
        std::vector<int> orbit;
        int cur = i;
        while (orbit_of[cur] < 0) {
            orbit_of[cur] = static_cast<int>(out.orbits.size());
            orbit.push_back(cur);
            cur = out.perm[cur];
        }
        std::sort(orbit.begin(), orbit.end());
        out.orbits.push_back(orbit);
    }

    bool identity = true;
    for (int i = 0; i < s; ++i)
        if (out.perm[i] != i) identity = false;
    if (identity) {
        out.folding = false;
        out.folded_algebra = rep.algebra;
        out.folded_cartan = rep.cartan;
        const int r = s;
        out.folded_gram.assign(r, std::vector<long long>(r));
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                out.folded_gram[a][b] = -pairing(simples[a], simples[b], B);
        return out;
    }

    out.folding = true;
    const int r = static_cast<int>(out.orbits.size());
    std::vector<jvec> beta(r, jvec(N, 0));
    for (int a = 0; a < r; ++a)
        for (int i : out.orbits[a])
            for (size_t m = 0; m < N; ++m) beta[a][m] += simples[i][m];
    out.folded_cartan.assign(r, std::vector<long long>(r));
    out.folded_gram.assign(r, std::vector<long long>(r));
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            long long num = 2 * pairing2(beta[a], beta[b], B);
            long long den = pairing2(beta[b], beta[b], B);
            if (den == 0 || num % den != 0)
                throw invariant_error("folded Cartan entries are not integral");
            out.folded_cartan[a][b] = num / den;
            out.folded_gram[a][b] = -pairing(beta[a], beta[b], B);
        }
    }
    out.folded_algebra = classify_cartan(out.folded_cartan);
    return out;
}

}  // namespace jl
