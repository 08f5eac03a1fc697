#include "junctionlab/junctions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace jl {

JunctionBasis make_basis(const std::vector<ivec2>& cycles) {
    JunctionBasis B;
    B.cycles = cycles;
    size_t n = cycles.size();
    B.G.assign(n, std::vector<long long>(n, 0));
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) B.G[k][j] = skew(cycles[k], cycles[j]);
    return B;
}

namespace {

void check_size(const jvec& J, const JunctionBasis& B) {
    if (J.size() != B.cycles.size()) throw invariant_error("junction length does not match basis");
}

}  // namespace

long long self_pairing(const jvec& J, const JunctionBasis& B) {
    check_size(J, B);
    long long s = 0;
    size_t n = J.size();
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 1; j < k; ++j) s += J[k] * J[j] * B.G[k][j];
    for (size_t i = 0; i < n; ++i) s -= J[i] * J[i];
    return s;
}

long long pairing2(const jvec& J, const jvec& K, const JunctionBasis& B) {
    check_size(J, B);
    check_size(K, B);
    jvec sum(J.size());
    for (size_t i = 0; i < J.size(); ++i) sum[i] = J[i] + K[i];
    return self_pairing(sum, B) - self_pairing(J, B) - self_pairing(K, B);
}

long long pairing(const jvec& J, const jvec& K, const JunctionBasis& B) {
    long long v = pairing2(J, K, B);
    if (v % 2 != 0) throw invariant_error("pairing polarization is not integral");
    return v / 2;
}

ivec2 asymptotic_charge(const jvec& J, const JunctionBasis& B) {
    check_size(J, B);
    ivec2 a{0, 0};
    for (size_t i = 0; i < J.size(); ++i) {
        a[0] += J[i] * B.cycles[i][0];
        a[1] += J[i] * B.cycles[i][1];
    }
    return a;
}

namespace {

long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::vector<jvec> kernel_basis(const JunctionBasis& B) {
    const int N = static_cast<int>(B.cycles.size());
    std::vector<std::vector<long long>> A(2, std::vector<long long>(N));
    for (int j = 0; j < N; ++j) {
        A[0][j] = B.cycles[j][0];
        A[1][j] = B.cycles[j][1];
    }
    std::vector<std::vector<long long>> U(N, std::vector<long long>(N, 0));
    for (int i = 0; i < N; ++i) U[i][i] = 1;
    auto colswap = [&](int j, int k) {
        for (auto& r : A) std::swap(r[j], r[k]);
        for (auto& r : U) std::swap(r[j], r[k]);
    };
    auto coladd = [&](int j, int k, long long q) {
        for (auto& r : A) r[j] += q * r[k];
        for (auto& r : U) r[j] += q * r[k];
    };
    int row = 0, col = 0;
    while (row < 2 && col < N) {
        int piv = -1;
        for (int j = col; j < N; ++j)
            if (A[row][j] != 0 && (piv < 0 || std::abs(A[row][j]) < std::abs(A[row][piv])))
                piv = j;
        if (piv < 0) {
            ++row;
            continue;
        }
        colswap(col, piv);
        bool again = true;
        while (again) {
            again = false;
            for (int j = col + 1; j < N; ++j) {
                if (A[row][j] == 0) continue;
                long long q = floordiv(A[row][j], A[row][col]);
                coladd(j, col, -q);
                if (A[row][j] != 0) {
                    colswap(col, j);
                    again = true;
                }
            }
        }
        ++row;
        ++col;
    }
    std::vector<jvec> kern;
    for (int j = 0; j < N; ++j) {
        if (A[0][j] == 0 && A[1][j] == 0) {
            jvec v(N);
            for (int i = 0; i < N; ++i) v[i] = U[i][j];
            kern.push_back(v);
        }
    }
    return kern;
}

imat kernel_gram(const std::vector<jvec>& kb, const JunctionBasis& B) {
    size_t r = kb.size();
    imat g(r, std::vector<long long>(r));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) g[i][j] = -pairing(kb[i], kb[j], B);
    return g;
}

long long det_int(imat m) {
    int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    long long sign = 1, prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

void validate_gram(const imat& gram) {
    int r = static_cast<int>(gram.size());
    for (int i = 0; i < r; ++i)
        if (gram[i][i] % 2 != 0) throw invariant_error("indefinite-or-odd lattice");
    for (int k = 1; k <= r; ++k) {
        imat minor(k, std::vector<long long>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) minor[i][j] = gram[i][j];
        if (det_int(std::move(minor)) <= 0) throw invariant_error("indefinite-or-odd lattice");
    }
}

std::vector<jvec> enumerate_weights(const JunctionBasis& B, const ivec2& charge,
                                    long long norm, long long box, const Tolerances& tol) {
    const int N = static_cast<int>(B.cycles.size());
    if (box < 1) throw parse_error("weight enumeration box must be at least 1");
    if (N > tol.enum_bound) throw parse_error("junction basis too large for enumeration");
    // suffix reach: how far coordinates >= i can still move the charge
    std::vector<long long> reach0(N + 1, 0), reach1(N + 1, 0);
    for (int i = N - 1; i >= 0; --i) {
        reach0[i] = reach0[i + 1] + box * std::abs(B.cycles[i][0]);
        reach1[i] = reach1[i + 1] + box * std::abs(B.cycles[i][1]);
    }
    std::vector<jvec> out;
    jvec J(N, 0);
    auto rec = [&](auto&& self, int i, long long c0, long long c1) -> void {
        if (std::abs(charge[0] - c0) > reach0[i] || std::abs(charge[1] - c1) > reach1[i]) return;
        if (i == N) {
            if (c0 == charge[0] && c1 == charge[1] && self_pairing(J, B) == norm)
                out.push_back(J);
            return;
        }
        for (long long v = -box; v <= box; ++v) {
            J[i] = v;
            self(self, i + 1, c0 + v * B.cycles[i][0], c1 + v * B.cycles[i][1]);
        }
        J[i] = 0;
    };
    rec(rec, 0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<jvec> short_vectors(const imat& gram, long long target) {
    const int n = static_cast<int>(gram.size());
    if (n == 0) return {};
    // floating Cholesky gram = L L^T; enumerate |L^T x|^2 == target
    std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = static_cast<double>(gram[i][j]);
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (s <= 0.0) throw invariant_error("indefinite-or-odd lattice");
                L[i][j] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    auto R = [&](int i, int j) { return L[j][i]; };  // R = L^T
    std::vector<jvec> out;
    jvec x(n, 0);
    auto rec = [&](auto&& self, int i, double rem) -> void {
        if (i < 0) {
            if (std::abs(rem) < 1e-6) out.push_back(x);
            return;
        }
        double c = 0.0;
        for (int j = i + 1; j < n; ++j) c += R(i, j) * static_cast<double>(x[j]);
        double lim = std::sqrt(std::max(rem, 0.0) + 1e-9);
        long long lo = static_cast<long long>(std::ceil((-lim - c) / R(i, i) - 1e-9));
        long long hi = static_cast<long long>(std::floor((lim - c) / R(i, i) + 1e-9));
        for (long long xi = lo; xi <= hi; ++xi) {
            x[i] = xi;
            double t = R(i, i) * static_cast<double>(xi) + c;
            self(self, i - 1, rem - t * t);
        }
        x[i] = 0;
    };
    rec(rec, n - 1, static_cast<double>(target));
    std::vector<jvec> nz;
    for (auto& v : out)
        if (std::any_of(v.begin(), v.end(), [](long long a) { return a != 0; })) nz.push_back(v);
    return nz;
}

std::vector<jvec> enumerate_roots(const JunctionBasis& B, const Tolerances& tol) {
    // complete route: norm-2 vectors of the kernel Gram, mapped to prong coords
    std::vector<jvec> kb = kernel_basis(B);
    std::vector<jvec> lattice;
    if (!kb.empty()) {
        imat gram = kernel_gram(kb, B);
        validate_gram(gram);
        const size_t N = B.cycles.size();
        for (const auto& v : short_vectors(gram, 2)) {
            jvec J(N, 0);
            for (size_t i = 0; i < kb.size(); ++i)
                for (size_t m = 0; m < N; ++m) J[m] += v[i] * kb[i][m];
            lattice.push_back(J);
        }
    }
    std::sort(lattice.begin(), lattice.end());

    // independent route: bounded coordinate sweep, wide enough to cover every
    // vector the lattice route produced; coordinates beyond 2 leave the
    // embedded-sphere regime and are rejected
    long long need = 1;
    for (const auto& J : lattice)
        for (long long x : J) need = std::max(need, x < 0 ? -x : x);
    if (need > 2) throw invariant_error("roots exceed the embedded-sphere coordinate bound");
    std::vector<jvec> box = enumerate_weights(B, ivec2{0, 0}, -2, need, tol);
    if (box != lattice) throw invariant_error("root enumeration routes disagree");
    return lattice;
}

namespace {

struct Diagram {
    // adjacency from Cartan off-diagonals
    std::vector<std::vector<int>> adj;
};

std::string classify_component(const Diagram& d, const std::vector<int>& comp) {
    int n = static_cast<int>(comp.size());
    std::vector<int> deg(n);
    std::map<int, int> local;
    for (int i = 0; i < n; ++i) local[comp[i]] = i;
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int nb : d.adj[comp[i]])
            if (local.count(nb)) adj[i].push_back(local[nb]);
    int branch = -1;
    for (int i = 0; i < n; ++i) {
        deg[i] = static_cast<int>(adj[i].size());
        if (deg[i] > 3) throw invariant_error("unrecognized diagram");
        if (deg[i] == 3) {
            if (branch >= 0) throw invariant_error("unrecognized diagram");
            branch = i;
        }
    }
    if (branch < 0) {
        // must be a path: n-1 edges, connected, no cycle
        int edges = 0;
        for (int i = 0; i < n; ++i) edges += deg[i];
        if (edges != 2 * (n - 1)) throw invariant_error("unrecognized diagram");
        return "A" + std::to_string(n);
    }
    std::vector<int> legs;
    for (int start : adj[branch]) {
        int len = 1, prev = branch, cur = start;
        while (true) {
            int next = -1;
            for (int nb : adj[cur])
                if (nb != prev) {
                    if (next >= 0) throw invariant_error("unrecognized diagram");
                    next = nb;
                }
            if (next < 0) break;
            prev = cur;
            cur = next;
            ++len;
        }
        legs.push_back(len);
    }
    std::sort(legs.begin(), legs.end());
    if (legs.size() != 3 || 1 + legs[0] + legs[1] + legs[2] != n)
        throw invariant_error("unrecognized diagram");
    if (legs[0] == 1 && legs[1] == 1) return "D" + std::to_string(legs[2] + 3);
    if (legs == std::vector<int>{1, 2, 2}) return "E6";
    if (legs == std::vector<int>{1, 2, 3}) return "E7";
    if (legs == std::vector<int>{1, 2, 4}) return "E8";
    throw invariant_error("unrecognized diagram");
}

}  // namespace

std::string classify_ade(const imat& cartan) {
    int n = static_cast<int>(cartan.size());
    if (n == 0) return "trivial";
    Diagram d;
    d.adj.assign(n, {});
    for (int i = 0; i < n; ++i) {
        if (cartan[i][i] != 2) throw invariant_error("unrecognized diagram");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (cartan[i][j] != 0 && cartan[i][j] != -1)
                throw invariant_error("unrecognized diagram");
            if (cartan[i][j] != cartan[j][i]) throw invariant_error("unrecognized diagram");
            if (cartan[i][j] == -1) d.adj[i].push_back(j);
        }
    }
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
            for (int nb : d.adj[v])
                if (!seen[nb]) {
                    seen[nb] = 1;
                    stack.push_back(nb);
                }
        }
        std::sort(comp.begin(), comp.end());
        labels.push_back(classify_component(d, comp));
    }
    std::sort(labels.begin(), labels.end());
    std::string out;
    for (size_t k = 0; k < labels.size(); ++k) {
        if (k) out += "+";
        out += labels[k];
    }
    return out;
}

std::vector<jvec> positive_roots(const std::vector<jvec>& roots, const JunctionBasis& B) {
    const size_t N = B.cycles.size();
    long long maxc = 0;
    for (const auto& r : roots)
        for (long long v : r) maxc = std::max(maxc, std::abs(v));
    long long M = 2 * maxc + 1;
    std::vector<long long> h(roots.size());
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 50) throw invariant_error("could not find a generic functional");
        bool ok = true;
        std::set<long long> seen;
        for (size_t r = 0; r < roots.size(); ++r) {
            long long v = 0, p = 1;
            for (size_t i = 0; i < N; ++i) {
                v += roots[r][i] * p;
                p *= M;
            }
            h[r] = v;
            if (v == 0 || !seen.insert(v).second) {
                ok = false;
                break;
            }
        }
        if (ok) break;
        M += 2;
    }
    std::vector<jvec> out;
    for (size_t r = 0; r < roots.size(); ++r)
        if (h[r] > 0) out.push_back(roots[r]);
    std::sort(out.begin(), out.end());
    return out;
}

AlgebraReport identify_algebra(const std::vector<jvec>& roots, const JunctionBasis& B) {
    AlgebraReport rep;
    if (roots.empty()) {
        rep.algebra = "trivial";
        return rep;
    }
    for (const auto& r : roots) {
        ivec2 a = asymptotic_charge(r, B);
        if (a[0] != 0 || a[1] != 0) throw invariant_error("root has nonzero asymptotic charge");
        if (self_pairing(r, B) != -2) throw invariant_error("root has self-pairing other than -2");
    }
    const size_t N = B.cycles.size();
    std::vector<jvec> plist = positive_roots(roots, B);
    std::set<jvec> positives(plist.begin(), plist.end());
    const jvec zero(N, 0);
    for (const auto& a : positives) {
        bool decomposable = false;
        jvec diff(N);
        for (const auto& b : positives) {
            for (size_t i = 0; i < N; ++i) diff[i] = a[i] - b[i];
            if (diff != zero && positives.count(diff)) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable) rep.simples.push_back(a);
    }
    std::sort(rep.simples.begin(), rep.simples.end());
    size_t s = rep.simples.size();
    rep.cartan.assign(s, std::vector<long long>(s, 0));
    for (size_t i = 0; i < s; ++i)
        for (size_t j = 0; j < s; ++j)
            rep.cartan[i][j] = i == j ? 2 : -pairing(rep.simples[i], rep.simples[j], B);
    rep.algebra = classify_ade(rep.cartan);
    return rep;
}

long long count_simple_systems(const std::vector<jvec>& roots, int rank,
                               const JunctionBasis& B, const Tolerances& tol) {
    const int n = static_cast<int>(roots.size());
    if (rank <= 0 || rank > n) throw invariant_error("simple-system rank out of range");
    // budget check on C(n, rank)
    long long total = 1;
    for (int i = 0; i < rank; ++i) {
        total = total * (n - i) / (i + 1);
        if (total > tol.subset_budget) throw parse_error("combinatorial budget exceeded");
    }
    std::string want = identify_algebra(roots, B).algebra;
    // pairwise pairings, precomputed
    std::vector<std::vector<long long>> P(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P[i][j] = pairing(roots[i], roots[j], B);
    long long count = 0;
    std::vector<int> idx(rank);
    imat cartan(rank, std::vector<long long>(rank, 2));
    auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == rank) {
            try {
                if (classify_ade(cartan) == want) ++count;
            } catch (const invariant_error&) {
            }
            return;
        }
        for (int i = start; i < n; ++i) {
            bool ok = true;
            for (int q = 0; q < pos; ++q) {
                long long p = P[idx[q]][i];
                if (p != 0 && p != 1) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            idx[pos] = i;
            for (int q = 0; q < pos; ++q) {
                cartan[q][pos] = -P[idx[q]][i];
                cartan[pos][q] = -P[idx[q]][i];
            }
            self(self, pos + 1, i + 1);
        }
    };
    rec(rec, 0, 0);
    return count;
}

std::string algebra_of_counts(int rank, long long n_roots) {
    static const std::map<std::pair<int, long long>, std::string> tab = {
        {{1, 2}, "A1"},   {{2, 6}, "A2"},   {{3, 12}, "A3"},  {{4, 20}, "A4"},
        {{5, 30}, "A5"},  {{6, 42}, "A6"},  {{7, 56}, "A7"},  {{8, 72}, "A8"},
        {{4, 24}, "D4"},  {{5, 40}, "D5"},  {{6, 60}, "D6"},  {{7, 84}, "D7"},
        {{8, 112}, "D8"}, {{6, 72}, "E6"},  {{7, 126}, "E7"}, {{8, 240}, "E8"},
        {{0, 0}, "trivial"},
    };
    auto it = tab.find({rank, n_roots});
    if (it == tab.end()) throw invariant_error("rank and root count match no catalog entry");
    return it->second;
}

}  // namespace jl
