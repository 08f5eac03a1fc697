#include "junctionlab/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace jl {

long long skew(const ivec2& a, const ivec2& b) { return a[0] * b[1] - a[1] * b[0]; }

namespace {

double triangle_height(const std::array<cplx, 3>& r) {
    // smallest point-to-opposite-line distance; zero means collinear
    double h = 1e300;
    for (int k = 0; k < 3; ++k) {
        cplx a = r[(k + 1) % 3], b = r[(k + 2) % 3];
        double len = std::abs(b - a);
        if (len == 0.0) return 0.0;
        cplx d = (r[k] - a) * std::conj(b - a);
        h = std::min(h, std::abs(d.imag()) / len);
    }
    return h;
}

}  // namespace

FiberBasis fiber_basis(const Model& m, cplx base, const Tolerances& tol) {
    cplx offset = tol.base_offset;
    for (int attempt = 0; attempt < 8; ++attempt) {
        cplx at = attempt == 0 ? base : base + offset;
        std::vector<cplx> r = cubic_roots(m.f.eval(at), m.g.eval(at));
        std::array<cplx, 3> roots{r[0], r[1], r[2]};
        double minsep = std::min({std::abs(r[0] - r[1]), std::abs(r[1] - r[2]),
                                  std::abs(r[0] - r[2])});
        if (minsep > tol.sep_min && triangle_height(roots) > tol.sep_min) {
            FiberBasis fb;
            fb.base = at;
            fb.nudge = at - base;
            // CCW labels about the origin (depressed cubic roots sum to 0)
            std::array<int, 3> order{0, 1, 2};
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                auto key = [&](int k) {
                    double v = std::atan2(r[k].imag(), r[k].real());
                    if (v < 0) v += 2.0 * 3.14159265358979323846;
                    return v;
                };
                double ka = key(a), kb = key(b);
                if (ka != kb) return ka < kb;
                return std::abs(r[a]) < std::abs(r[b]);
            });
            fb.roots = {r[order[0]], r[order[1]], r[order[2]]};
            return fb;
        }
        offset *= 1.7;
    }
    throw numeric_error("could not find a smooth non-collinear base fiber near the base point");
}

namespace {

// merge-pair cyclic key -> class when the crossing parity is even
const std::map<std::array<int, 2>, ivec2> DICT_A = {
    {{0, 1}, {1, 0}},
    {{1, 2}, {0, 1}},
    {{2, 0}, {-1, -1}},
};
// and when it is odd
const std::map<std::array<int, 2>, ivec2> TWIST = {
    {{0, 1}, {1, 2}},
    {{1, 2}, {-2, -1}},
    {{2, 0}, {1, -1}},
};

}  // namespace

CycleResult vanishing_cycle(const RootTrajectory& traj, const FiberBasis& basis,
                            const Tolerances& tol) {
    const int li = traj.merging_pair[0];
    const int lj = traj.merging_pair[1];
    const int lk = traj.survivor;
    if (traj.samples.size() < 2) throw invariant_error("trajectory has too few samples");
    for (int k = 0; k < 3; ++k)
        if (std::abs(traj.samples.front().roots[k] - basis.roots[k]) > 1e-7)
            throw invariant_error("trajectory base labels disagree with the fiber basis");

    const cplx P0 = traj.samples.front().roots[li];
    const cplx P1 = traj.samples.front().roots[lj];
    const cplx Ps = traj.samples.front().roots[lk];
    const cplx d = P1 - P0;
    const double L = std::abs(d);
    if (L < tol.sep_min) throw invariant_error("merging pair starts unresolved at the base");

    // normalized frame: re(w) runs 0..1 along the segment, im(w) is the
    // perpendicular offset in segment lengths
    auto offs = [&](cplx z) { return (z - P0) / d; };
    const double ONTOL = 1e-12;
    auto side_of = [&](cplx z) {
        double c = offs(z).imag();
        return std::abs(c) < ONTOL ? 0 : (c > 0 ? 1 : -1);
    };
    if (side_of(Ps) == 0)
        throw invariant_error("survivor base root is collinear with the merging pair");

    // polyline: branch li forward, then branch lj backward; merge point deduped
    std::vector<cplx> zs;
    zs.reserve(2 * traj.samples.size() - 1);
    for (const auto& s : traj.samples) zs.push_back(s.roots[li]);
    for (size_t k = traj.samples.size() - 1; k-- > 0;) zs.push_back(traj.samples[k].roots[lj]);
    const size_t M = zs.size();

    // endpoint germs: first off-line side scanning inward from each terminus
    int sA = 0, sB = 0;
    for (size_t k = 1; k < M && sA == 0; ++k) sA = side_of(zs[k]);
    for (size_t k = M - 1; k-- > 0 && sB == 0;) sB = side_of(zs[k]);

    // a fully tangential polyline is perturbed off the survivor side, which
    // lands both germs on one side and no interior crossing: parity even
    int m1 = 0, m2 = 0;
    if (sA != 0 && sB != 0) {
        m2 = (sA == sB) ? 0 : 1;
        // transversal crossings of the open segment, interpolated between
        // consecutive off-line samples
        size_t prev = 0;
        bool have_prev = false;
        for (size_t k = 1; k + 1 < M; ++k) {
            if (side_of(zs[k]) == 0) continue;
            if (have_prev && side_of(zs[prev]) != side_of(zs[k])) {
                double c1 = offs(zs[prev]).imag();
                double c2 = offs(zs[k]).imag();
                cplx zc = zs[prev] + (zs[k] - zs[prev]) * (c1 / (c1 - c2));
                double tx = offs(zc).real();
                if (tx > 0.0 && tx < 1.0) ++m1;
            }
            prev = k;
            have_prev = true;
        }
    }

    // independent route: the closed curve (polyline plus base segment)
    // encloses the survivor iff the parity is odd; the ray from the survivor
    // away from the segment midpoint cannot meet the closing segment
    cplx mid = (P0 + P1) * 0.5;
    cplx e = (Ps - mid) / std::abs(Ps - mid);
    int ray = 0;
    for (size_t k = 0; k + 1 < M; ++k) {
        cplx w1 = (zs[k] - Ps) / e;
        cplx w2 = (zs[k + 1] - Ps) / e;
        if ((w1.imag() > 0) != (w2.imag() > 0)) {
            double lam = w1.imag() / (w1.imag() - w2.imag());
            double xx = w1.real() + (w2.real() - w1.real()) * lam;
            if (xx > 0) ++ray;
        }
    }

    CycleResult res;
    res.m1 = m1;
    res.m2 = m2;
    res.even = ((m1 + m2) % 2) == 0;
    if ((ray % 2 == 0) != res.even)
        throw invariant_error("crossing parity routes disagree");
    std::array<int, 2> key{li, lj};
    if (li == 0 && lj == 2) key = {2, 0};
    res.cycle = res.even ? DICT_A.at(key) : TWIST.at(key);
    return res;
}

imat2 pl_matrix(const ivec2& c) {
    if (c[0] == 0 && c[1] == 0) throw invariant_error("zero vanishing cycle");
    long long a = c[0], b = c[1];
    return {{{1 - a * b, a * a}, {-b * b, 1 + a * b}}};
}

imat2 total_monodromy(const std::vector<ivec2>& cycles) {
    imat2 acc{{{1, 0}, {0, 1}}};
    for (const auto& c : cycles) {
        imat2 m = pl_matrix(c);
        imat2 next{};
        for (int r = 0; r < 2; ++r)
            for (int cc = 0; cc < 2; ++cc)
                next[r][cc] = m[r][0] * acc[0][cc] + m[r][1] * acc[1][cc];
        acc = next;
    }
    return acc;
}

long long trace(const imat2& m) { return m[0][0] + m[1][1]; }

}  // namespace jl
