#include "junctionlab/tracking.hpp"

#include <algorithm>
#include <cmath>

namespace jl {

namespace {
constexpr double PI = 3.14159265358979323846;
constexpr double CUT = -0.01;  // angular cut for CCW ordering
}  // namespace

double ccw_key(cplx z) {
    double a = std::arg(z) - CUT;
    a = std::fmod(a, 2.0 * PI);
    if (a < 0) a += 2.0 * PI;
    return a;
}

void ccw_sort(std::vector<cplx>& pts) {
    std::stable_sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        double ka = ccw_key(a), kb = ccw_key(b);
        if (ka != kb) return ka < kb;
        return std::abs(a) < std::abs(b);
    });
}

// relative residual of s against p: |p(s)| over the coefficient scale at |s|
double rel_residual(const Poly& p, cplx s) {
    double scale = 0.0, pw = 1.0, as = std::abs(s);
    for (const auto& c : p.c) {
        scale += std::abs(c) * pw;
        pw *= as;
    }
    if (scale == 0.0) return 0.0;
    return std::abs(p.eval(s)) / scale;
}

namespace {

std::vector<cplx> all_disc_roots(const Model& m, const Tolerances& tol) {
    Poly d = m.discriminant();
    if (d.degree() < 1)
        throw invariant_error("discriminant has no roots: nothing to analyze");
    std::vector<cplx> roots = poly_roots(d);
    for (cplx r : roots)
        if (rel_residual(d, r) > tol.tol_root)
            throw numeric_error("discriminant root did not converge to tolerance");
    return roots;
}

void check_separation(const std::vector<cplx>& pts, double sep) {
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b)
            if (std::abs(pts[a] - pts[b]) < sep)
                throw invariant_error(
                    "multiple discriminant root detected: deformation is not fully split");
}

}  // namespace

std::vector<cplx> find_discriminant_points(const Model& m, double radius,
                                           const Tolerances& tol) {
    if (radius <= 0.0) throw parse_error("disc radius must be positive");
    std::vector<cplx> roots = all_disc_roots(m, tol);
    std::vector<cplx> inside;
    for (cplx r : roots)
        if (std::abs(r) < radius) inside.push_back(r);
    check_separation(inside, tol.sep_min);
    ccw_sort(inside);
    return inside;
}

std::vector<cplx> nearest_discriminant_points(const Model& m, int count,
                                              const Tolerances& tol) {
    std::vector<cplx> roots = all_disc_roots(m, tol);
    if (static_cast<int>(roots.size()) < count)
        throw invariant_error("root count mismatch: expected " + std::to_string(count) +
                              " discriminant points, found " +
                              std::to_string(roots.size()));
    std::stable_sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        double ma = std::abs(a), mb = std::abs(b);
        // conjugate pairs land at equal modulus up to roundoff; break by angle
        if (std::abs(ma - mb) > 1e-9 * (1.0 + ma + mb)) return ma < mb;
        return ccw_key(a) < ccw_key(b);
    });
    std::vector<cplx> sel(roots.begin(), roots.begin() + count);
    check_separation(sel, tol.sep_min);
    for (size_t k = count; k < roots.size(); ++k)
        for (cplx s : sel)
            if (std::abs(roots[k] - s) < tol.sep_min)
                throw invariant_error("ambiguous discriminant point selection");
    ccw_sort(sel);
    return sel;
}

std::vector<Path> build_paths(cplx base, const std::vector<cplx>& points,
                              const Tolerances& tol) {
    std::vector<Path> out;
    for (size_t k = 0; k < points.size(); ++k) {
        cplx rel = points[k] - base;
        if (std::abs(rel) < tol.sep_min)
            throw invariant_error("base point collides with a discriminant point");
        // a nearer point on the same ray blocks the straight segment
        double block = -1.0;
        for (size_t j = 0; j < points.size(); ++j) {
            if (j == k) continue;
            cplx relj = points[j] - base;
            if (std::abs(relj) >= std::abs(rel)) continue;
            double da = std::remainder(std::arg(relj) - std::arg(rel), 2.0 * PI);
            if (std::abs(da) < 1e-9)
                block = block < 0 ? std::abs(relj) : std::min(block, std::abs(relj));
        }
        Path p;
        p.index = static_cast<int>(k);
        p.waypoints.push_back(base);
        if (block > 0) {
            double theta = std::arg(rel) + tol.angle_nudge;
            p.waypoints.push_back(base + 0.6 * block * cplx(std::cos(theta), std::sin(theta)));
            p.bent = true;
        }
        p.waypoints.push_back(points[k]);
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

// piecewise-linear position along the waypoints, t in [0,1] by arc length
cplx path_point(const Path& p, double t) {
    double total = 0.0;
    for (size_t k = 1; k < p.waypoints.size(); ++k)
        total += std::abs(p.waypoints[k] - p.waypoints[k - 1]);
    double want = t * total;
    for (size_t k = 1; k < p.waypoints.size(); ++k) {
        double seg = std::abs(p.waypoints[k] - p.waypoints[k - 1]);
        if (want <= seg || k + 1 == p.waypoints.size()) {
            double u = seg > 0 ? want / seg : 0.0;
            return p.waypoints[k - 1] + u * (p.waypoints[k] - p.waypoints[k - 1]);
        }
        want -= seg;
    }
    return p.waypoints.back();
}

const int PERMS3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// globally optimal assignment of the new root triple to the previous labels
std::array<cplx, 3> match_roots(const std::array<cplx, 3>& prev,
                                const std::vector<cplx>& cur) {
    double best = 1e300;
    int bi = 0;
    for (int p = 0; p < 6; ++p) {
        double tot = 0.0;
        for (int k = 0; k < 3; ++k) tot += std::abs(prev[k] - cur[PERMS3[p][k]]);
        if (tot < best) {
            best = tot;
            bi = p;
        }
    }
    return {cur[PERMS3[bi][0]], cur[PERMS3[bi][1]], cur[PERMS3[bi][2]]};
}

double min_pairwise(const std::array<cplx, 3>& r) {
    return std::min({std::abs(r[0] - r[1]), std::abs(r[1] - r[2]), std::abs(r[0] - r[2])});
}

}  // namespace

RootTrajectory track_roots(const Model& m, const Path& path, const Tolerances& tol) {
    RootTrajectory traj;
    traj.path_index = path.index;

    cplx base = path.waypoints.front();
    std::vector<cplx> r0 = cubic_roots(m.f.eval(base), m.g.eval(base));
    // persistent labels: CCW about the origin (depressed cubic roots sum to 0)
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        auto key = [&](int k) {
            double v = std::atan2(r0[k].imag(), r0[k].real());
            v = std::fmod(v, 2.0 * PI);
            if (v < 0) v += 2.0 * PI;
            return v;
        };
        double ka = key(a), kb = key(b);
        if (ka != kb) return ka < kb;
        return std::abs(r0[a]) < std::abs(r0[b]);
    });
    std::array<cplx, 3> prev{r0[order[0]], r0[order[1]], r0[order[2]]};
    traj.samples.push_back({0.0, prev});

    double t = 0.0;
    double dt = 1.0 / tol.initial_steps;
    const double dt_floor = std::ldexp(1.0 / tol.initial_steps, -tol.max_halvings);
    long guard = 0;
    while (t < 1.0) {
        if (++guard > 2000000)
            throw numeric_error("matching ambiguity: root tracking did not converge");
        dt = std::min(dt, 1.0 - t);
        cplx s = path_point(path, t + dt);
        std::array<cplx, 3> cur = match_roots(prev, cubic_roots(m.f.eval(s), m.g.eval(s)));
        double prev_min = min_pairwise(prev);
        double move = 0.0;
        for (int k = 0; k < 3; ++k) move = std::max(move, std::abs(cur[k] - prev[k]));
        if (move > 0.2 * prev_min && dt > dt_floor) {
            dt *= 0.5;
            ++traj.refinements;
            continue;
        }
        t += dt;
        prev = cur;
        traj.samples.push_back({t, cur});
        if (move < 0.05 * prev_min) dt *= 1.5;
    }

    // identify the merging pair at t=1; precedence (0,1), (1,2), (0,2)
    const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};
    double best = 1e300;
    std::array<int, 2> mp{0, 1};
    for (const auto& pr : pairs) {
        double gap = std::abs(prev[pr[0]] - prev[pr[1]]);
        if (gap < best) {
            best = gap;
            mp = pr;
        }
    }
    if (best > tol.tol_merge)
        throw numeric_error("no root pair merged within tol_merge at the path end");
    int survivor = 3 - mp[0] - mp[1];
    for (int k : {mp[0], mp[1]})
        if (std::abs(prev[survivor] - prev[k]) < tol.sep_min)
            throw numeric_error("survivor collision: third root met the merging pair");
    traj.merging_pair = mp;
    traj.survivor = survivor;
    return traj;
}

}  // namespace jl
