#include "weil/hermitian.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace weil {

std::string form_kind_name(FormKind k) {
    switch (k) {
        case FormKind::SkewHermitian: return "skew-hermitian";
        case FormKind::HermitianType1: return "hermitian-1";
        case FormKind::HermitianType2: return "hermitian-2";
    }
    return "?";
}

std::vector<long long> HermSpace::coord_mods() const {
    std::vector<long long> mods;
    for (int i = 0; i < m; ++i) {
        mods.push_back(ring.xmod);
        if (ring.has_y()) mods.push_back(ring.ymod);
    }
    return mods;
}

std::vector<long long> HermSpace::to_coords(const Vec& v) const {
    std::vector<long long> c;
    for (int i = 0; i < m; ++i) {
        c.push_back(v.c[i].x);
        if (ring.has_y()) c.push_back(v.c[i].y);
    }
    return c;
}

Vec HermSpace::from_coords(const std::vector<long long>& c) const {
    Vec v;
    int k = 0;
    for (int i = 0; i < m; ++i) {
        long long x = c[k++];
        long long y = ring.has_y() ? c[k++] : 0;
        v.c.push_back(ring_from_parts(ring, x, y));
    }
    return v;
}

long long HermSpace::space_size() const {
    long long n = 1;
    for (long long md : coord_mods()) n *= md;
    return n;
}

HermSpace make_space(const RingSpec& ring, int m, FormKind kind) {
    if (m < 2) throw std::invalid_argument("make_space: rank must be >= 2");
    bool skew = kind == FormKind::SkewHermitian;
    if (skew && ring.rcase == RingCase::RamifiedEven)
        throw std::invalid_argument("make_space: skew hermitian form illegal in the ramified even case");
    if (!skew && ring.rcase != RingCase::RamifiedEven)
        throw std::invalid_argument("make_space: hermitian types only exist in the ramified even case");
    if (skew && m % 2 != 0 &&
        (ring.rcase == RingCase::Symplectic || ring.rcase == RingCase::RamifiedOdd))
        throw std::invalid_argument("make_space: rank must be even for this case");
    HermSpace sp;
    sp.ring = ring;
    sp.m = m;
    sp.kind = kind;
    sp.eps = skew ? -1 : 1;
    sp.gram.assign(m, std::vector<RingElem>(m, ring_zero(ring)));
    if (skew) {
        int pairs = m / 2;
        for (int k = 0; k < pairs; ++k) {
            sp.gram[2 * k][2 * k + 1] = ring_one(ring);
            sp.gram[2 * k + 1][2 * k] = ring_neg(ring, ring_one(ring));
        }
        if (m % 2 == 1) {
            // odd rank only in the unramified case: one theta * unit slot
            sp.gram[m - 1][m - 1] = ring_from_parts(ring, 0, 1);
        }
    } else {
        for (int i = 0; i < m; ++i) sp.gram[i][i] = ring_one(ring);
        if (kind == FormKind::HermitianType2) {
            long long u0 = ring.p % 4 == 3 ? ring.xmod - 1 : 0;
            if (u0 == 0) {
                for (long long c = 2; c < ring.p; ++c) {
                    bool sq = false;
                    for (long long t = 0; t < ring.p; ++t)
                        if (t * t % ring.p == c) sq = true;
                    if (!sq) { u0 = c; break; }
                }
            }
            sp.gram[m - 1][m - 1] = ring_from_int(ring, u0);
        }
    }
    // gram^T-conjugate = eps * gram, and invertibility via the standard shapes
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            RingElem lhs = invol(ring, sp.gram[j][i]);
            RingElem rhs = sp.eps < 0 ? ring_neg(ring, sp.gram[i][j]) : sp.gram[i][j];
            if (lhs != rhs) throw std::logic_error("make_space: gram symmetry violated");
        }
    return sp;
}

Vec vec_zero(const HermSpace& sp) {
    Vec v;
    v.c.assign(sp.m, ring_zero(sp.ring));
    return v;
}

Vec vec_unit(const HermSpace& sp, int i) {
    Vec v = vec_zero(sp);
    v.c[i] = ring_one(sp.ring);
    return v;
}

Vec vec_add(const HermSpace& sp, const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < sp.m; ++i) r.c[i] = ring_add(sp.ring, r.c[i], b.c[i]);
    return r;
}

Vec vec_sub(const HermSpace& sp, const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < sp.m; ++i) r.c[i] = ring_sub(sp.ring, r.c[i], b.c[i]);
    return r;
}

Vec vec_neg(const HermSpace& sp, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < sp.m; ++i) r.c[i] = ring_neg(sp.ring, r.c[i]);
    return r;
}

Vec vec_scal(const HermSpace& sp, const RingElem& s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < sp.m; ++i) r.c[i] = ring_mul(sp.ring, s, a.c[i]);
    return r;
}

bool vec_in_ideal_layer(const HermSpace& sp, const Vec& v, int k) {
    for (int i = 0; i < sp.m; ++i)
        if (!in_ideal(sp.ring, v.c[i], k)) return false;
    return true;
}

bool is_primitive(const HermSpace& sp, const Vec& v) {
    for (int i = 0; i < sp.m; ++i)
        if (is_unit(sp.ring, v.c[i])) return true;
    return false;
}

long long vec_key(const HermSpace& sp, const Vec& v) {
    long long key = 0;
    for (int i = 0; i < sp.m; ++i) {
        key = key * sp.ring.xmod + v.c[i].x;
        if (sp.ring.has_y()) key = key * sp.ring.ymod + v.c[i].y;
    }
    return key;
}

RingElem h_eval(const HermSpace& sp, const Vec& x, const Vec& y) {
    RingElem acc = ring_zero(sp.ring);
    for (int i = 0; i < sp.m; ++i) {
        if (x.c[i] == ring_zero(sp.ring)) continue;
        RingElem xi = invol(sp.ring, x.c[i]);
        for (int j = 0; j < sp.m; ++j) {
            if (sp.gram[i][j] == ring_zero(sp.ring)) continue;
            acc = ring_add(sp.ring, acc, ring_mul(sp.ring, xi, ring_mul(sp.ring, sp.gram[i][j], y.c[j])));
        }
    }
    return acc;
}

long long f_eval(const HermSpace& sp, const Vec& x, const Vec& y) {
    return d_map(sp.ring, h_eval(sp, x, y));
}

std::vector<Vec> enumerate_layer(const HermSpace& sp, int k) {
    long long xd, yd;
    ideal_divisors(sp.ring, k, xd, yd);
    std::vector<Vec> out;
    std::vector<long long> mods = sp.coord_mods();
    int K = (int)mods.size();
    std::vector<long long> steps;
    for (int i = 0; i < sp.m; ++i) {
        steps.push_back(xd);
        if (sp.ring.has_y()) steps.push_back(yd);
    }
    std::vector<long long> cur(K, 0);
    while (true) {
        out.push_back(sp.from_coords(cur));
        int t = K - 1;
        while (t >= 0) {
            cur[t] += steps[t];
            if (cur[t] < mods[t]) break;
            cur[t] = 0;
            --t;
        }
        if (t < 0) break;
    }
    return out;
}

std::vector<Vec> enumerate_mod_layer(const HermSpace& sp, int j) {
    long long xd, yd;
    ideal_divisors(sp.ring, j, xd, yd);
    std::vector<Vec> out;
    int K = sp.m * sp.coords_per_entry();
    std::vector<long long> lim;
    for (int i = 0; i < sp.m; ++i) {
        lim.push_back(xd);
        if (sp.ring.has_y()) lim.push_back(yd);
    }
    std::vector<long long> cur(K, 0);
    while (true) {
        out.push_back(sp.from_coords(cur));
        int t = K - 1;
        while (t >= 0) {
            if (++cur[t] < lim[t]) break;
            cur[t] = 0;
            --t;
        }
        if (t < 0) break;
    }
    return out;
}

RingElem reduce_mod_ideal(const RingSpec& s, const RingElem& a, int k) {
    long long xd, yd;
    ideal_divisors(s, k, xd, yd);
    RingElem r;
    r.x = a.x % xd;
    r.y = s.has_y() ? a.y % yd : 0;
    return r;
}

namespace {
// generators of r^k V as coordinate vectors
std::vector<std::vector<long long>> layer_generators(const HermSpace& sp, int k) {
    long long xd, yd;
    ideal_divisors(sp.ring, k, xd, yd);
    std::vector<long long> mods = sp.coord_mods();
    std::vector<std::vector<long long>> gens;
    int K = (int)mods.size();
    int per = sp.coords_per_entry();
    for (int i = 0; i < sp.m; ++i) {
        std::vector<long long> g(K, 0);
        g[i * per] = xd % mods[i * per];
        if (xd < sp.ring.xmod) gens.push_back(g);
        if (sp.ring.has_y()) {
            std::vector<long long> g2(K, 0);
            g2[i * per + 1] = yd % mods[i * per + 1];
            if (yd < sp.ring.ymod) gens.push_back(g2);
        }
    }
    return gens;
}
} // namespace

SubgroupHNF layer_subgroup(const HermSpace& sp, int k) {
    return subgroup_from_generators(sp.coord_mods(), layer_generators(sp, k));
}

SubgroupHNF perp_of(const HermSpace& sp, int k) {
    std::vector<long long> mods = sp.coord_mods();
    int K = (int)mods.size();
    auto gens = layer_generators(sp, k);
    std::vector<std::vector<long long>> B;
    std::vector<long long> eqmods;
    std::vector<Vec> basis;
    for (int i = 0; i < K; ++i) {
        std::vector<long long> c(K, 0);
        c[i] = 1;
        basis.push_back(sp.from_coords(c));
    }
    for (const auto& g : gens) {
        Vec u = sp.from_coords(g);
        std::vector<long long> row(K);
        for (int i = 0; i < K; ++i) row[i] = f_eval(sp, basis[i], u);
        B.push_back(row);
        eqmods.push_back(sp.ring.xmod);
    }
    if (B.empty()) {
        // perp of the zero module is everything
        std::vector<std::vector<long long>> full;
        for (int i = 0; i < K; ++i) {
            std::vector<long long> c(K, 0);
            c[i] = 1;
            full.push_back(c);
        }
        return subgroup_from_generators(mods, full);
    }
    return pairing_kernel(mods, eqmods, B);
}

SubgroupHNF h_perp_of(const HermSpace& sp, int k) {
    std::vector<long long> mods = sp.coord_mods();
    int K = (int)mods.size();
    auto gens = layer_generators(sp, k);
    std::vector<std::vector<long long>> B;
    std::vector<long long> eqmods;
    std::vector<Vec> basis;
    for (int i = 0; i < K; ++i) {
        std::vector<long long> c(K, 0);
        c[i] = 1;
        basis.push_back(sp.from_coords(c));
    }
    for (const auto& g : gens) {
        Vec u = sp.from_coords(g);
        std::vector<long long> rowx(K), rowy(K);
        for (int i = 0; i < K; ++i) {
            RingElem hv = h_eval(sp, basis[i], u);
            rowx[i] = hv.x;
            rowy[i] = hv.y;
        }
        B.push_back(rowx);
        eqmods.push_back(sp.ring.xmod);
        if (sp.ring.has_y()) {
            B.push_back(rowy);
            eqmods.push_back(sp.ring.ymod);
        }
    }
    if (B.empty()) {
        std::vector<std::vector<long long>> full;
        for (int i = 0; i < K; ++i) {
            std::vector<long long> c(K, 0);
            c[i] = 1;
            full.push_back(c);
        }
        return subgroup_from_generators(mods, full);
    }
    return pairing_kernel(mods, eqmods, B);
}

RingElem orbit_invariant(const HermSpace& sp, const Vec& v, int j) {
    if (!is_primitive(sp, v)) throw std::invalid_argument("orbit_invariant: vector not primitive");
    return reduce_mod_ideal(sp.ring, h_eval(sp, v, v), j);
}

namespace {
// gram blocks: hyperbolic pairs and single slots, read from the standard grams
std::vector<std::vector<int>> gram_blocks(const HermSpace& sp) {
    std::vector<std::vector<int>> blocks;
    int i = 0;
    while (i < sp.m) {
        if (i + 1 < sp.m && sp.gram[i][i + 1] != ring_zero(sp.ring)) {
            blocks.push_back({i, i + 1});
            i += 2;
        } else {
            blocks.push_back({i});
            i += 1;
        }
    }
    return blocks;
}

long long inv_key(const RingSpec& s, const RingElem& r) { return r.x + r.y * s.xmod; }
} // namespace

OrbitTransversal orbit_transversal(const HermSpace& sp, int i, long long sweep_budget) {
    const RingSpec& rs = sp.ring;
    if (2 * i < rs.e) throw std::invalid_argument("orbit_transversal: ideal square must vanish");
    if (i >= rs.e) throw std::invalid_argument("orbit_transversal: ideal must be nonzero");
    int j = rs.e - i;

    // block value sets: contribution of each gram block to h(v,v) mod r^j,
    // split by whether the block carries a unit coordinate
    auto blocks = gram_blocks(sp);
    long long xd, yd;
    ideal_divisors(rs, j, xd, yd);
    long long per_entry = xd * (rs.has_y() ? yd : 1);

    struct BlockSets {
        std::unordered_set<long long> all, prim;
    };
    std::vector<BlockSets> bs;
    for (const auto& blk : blocks) {
        BlockSets b;
        long long n = 1;
        for (size_t t = 0; t < blk.size(); ++t) n *= per_entry;
        for (long long idx = 0; idx < n; ++idx) {
            long long rem = idx;
            Vec v = vec_zero(sp);
            bool prim = false;
            for (int slot : blk) {
                long long xi = rem % xd;
                rem /= xd;
                long long yi = 0;
                if (rs.has_y()) {
                    yi = rem % yd;
                    rem /= yd;
                }
                v.c[slot] = ring_from_parts(rs, xi, yi);
                prim |= is_unit(rs, v.c[slot]);
            }
            long long k = inv_key(rs, reduce_mod_ideal(rs, h_eval(sp, v, v), j));
            b.all.insert(k);
            if (prim) b.prim.insert(k);
        }
        bs.push_back(std::move(b));
    }
    auto add_keys = [&](const RingSpec& s, long long k1, long long k2) {
        RingElem a{k1 % s.xmod, k1 / s.xmod}, b{k2 % s.xmod, k2 / s.xmod};
        return inv_key(s, reduce_mod_ideal(s, ring_add(s, a, b), j));
    };
    std::unordered_set<long long> achievable;
    for (size_t kprim = 0; kprim < bs.size(); ++kprim) {
        std::unordered_set<long long> acc = bs[kprim].prim;
        for (size_t l = 0; l < bs.size(); ++l) {
            if (l == kprim) continue;
            std::unordered_set<long long> next;
            for (long long a : acc)
                for (long long b : bs[l].all) next.insert(add_keys(rs, a, b));
            acc = std::move(next);
        }
        achievable.insert(acc.begin(), acc.end());
    }

    OrbitTransversal out;
    out.count = (long long)achievable.size();

    // full sweep when affordable: lexicographically smallest representatives
    long long qsize = 1;
    for (int t = 0; t < sp.m; ++t) qsize *= per_entry;
    if (qsize <= sweep_budget) {
        std::map<long long, Vec> best;
        for (const auto& v : enumerate_mod_layer(sp, j)) {
            if (!is_primitive(sp, v)) continue;
            long long k = inv_key(rs, reduce_mod_ideal(rs, h_eval(sp, v, v), j));
            auto it = best.find(k);
            if (it == best.end())
                best.emplace(k, v);
        }
        if ((long long)best.size() != out.count)
            throw std::logic_error("orbit_transversal: sweep and block composition disagree");
        for (auto& [k, v] : best)
            out.reps.emplace_back(RingElem{k % rs.xmod, k / rs.xmod}, v);
        out.swept = true;
    }
    return out;
}

std::optional<Vec> find_isotropic(const HermSpace& sp) {
    const RingSpec& rs = sp.ring;
    if (sp.kind == FormKind::SkewHermitian) return vec_unit(sp, 0);
    // hermitian diagonal form: per-slot norm value sets with witnesses
    struct SlotSet {
        std::map<long long, RingElem> all, unit; // d*norm value -> witness x
    };
    std::vector<SlotSet> slots(sp.m);
    for (int k = 0; k < sp.m; ++k) {
        RingElem d = sp.gram[k][k];
        for (const auto& x : enumerate_ring(rs)) {
            RingElem val = ring_mul(rs, d, ring_mul(rs, invol(rs, x), x));
            long long key = inv_key(rs, val);
            if (!slots[k].all.count(key)) slots[k].all[key] = x;
            if (is_unit(rs, x) && !slots[k].unit.count(key)) slots[k].unit[key] = x;
        }
    }
    // prefix/suffix compositions of the "all" sets with witness vectors
    using Compose = std::map<long long, std::vector<RingElem>>;
    auto combine = [&](const Compose& a, const SlotSet& s) {
        Compose out;
        for (const auto& [ka, wa] : a)
            for (const auto& [kb, xb] : s.all) {
                RingElem va{ka % rs.xmod, ka / rs.xmod}, vb{kb % rs.xmod, kb / rs.xmod};
                long long k = inv_key(rs, ring_add(rs, va, vb));
                if (!out.count(k)) {
                    auto w = wa;
                    w.push_back(xb);
                    out[k] = w;
                }
            }
        return out;
    };
    for (int a = 0; a < sp.m; ++a) {
        // unit witness at slot a, anything elsewhere
        Compose rest;
        rest[0] = {};
        for (int k = 0; k < sp.m; ++k)
            if (k != a) rest = combine(rest, slots[k]);
        for (const auto& [ku, xu] : slots[a].unit) {
            RingElem vu{ku % rs.xmod, ku / rs.xmod};
            long long need = inv_key(rs, ring_neg(rs, vu));
            auto it = rest.find(need);
            if (it == rest.end()) continue;
            Vec v = vec_zero(sp);
            v.c[a] = xu;
            int t = 0;
            for (int k = 0; k < sp.m; ++k)
                if (k != a) v.c[k] = it->second[t++];
            if (h_eval(sp, v, v) != ring_zero(rs)) throw std::logic_error("find_isotropic: bad witness");
            if (!is_primitive(sp, v)) throw std::logic_error("find_isotropic: witness not primitive");
            return v;
        }
    }
    return std::nullopt;
}

namespace {
RingElem half_elem(const RingSpec& s) { return ring_from_int(s, half_mod(s.xmod)); }

// determinant of the coordinate matrix of a proposed basis, for unimodularity
RingElem basis_det(const HermSpace& sp, const std::vector<Vec>& basis) {
    int n = sp.m;
    std::vector<std::vector<RingElem>> mat(n, std::vector<RingElem>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) mat[i][j] = basis[j].c[i];
    // Laplace expansion; n <= 4 so cost is irrelevant
    std::function<RingElem(std::vector<int>, std::vector<int>)> det =
        [&](std::vector<int> rows, std::vector<int> cols) -> RingElem {
        if (rows.size() == 1) return mat[rows[0]][cols[0]];
        RingElem acc = ring_zero(sp.ring);
        for (size_t t = 0; t < cols.size(); ++t) {
            std::vector<int> r2(rows.begin() + 1, rows.end()), c2;
            for (size_t s2 = 0; s2 < cols.size(); ++s2)
                if (s2 != t) c2.push_back(cols[s2]);
            RingElem term = ring_mul(sp.ring, mat[rows[0]][cols[t]], det(r2, c2));
            acc = (t % 2 == 0) ? ring_add(sp.ring, acc, term) : ring_sub(sp.ring, acc, term);
        }
        return acc;
    };
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    return det(idx, idx);
}

// orthogonal basis of the restricted hermitian form on span(basis)
std::vector<Vec> diagonalize_hermitian(const HermSpace& sp, std::vector<Vec> basis) {
    const RingSpec& rs = sp.ring;
    std::vector<Vec> out;
    while (!basis.empty()) {
        int pick = -1;
        Vec pivot = basis[0];
        for (size_t i = 0; i < basis.size() && pick < 0; ++i)
            if (is_unit(rs, h_eval(sp, basis[i], basis[i]))) { pick = (int)i; pivot = basis[i]; }
        if (pick < 0) {
            for (size_t i = 0; i < basis.size() && pick < 0; ++i)
                for (size_t j = i + 1; j < basis.size() && pick < 0; ++j) {
                    Vec cand = vec_add(sp, basis[i], basis[j]);
                    if (is_unit(rs, h_eval(sp, cand, cand))) { pick = (int)i; pivot = cand; }
                }
        }
        if (pick < 0) throw std::logic_error("diagonalize: no unit-length vector found");
        RingElem pv = h_eval(sp, pivot, pivot);
        RingElem pvinv = ring_inv(rs, pv);
        std::vector<Vec> rest;
        for (size_t i = 0; i < basis.size(); ++i) {
            if ((int)i == pick) continue;
            Vec b = basis[i];
            RingElem coef = ring_mul(rs, pvinv, h_eval(sp, pivot, b));
            rest.push_back(vec_sub(sp, b, vec_scal(sp, coef, pivot)));
        }
        out.push_back(pivot);
        basis = std::move(rest);
    }
    return out;
}

// isotropic primitive vector in the span of an orthogonal basis, or nullopt
std::optional<Vec> isotropic_in_span(const HermSpace& sp, const std::vector<Vec>& diag) {
    const RingSpec& rs = sp.ring;
    int n = (int)diag.size();
    struct SlotSet {
        std::map<long long, RingElem> all, unit;
    };
    std::vector<SlotSet> slots(n);
    for (int k = 0; k < n; ++k) {
        RingElem d = h_eval(sp, diag[k], diag[k]);
        for (const auto& x : enumerate_ring(rs)) {
            RingElem val = ring_mul(rs, d, ring_mul(rs, invol(rs, x), x));
            long long key = inv_key(rs, val);
            if (!slots[k].all.count(key)) slots[k].all[key] = x;
            if (is_unit(rs, x) && !slots[k].unit.count(key)) slots[k].unit[key] = x;
        }
    }
    for (int a = 0; a < n; ++a) {
        std::map<long long, std::vector<RingElem>> rest;
        rest[0] = {};
        for (int k = 0; k < n; ++k) {
            if (k == a) continue;
            std::map<long long, std::vector<RingElem>> nxt;
            for (const auto& [kv, wv] : rest)
                for (const auto& [ks, xs] : slots[k].all) {
                    RingElem va{kv % rs.xmod, kv / rs.xmod}, vb{ks % rs.xmod, ks / rs.xmod};
                    long long key = inv_key(rs, ring_add(rs, va, vb));
                    if (!nxt.count(key)) {
                        auto w = wv;
                        w.push_back(xs);
                        nxt[key] = w;
                    }
                }
            rest = std::move(nxt);
        }
        for (const auto& [ku, xu] : slots[a].unit) {
            RingElem vu{ku % rs.xmod, ku / rs.xmod};
            auto it = rest.find(inv_key(rs, ring_neg(rs, vu)));
            if (it == rest.end()) continue;
            Vec v = vec_scal(sp, xu, diag[a]);
            int t = 0;
            for (int k = 0; k < n; ++k)
                if (k != a) {
                    v = vec_add(sp, v, vec_scal(sp, it->second[t], diag[k]));
                    ++t;
                }
            if (h_eval(sp, v, v) != ring_zero(rs)) throw std::logic_error("isotropic_in_span: bad value");
            return v;
        }
    }
    return std::nullopt;
}
} // namespace

HyperbolicDecomp hyperbolic_decomposition(const HermSpace& sp) {
    const RingSpec& rs = sp.ring;
    HyperbolicDecomp out;
    if (sp.kind == FormKind::SkewHermitian) {
        for (const auto& blk : gram_blocks(sp)) {
            if (blk.size() == 2)
                out.planes.emplace_back(vec_unit(sp, blk[0]), vec_unit(sp, blk[1]));
            else {
                out.ortho.push_back(vec_unit(sp, blk[0]));
                out.ortho_vals.push_back(sp.gram[blk[0]][blk[0]]);
            }
        }
        return out;
    }
    // hermitian: peel hyperbolic planes while isotropic vectors exist
    std::vector<Vec> basis;
    for (int i = 0; i < sp.m; ++i) basis.push_back(vec_unit(sp, i));
    while (!basis.empty()) {
        std::vector<Vec> diag = diagonalize_hermitian(sp, basis);
        auto iso = isotropic_in_span(sp, diag);
        if (!iso) {
            for (const auto& w : diag) {
                out.ortho.push_back(w);
                out.ortho_vals.push_back(h_eval(sp, w, w));
            }
            break;
        }
        Vec v = *iso;
        // partner with h(v, w0) a unit, then unit-normalize and isotropize
        Vec w0 = vec_zero(sp);
        bool found = false;
        for (const auto& b : diag) {
            RingElem pr = h_eval(sp, v, b);
            if (is_unit(rs, pr)) {
                w0 = vec_scal(sp, ring_inv(rs, pr), b);
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("hyperbolic_decomposition: no unit pairing partner");
        RingElem c = ring_neg(rs, ring_mul(rs, half_elem(rs), h_eval(sp, w0, w0)));
        Vec w = vec_add(sp, w0, vec_scal(sp, c, v));
        if (h_eval(sp, v, w) != ring_one(rs) || h_eval(sp, w, w) != ring_zero(rs))
            throw std::logic_error("hyperbolic_decomposition: bad plane");
        out.planes.emplace_back(v, w);
        // project the remaining slots off the plane
        std::vector<Vec> rest;
        for (const auto& b : diag) {
            Vec x = b;
            RingElem acoef = h_eval(sp, w, x); // eps = +1
            RingElem bcoef = h_eval(sp, v, x);
            x = vec_sub(sp, x, vec_scal(sp, acoef, v));
            x = vec_sub(sp, x, vec_scal(sp, bcoef, w));
            bool zero = true;
            for (int t = 0; t < sp.m; ++t)
                if (x.c[t] != ring_zero(rs)) zero = false;
            if (!zero) rest.push_back(x);
        }
        // keep an independent subset of the projections (rank drops by 2):
        // the plane absorbed two slots, so one projected vector is redundant
        while ((int)rest.size() > (int)diag.size() - 2) {
            // drop a vector that keeps the collection spanning: try removing
            // one at a time and keep the form nondegenerate on the rest
            bool dropped = false;
            for (size_t drop = 0; drop < rest.size() && !dropped; ++drop) {
                std::vector<Vec> cand;
                for (size_t t = 0; t < rest.size(); ++t)
                    if (t != drop) cand.push_back(rest[t]);
                std::vector<Vec> full = cand;
                full.push_back(v);
                full.push_back(w);
                for (const auto& pl : out.planes) {
                    if (pl.first == v) continue;
                    full.push_back(pl.first);
                    full.push_back(pl.second);
                }
                for (const auto& o : out.ortho) full.push_back(o);
                if ((int)full.size() == sp.m && is_unit(rs, basis_det(sp, full))) {
                    rest = cand;
                    dropped = true;
                }
            }
            if (!dropped) throw std::logic_error("hyperbolic_decomposition: projection rank fixup failed");
        }
        basis = std::move(rest);
    }
    // final unimodularity check of the assembled basis
    std::vector<Vec> full;
    for (const auto& pl : out.planes) {
        full.push_back(pl.first);
        full.push_back(pl.second);
    }
    for (const auto& o : out.ortho) full.push_back(o);
    if ((int)full.size() != sp.m || !is_unit(rs, basis_det(sp, full)))
        throw std::logic_error("hyperbolic_decomposition: basis not unimodular");
    return out;
}

long long FinSympGroup::f_pair(const std::vector<long long>& a, const std::vector<long long>& b) const {
    long long modv = 1;
    for (int t = 0; t < E; ++t) modv *= p;
    long long acc = 0;
    for (size_t i = 0; i < mods.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < mods.size(); ++j) {
            if (b[j] == 0 || fmat[i][j] == 0) continue;
            acc = (acc + (a[i] % modv) * (b[j] % modv) % modv * fmat[i][j]) % modv;
        }
    }
    return ((acc % modv) + modv) % modv;
}

long long FinSympGroup::size() const {
    long long n = 1;
    for (long long m : mods) n *= m;
    return n;
}

std::vector<long long> FinSympGroup::reduce(std::vector<long long> v) const {
    for (size_t i = 0; i < mods.size(); ++i) v[i] = ((v[i] % mods[i]) + mods[i]) % mods[i];
    return v;
}

std::vector<long long> FinSympGroup::add(const std::vector<long long>& a, const std::vector<long long>& b) const {
    std::vector<long long> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % mods[i];
    return r;
}

std::vector<long long> FinSympGroup::scal(long long s, const std::vector<long long>& a) const {
    std::vector<long long> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = ((s % mods[i]) * a[i] % mods[i] + mods[i]) % mods[i];
    return r;
}

FinSympGroup fin_symp_of(const HermSpace& sp) {
    FinSympGroup g;
    g.mods = sp.coord_mods();
    g.p = sp.ring.p;
    g.E = sp.ring.eprime;
    int K = (int)g.mods.size();
    g.fmat.assign(K, std::vector<long long>(K, 0));
    std::vector<Vec> basis;
    for (int i = 0; i < K; ++i) {
        std::vector<long long> c(K, 0);
        c[i] = 1;
        basis.push_back(sp.from_coords(c));
    }
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) g.fmat[i][j] = f_eval(sp, basis[i], basis[j]);
    return g;
}

FinSympGroup fin_symp_quotient(const HermSpace& sp, int i,
                               std::vector<std::vector<long long>>* lift_out,
                               std::vector<long long>* shape_out) {
    const RingSpec& rs = sp.ring;
    if (i <= 0 || i >= rs.e) throw std::invalid_argument("fin_symp_quotient: bad ideal exponent");
    int j = rs.e - i;
    long long xdj, ydj, xdi, ydi;
    ideal_divisors(rs, j, xdj, ydj);
    ideal_divisors(rs, i, xdi, ydi);
    FinSympGroup g;
    g.p = rs.p;
    g.E = rs.eprime;
    std::vector<std::vector<long long>> lifts;
    std::vector<long long> mods = sp.coord_mods();
    int K = (int)mods.size();
    int per = sp.coords_per_entry();
    for (int slot = 0; slot < sp.m; ++slot) {
        if (xdi / xdj > 1) {
            std::vector<long long> l(K, 0);
            l[slot * per] = xdj;
            g.mods.push_back(xdi / xdj);
            lifts.push_back(l);
        }
        if (rs.has_y() && ydi / ydj > 1) {
            std::vector<long long> l(K, 0);
            l[slot * per + 1] = ydj;
            g.mods.push_back(ydi / ydj);
            lifts.push_back(l);
        }
    }
    int Kq = (int)g.mods.size();
    g.fmat.assign(Kq, std::vector<long long>(Kq, 0));
    for (int a = 0; a < Kq; ++a)
        for (int b = 0; b < Kq; ++b)
            g.fmat[a][b] = f_eval(sp, sp.from_coords(lifts[a]), sp.from_coords(lifts[b]));
    if (lift_out) *lift_out = lifts;
    if (shape_out) *shape_out = {xdj, ydj, xdi, ydi};
    return g;
}

long long SympPairs::lagrangian_size() const {
    long long n = 1;
    for (long long o : order) n *= o;
    return n;
}

void SympPairs::decompose(const std::vector<long long>& v,
                          std::vector<long long>& a, std::vector<long long>& b) const {
    size_t T = u.size();
    a.assign(T, 0);
    b.assign(T, 0);
    long long modv = 1;
    for (int t = 0; t < g->E; ++t) modv *= g->p;
    for (size_t t = 0; t < T; ++t) {
        long long pv = modv / order[t]; // p^{val_t}
        long long ei = inv_mod(eta[t] % order[t], order[t]);
        long long fw = g->f_pair(v, w[t]);
        long long fu = g->f_pair(v, u[t]);
        if (fw % pv != 0 || fu % pv != 0)
            throw std::logic_error("SympPairs::decompose: pairing valuation violated");
        a[t] = (fw / pv) % order[t] * ei % order[t];
        b[t] = (order[t] - (fu / pv) % order[t] * ei % order[t]) % order[t];
    }
    // exact reconstruction check
    std::vector<long long> rec(g->mods.size(), 0);
    for (size_t t = 0; t < T; ++t) {
        rec = g->add(rec, g->scal(a[t], u[t]));
        rec = g->add(rec, g->scal(b[t], w[t]));
    }
    if (g->reduce(rec) != g->reduce(v))
        throw std::logic_error("SympPairs::decompose: reconstruction failed");
}

SympPairs symplectic_pairs(const FinSympGroup& g) {
    long long modv = 1;
    for (int t = 0; t < g.E; ++t) modv *= g.p;
    auto valuation = [&](long long x) {
        if (x % modv == 0) return (long long)g.E;
        long long v = 0;
        while (x % g.p == 0) { x /= g.p; ++v; }
        return v;
    };
    SympPairs pr;
    pr.g = &g;
    int K = (int)g.mods.size();
    std::vector<std::vector<long long>> gens;
    for (int i = 0; i < K; ++i) {
        std::vector<long long> e(K, 0);
        e[i] = 1;
        gens.push_back(e);
    }
    while (!gens.empty()) {
        long long bestv = g.E + 1;
        int bi = -1, bj = -1;
        for (size_t i = 0; i < gens.size(); ++i)
            for (size_t j = i + 1; j < gens.size(); ++j) {
                long long c = g.f_pair(gens[i], gens[j]);
                if (c == 0) continue;
                long long v = valuation(c);
                if (v < bestv) { bestv = v; bi = (int)i; bj = (int)j; }
            }
        if (bi < 0) {
            // all remaining generators pair to zero; nondegeneracy forces them
            // to be trivial in the group
            for (const auto& gen : gens) {
                auto r = g.reduce(gen);
                for (long long x : r)
                    if (x != 0) throw std::logic_error("symplectic_pairs: degenerate form");
            }
            break;
        }
        std::vector<long long> uu = gens[bi], ww = gens[bj];
        long long c = g.f_pair(uu, ww);
        long long pv = 1;
        for (int t = 0; t < bestv; ++t) pv *= g.p;
        long long ord = modv / pv;
        long long eta = (c / pv) % ord;
        long long etainv = inv_mod(eta, ord);
        std::vector<std::vector<long long>> rest;
        for (size_t k = 0; k < gens.size(); ++k) {
            if ((int)k == bi || (int)k == bj) continue;
            // make gens[k] orthogonal to the chosen pair
            long long fw = g.f_pair(gens[k], ww);
            long long fu = g.f_pair(gens[k], uu);
            if (fw % pv != 0 || fu % pv != 0)
                throw std::logic_error("symplectic_pairs: minimal valuation violated");
            long long alpha = (fw / pv) % ord * etainv % ord;
            long long beta = (fu / pv) % ord * etainv % ord;
            std::vector<long long> nk(K);
            for (int r = 0; r < K; ++r) {
                long long t = gens[k][r] - alpha * uu[r] + beta * ww[r];
                nk[r] = ((t % g.mods[r]) + g.mods[r]) % g.mods[r];
            }
            if (g.f_pair(nk, ww) != 0 || g.f_pair(nk, uu) != 0)
                throw std::logic_error("symplectic_pairs: orthogonalization failed");
            rest.push_back(nk);
        }
        pr.u.push_back(uu);
        pr.w.push_back(ww);
        pr.eta.push_back(eta);
        pr.val.push_back(bestv);
        pr.order.push_back(ord);
        gens = std::move(rest);
    }
    // Lagrangian size check: product of pair orders squares to |G|
    long long L = pr.lagrangian_size();
    if (L * L != g.size()) throw std::logic_error("symplectic_pairs: lagrangian size mismatch");
    return pr;
}

} // namespace weil
