#include "weil/unitary.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>

namespace weil {

UElem u_identity(const HermSpace& sp) {
    UElem g;
    g.m = sp.m;
    g.a.assign(size_t(sp.m) * sp.m, ring_zero(sp.ring));
    for (int i = 0; i < sp.m; ++i) g.at(i, i) = ring_one(sp.ring);
    return g;
}

UElem u_scalar(const HermSpace& sp, const RingElem& z) {
    UElem g = u_identity(sp);
    for (int i = 0; i < sp.m; ++i) g.at(i, i) = z;
    return g;
}

UElem u_mul(const HermSpace& sp, const UElem& g, const UElem& h) {
    UElem r;
    r.m = sp.m;
    r.a.assign(size_t(sp.m) * sp.m, ring_zero(sp.ring));
    for (int i = 0; i < sp.m; ++i)
        for (int k = 0; k < sp.m; ++k) {
            if (g.at(i, k) == ring_zero(sp.ring)) continue;
            for (int j = 0; j < sp.m; ++j)
                r.at(i, j) = ring_add(sp.ring, r.at(i, j), ring_mul(sp.ring, g.at(i, k), h.at(k, j)));
        }
    return r;
}

Vec u_apply(const HermSpace& sp, const UElem& g, const Vec& v) {
    Vec r = vec_zero(sp);
    for (int i = 0; i < sp.m; ++i)
        for (int j = 0; j < sp.m; ++j)
            r.c[i] = ring_add(sp.ring, r.c[i], ring_mul(sp.ring, g.at(i, j), v.c[j]));
    return r;
}

namespace {
// inverse of a square matrix over the local ring; pivots are always units
std::vector<RingElem> ring_mat_inv(const RingSpec& rs, std::vector<RingElem> a, int n) {
    std::vector<RingElem> inv(size_t(n) * n, ring_zero(rs));
    for (int i = 0; i < n; ++i) inv[size_t(i) * n + i] = ring_one(rs);
    auto A = [&](int i, int j) -> RingElem& { return a[size_t(i) * n + j]; };
    auto I = [&](int i, int j) -> RingElem& { return inv[size_t(i) * n + j]; };
    for (int c = 0; c < n; ++c) {
        int pr = -1;
        for (int r = c; r < n; ++r)
            if (is_unit(rs, A(r, c))) { pr = r; break; }
        if (pr < 0) throw std::domain_error("ring_mat_inv: matrix not invertible");
        if (pr != c)
            for (int j = 0; j < n; ++j) {
                std::swap(A(pr, j), A(c, j));
                std::swap(I(pr, j), I(c, j));
            }
        RingElem pinv = ring_inv(rs, A(c, c));
        for (int j = 0; j < n; ++j) {
            A(c, j) = ring_mul(rs, pinv, A(c, j));
            I(c, j) = ring_mul(rs, pinv, I(c, j));
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || A(r, c) == ring_zero(rs)) continue;
            RingElem f = A(r, c);
            for (int j = 0; j < n; ++j) {
                A(r, j) = ring_sub(rs, A(r, j), ring_mul(rs, f, A(c, j)));
                I(r, j) = ring_sub(rs, I(r, j), ring_mul(rs, f, I(c, j)));
            }
        }
    }
    return inv;
}

UElem conj_transpose(const HermSpace& sp, const UElem& g) {
    UElem r;
    r.m = sp.m;
    r.a.assign(g.a.size(), ring_zero(sp.ring));
    for (int i = 0; i < sp.m; ++i)
        for (int j = 0; j < sp.m; ++j) r.at(i, j) = invol(sp.ring, g.at(j, i));
    return r;
}

UElem gram_matrix(const HermSpace& sp) {
    UElem b;
    b.m = sp.m;
    b.a.assign(size_t(sp.m) * sp.m, ring_zero(sp.ring));
    for (int i = 0; i < sp.m; ++i)
        for (int j = 0; j < sp.m; ++j) b.at(i, j) = sp.gram[i][j];
    return b;
}

// matrix whose columns are the given vectors
UElem mat_from_columns(const HermSpace& sp, const std::vector<Vec>& cols) {
    UElem c;
    c.m = sp.m;
    c.a.assign(size_t(sp.m) * sp.m, ring_zero(sp.ring));
    for (int j = 0; j < sp.m; ++j)
        for (int i = 0; i < sp.m; ++i) c.at(i, j) = cols[j].c[i];
    return c;
}

UElem conjugate_to_basis(const HermSpace& sp, const std::vector<Vec>& basis, const UElem& in_basis) {
    UElem C = mat_from_columns(sp, basis);
    UElem Cinv;
    Cinv.m = sp.m;
    Cinv.a = ring_mat_inv(sp.ring, C.a, sp.m);
    return u_mul(sp, C, u_mul(sp, in_basis, Cinv));
}
} // namespace

UElem u_inv(const HermSpace& sp, const UElem& g) {
    // g^{-1} = B^{-1} g^{*T} B for isometries
    UElem b = gram_matrix(sp);
    UElem binv;
    binv.m = sp.m;
    binv.a = ring_mat_inv(sp.ring, b.a, sp.m);
    UElem r = u_mul(sp, binv, u_mul(sp, conj_transpose(sp, g), b));
    return r;
}

bool is_unitary(const HermSpace& sp, const UElem& g) {
    UElem lhs = u_mul(sp, conj_transpose(sp, g), u_mul(sp, gram_matrix(sp), g));
    return lhs == gram_matrix(sp);
}

bool in_congruence(const HermSpace& sp, const UElem& g, int k) {
    for (int i = 0; i < sp.m; ++i)
        for (int j = 0; j < sp.m; ++j) {
            RingElem d = g.at(i, j);
            if (i == j) d = ring_sub(sp.ring, d, ring_one(sp.ring));
            if (!in_ideal(sp.ring, d, k)) return false;
        }
    return true;
}

std::string u_key(const HermSpace& sp, const UElem& g) {
    std::string s;
    s.reserve(g.a.size() * 8);
    for (const auto& e : g.a) {
        long long k = elem_key(sp.ring, e);
        s.append(reinterpret_cast<const char*>(&k), sizeof(k));
    }
    return s;
}

UElem eichler(const HermSpace& sp, const RingElem& a, const Vec& u, const Vec& v) {
    const RingSpec& rs = sp.ring;
    if (h_eval(sp, u, u) != ring_zero(rs) || h_eval(sp, v, v) != ring_zero(rs) ||
        h_eval(sp, u, v) != ring_zero(rs))
        throw std::invalid_argument("eichler: vectors must be isotropic and orthogonal");
    UElem g;
    g.m = sp.m;
    g.a.assign(size_t(sp.m) * sp.m, ring_zero(rs));
    for (int j = 0; j < sp.m; ++j) {
        Vec x = vec_unit(sp, j);
        Vec img = vec_add(sp, x, vec_scal(sp, ring_mul(rs, a, h_eval(sp, u, x)), v));
        RingElem cu = ring_mul(rs, invol(rs, a), h_eval(sp, v, x)); // a^* h(v,x)
        img = sp.eps < 0 ? vec_add(sp, img, vec_scal(sp, cu, u))
                         : vec_sub(sp, img, vec_scal(sp, cu, u));
        for (int i = 0; i < sp.m; ++i) g.at(i, j) = img.c[i];
    }
    if (!is_unitary(sp, g)) throw std::logic_error("eichler: result not unitary");
    return g;
}

UElem transvection(const HermSpace& sp, const RingElem& a, const Vec& u) {
    const RingSpec& rs = sp.ring;
    RingElem need = sp.eps < 0 ? a : ring_neg(rs, a);
    if (invol(rs, a) != need) throw std::invalid_argument("transvection: a^* must equal -eps a");
    if (h_eval(sp, u, u) != ring_zero(rs)) throw std::invalid_argument("transvection: u must be isotropic");
    UElem g;
    g.m = sp.m;
    g.a.assign(size_t(sp.m) * sp.m, ring_zero(rs));
    for (int j = 0; j < sp.m; ++j) {
        Vec x = vec_unit(sp, j);
        Vec img = vec_add(sp, x, vec_scal(sp, ring_mul(rs, a, h_eval(sp, u, x)), u));
        for (int i = 0; i < sp.m; ++i) g.at(i, j) = img.c[i];
    }
    if (!is_unitary(sp, g)) throw std::logic_error("transvection: result not unitary");
    return g;
}

UElem plane_slot_mixer(const HermSpace& sp, const Vec& u, const Vec& v, const Vec& w,
                       const RingElem& a) {
    const RingSpec& rs = sp.ring;
    RingElem d = h_eval(sp, w, w);
    if (!is_unit(rs, d)) throw std::invalid_argument("plane_slot_mixer: slot value must be a unit");
    RingElem h2 = ring_from_int(rs, half_mod(rs.xmod));
    RingElem eps = sp.eps < 0 ? ring_neg(rs, ring_one(rs)) : ring_one(rs);
    RingElem b = ring_neg(rs, ring_mul(rs, eps, ring_mul(rs, ring_mul(rs, a, invol(rs, a)),
                                                         ring_mul(rs, d, h2))));
    RingElem c = ring_neg(rs, ring_mul(rs, eps, ring_mul(rs, invol(rs, a), d)));
    RingElem dinv = ring_inv(rs, d);
    // u -> u, v -> b u + v + a w, w -> c u + w, identity on the complement:
    // x -> x + (beta b + gamma c) u + beta a w with beta = h(u,x),
    // gamma = d^{-1} h(w,x)
    UElem g;
    g.m = sp.m;
    g.a.assign(size_t(sp.m) * sp.m, ring_zero(rs));
    for (int j = 0; j < sp.m; ++j) {
        Vec x = vec_unit(sp, j);
        RingElem beta = h_eval(sp, u, x);
        RingElem gamma = ring_mul(rs, dinv, h_eval(sp, w, x));
        Vec img = x;
        img = vec_add(sp, img,
                      vec_scal(sp, ring_add(rs, ring_mul(rs, beta, b), ring_mul(rs, gamma, c)), u));
        img = vec_add(sp, img, vec_scal(sp, ring_mul(rs, beta, a), w));
        for (int i = 0; i < sp.m; ++i) g.at(i, j) = img.c[i];
    }
    if (!is_unitary(sp, g)) throw std::logic_error("plane_slot_mixer: result not unitary");
    return g;
}

UElem plane_torus(const HermSpace& sp, const Vec& u, const Vec& v, const RingElem& z) {
    const RingSpec& rs = sp.ring;
    if (!is_unit(rs, z)) throw std::invalid_argument("plane_torus: z must be a unit");
    RingElem zi = ring_inv(rs, invol(rs, z));
    RingElem eps = sp.eps < 0 ? ring_neg(rs, ring_one(rs)) : ring_one(rs);
    UElem g;
    g.m = sp.m;
    g.a.assign(size_t(sp.m) * sp.m, ring_zero(rs));
    for (int j = 0; j < sp.m; ++j) {
        Vec x = vec_unit(sp, j);
        RingElem alpha = ring_mul(rs, eps, h_eval(sp, v, x));
        RingElem beta = h_eval(sp, u, x);
        Vec img = x;
        img = vec_add(sp, img, vec_scal(sp, ring_mul(rs, ring_sub(rs, z, ring_one(rs)), alpha), u));
        img = vec_add(sp, img, vec_scal(sp, ring_mul(rs, ring_sub(rs, zi, ring_one(rs)), beta), v));
        for (int i = 0; i < sp.m; ++i) g.at(i, j) = img.c[i];
    }
    if (!is_unitary(sp, g)) throw std::logic_error("plane_torus: result not unitary");
    return g;
}

UElem aniso_mixer(const HermSpace& sp, const Vec& t, const Vec& v, const RingElem& a) {
    const RingSpec& rs = sp.ring;
    RingElem e = h_eval(sp, t, t), d = h_eval(sp, v, v);
    if (!is_unit(rs, e) || !is_unit(rs, d))
        throw std::invalid_argument("aniso_mixer: basis must be orthogonal with unit lengths");
    RingElem h2 = ring_from_int(rs, half_mod(rs.xmod));
    RingElem einv = ring_inv(rs, e), dinv = ring_inv(rs, d);
    RingElem b = ring_neg(rs, ring_mul(rs, ring_mul(rs, einv, d),
                                       ring_mul(rs, ring_mul(rs, a, invol(rs, a)), h2)));
    RingElem ap = ring_neg(rs, ring_mul(rs, ring_mul(rs, invol(rs, a), einv), d));
    RingElem bp = ring_neg(rs, ring_mul(rs, ring_mul(rs, dinv, e),
                                        ring_mul(rs, ring_mul(rs, ap, invol(rs, ap)), h2)));
    std::vector<Vec> basis{t, v};
    if (sp.m != 2) throw std::invalid_argument("aniso_mixer: rank 2 only");
    UElem blk = u_identity(sp);
    blk.at(0, 0) = ring_add(rs, ring_one(rs), b);
    blk.at(0, 1) = ap;
    blk.at(1, 0) = a;
    blk.at(1, 1) = ring_add(rs, ring_one(rs), bp);
    UElem g = conjugate_to_basis(sp, basis, blk);
    if (!is_unitary(sp, g)) throw std::logic_error("aniso_mixer: result not unitary");
    return g;
}

namespace {
std::vector<RingElem> residue_reps(const RingSpec& rs) {
    std::vector<RingElem> out;
    if (rs.rcase == RingCase::Unramified) {
        for (long long x = 0; x < rs.p; ++x)
            for (long long y = 0; y < rs.p; ++y) out.push_back(ring_from_parts(rs, x, y));
    } else {
        for (long long x = 0; x < rs.p; ++x) out.push_back(ring_from_parts(rs, x, 0));
    }
    return out;
}
} // namespace

GroupStore enumerate_group_bruteforce(const HermSpace& sp, long long budget) {
    const RingSpec& rs = sp.ring;
    long long total = 1;
    for (int t = 0; t < sp.m * sp.m; ++t) {
        total *= rs.ring_size();
        if (total > budget) throw BudgetExceeded("bruteforce enumeration over budget");
    }
    auto ring = enumerate_ring(rs);
    GroupStore st;
    std::vector<int> idx(sp.m * sp.m, 0);
    while (true) {
        UElem g;
        g.m = sp.m;
        g.a.resize(sp.m * sp.m);
        for (int t = 0; t < sp.m * sp.m; ++t) g.a[t] = ring[idx[t]];
        if (is_unitary(sp, g)) {
            st.index[u_key(sp, g)] = (int)st.elems.size();
            st.elems.push_back(g);
        }
        int t = sp.m * sp.m - 1;
        while (t >= 0) {
            if (++idx[t] < (int)ring.size()) break;
            idx[t] = 0;
            --t;
        }
        if (t < 0) break;
    }
    st.layer = rs.e;
    return st;
}

GroupStore enumerate_group(const HermSpace& sp, long long budget) {
    const RingSpec& rs = sp.ring;
    // layer 1: isometric frames over A/r by column backtracking
    std::vector<RingElem> reps = residue_reps(rs);
    std::vector<Vec> cand_cols;
    {
        std::vector<int> idx(sp.m, 0);
        while (true) {
            Vec v = vec_zero(sp);
            for (int i = 0; i < sp.m; ++i) v.c[i] = reps[idx[i]];
            cand_cols.push_back(v);
            int t = sp.m - 1;
            while (t >= 0) {
                if (++idx[t] < (int)reps.size()) break;
                idx[t] = 0;
                --t;
            }
            if (t < 0) break;
        }
    }
    std::vector<UElem> current;
    {
        std::vector<Vec> frame;
        std::function<void()> rec = [&]() {
            int j = (int)frame.size();
            if (j == sp.m) {
                UElem g = mat_from_columns(sp, frame);
                current.push_back(g);
                if ((long long)current.size() > budget)
                    throw BudgetExceeded("group enumeration over budget (residue layer)");
                return;
            }
            for (const auto& v : cand_cols) {
                bool ok = in_ideal(rs, ring_sub(rs, h_eval(sp, v, v), sp.gram[j][j]), 1);
                for (int i = 0; ok && i < j; ++i)
                    ok = in_ideal(rs, ring_sub(rs, h_eval(sp, frame[i], v), sp.gram[i][j]), 1);
                if (!ok) continue;
                frame.push_back(v);
                rec();
                frame.pop_back();
            }
        };
        rec();
    }
    // lift layer by layer through the linearized isometry condition
    for (int k = 1; k < rs.e; ++k) {
        long long xdk, ydk, xdk1, ydk1;
        ideal_divisors(rs, k, xdk, ydk);
        ideal_divisors(rs, k + 1, xdk1, ydk1);
        struct Unknown {
            int i, j;
            bool ypart;
        };
        std::vector<Unknown> unknowns;
        for (int i = 0; i < sp.m; ++i)
            for (int j = 0; j < sp.m; ++j) {
                if (xdk1 / xdk > 1) unknowns.push_back({i, j, false});
                if (rs.has_y() && ydk1 / ydk > 1) unknowns.push_back({i, j, true});
            }
        auto delta_of = [&](const Unknown& u) {
            UElem d;
            d.m = sp.m;
            d.a.assign(size_t(sp.m) * sp.m, ring_zero(rs));
            d.at(u.i, u.j) = u.ypart ? ring_from_parts(rs, 0, ydk) : ring_from_parts(rs, xdk, 0);
            return d;
        };
        // coordinates of a matrix with entries in r^k, inside r^k / r^{k+1}
        auto coords_of = [&](const UElem& v, std::vector<long long>& out) {
            out.clear();
            for (int i = 0; i < sp.m; ++i)
                for (int j = 0; j < sp.m; ++j) {
                    const RingElem& e = v.at(i, j);
                    if (e.x % xdk != 0 || (rs.has_y() && e.y % ydk != 0))
                        throw std::logic_error("lift: value escapes the layer");
                    if (xdk1 / xdk > 1) out.push_back((e.x / xdk) % rs.p);
                    if (rs.has_y() && ydk1 / ydk > 1) out.push_back((e.y / ydk) % rs.p);
                }
        };
        UElem B = gram_matrix(sp);
        std::vector<UElem> next;
        std::vector<long long> ucoords;
        for (const UElem& g : current) {
            UElem gstar = conj_transpose(sp, g);
            // defect = B - g*T B g, linear map E(D) = D*T B g + g*T B D
            UElem defect = B;
            {
                UElem f = u_mul(sp, gstar, u_mul(sp, B, g));
                for (size_t t = 0; t < defect.a.size(); ++t)
                    defect.a[t] = ring_sub(rs, defect.a[t], f.a[t]);
            }
            std::vector<long long> rhs;
            coords_of(defect, rhs);
            int R = (int)rhs.size(), C = (int)unknowns.size();
            std::vector<std::vector<long long>> M(R, std::vector<long long>(C, 0));
            for (int c = 0; c < C; ++c) {
                UElem D = delta_of(unknowns[c]);
                UElem Dstar = conj_transpose(sp, D);
                UElem img = u_mul(sp, Dstar, u_mul(sp, B, g));
                UElem img2 = u_mul(sp, gstar, u_mul(sp, B, D));
                for (size_t t = 0; t < img.a.size(); ++t)
                    img.a[t] = ring_add(rs, img.a[t], img2.a[t]);
                coords_of(img, ucoords);
                for (int r = 0; r < R; ++r) M[r][c] = ucoords[r];
            }
            // solve M t = rhs over F_p
            long long p = rs.p;
            std::vector<int> pivot_col;
            int row = 0;
            std::vector<std::vector<long long>> A = M;
            std::vector<long long> b = rhs;
            for (int c = 0; c < C && row < R; ++c) {
                int pr = -1;
                for (int r = row; r < R; ++r)
                    if (A[r][c] % p != 0) { pr = r; break; }
                if (pr < 0) continue;
                std::swap(A[pr], A[row]);
                std::swap(b[pr], b[row]);
                long long inv = inv_mod(A[row][c] % p, p);
                for (int cc = 0; cc < C; ++cc) A[row][cc] = A[row][cc] % p * inv % p;
                b[row] = b[row] % p * inv % p;
                for (int r = 0; r < R; ++r) {
                    if (r == row || A[r][c] % p == 0) continue;
                    long long f = A[r][c] % p;
                    for (int cc = 0; cc < C; ++cc)
                        A[r][cc] = ((A[r][cc] - f * A[row][cc]) % p + p) % p;
                    b[r] = ((b[r] - f * b[row]) % p + p) % p;
                }
                pivot_col.push_back(c);
                ++row;
            }
            bool consistent = true;
            for (int r = row; r < R; ++r)
                if (b[r] % p != 0) consistent = false;
            if (!consistent) continue; // no lift of this residue solution
            std::vector<int> free_cols;
            {
                std::vector<bool> isp(C, false);
                for (int c : pivot_col) isp[c] = true;
                for (int c = 0; c < C; ++c)
                    if (!isp[c]) free_cols.push_back(c);
            }
            long long nsol = 1;
            for (size_t t = 0; t < free_cols.size(); ++t) nsol *= p;
            if ((long long)next.size() + nsol > budget)
                throw BudgetExceeded("group enumeration over budget");
            std::vector<long long> freev(free_cols.size(), 0);
            while (true) {
                std::vector<long long> t(C, 0);
                for (size_t fidx = 0; fidx < free_cols.size(); ++fidx)
                    t[free_cols[fidx]] = freev[fidx];
                for (int r = (int)pivot_col.size() - 1; r >= 0; --r) {
                    long long acc = b[r];
                    for (int c = pivot_col[r] + 1; c < C; ++c)
                        acc = ((acc - A[r][c] * t[c]) % p + p) % p;
                    t[pivot_col[r]] = acc;
                }
                UElem g2 = g;
                for (int c = 0; c < C; ++c) {
                    if (t[c] == 0) continue;
                    const Unknown& un = unknowns[c];
                    RingElem inc = un.ypart ? ring_from_parts(rs, 0, t[c] * ydk)
                                            : ring_from_parts(rs, t[c] * xdk, 0);
                    g2.at(un.i, un.j) = ring_add(rs, g2.at(un.i, un.j), inc);
                }
                next.push_back(g2);
                int fi = (int)freev.size() - 1;
                while (fi >= 0) {
                    if (++freev[fi] < p) break;
                    freev[fi] = 0;
                    --fi;
                }
                if (fi < 0) break;
            }
        }
        current = std::move(next);
    }
    GroupStore st;
    st.layer = rs.e;
    for (auto& g : current) {
        if (!is_unitary(sp, g)) throw std::logic_error("enumerate_group: lift not unitary");
        std::string k = u_key(sp, g);
        if (st.index.count(k)) throw std::logic_error("enumerate_group: duplicate element");
        st.index[k] = (int)st.elems.size();
        st.elems.push_back(std::move(g));
    }
    return st;
}

std::vector<int> congruence_filter(const HermSpace& sp, const GroupStore& st, int k) {
    std::vector<int> out;
    for (size_t i = 0; i < st.elems.size(); ++i)
        if (in_congruence(sp, st.elems[i], k)) out.push_back((int)i);
    return out;
}

std::vector<UElem> group_closure(const HermSpace& sp, const std::vector<UElem>& gens,
                                 long long budget) {
    GroupStore st;
    UElem id = u_identity(sp);
    st.index[u_key(sp, id)] = 0;
    st.elems.push_back(id);
    std::vector<UElem> gset = gens;
    for (const auto& g : gens) gset.push_back(u_inv(sp, g));
    size_t head = 0;
    while (head < st.elems.size()) {
        UElem cur = st.elems[head++];
        for (const auto& g : gset) {
            UElem nx = u_mul(sp, g, cur);
            std::string k = u_key(sp, nx);
            if (st.index.count(k)) continue;
            if ((long long)st.elems.size() >= budget)
                throw BudgetExceeded("group closure over budget");
            st.index[k] = (int)st.elems.size();
            st.elems.push_back(nx);
        }
    }
    return st.elems;
}

std::vector<UElem> generator_pool(const HermSpace& sp, long long subgroup_budget) {
    const RingSpec& rs = sp.ring;
    std::vector<UElem> pool;
    auto add = [&](const UElem& g) {
        if (!is_unitary(sp, g)) throw std::logic_error("generator_pool: non-unitary generator");
        pool.push_back(g);
    };
    HyperbolicDecomp hd = hyperbolic_decomposition(sp);
    std::vector<RingElem> addgens{ring_one(rs)};
    if (rs.has_y()) addgens.push_back(ring_from_parts(rs, 0, 1));
    // transvections on plane vectors
    RingElem tau_a = sp.eps < 0 ? ring_one(rs) : ring_from_parts(rs, 0, 1);
    for (auto& [u, v] : hd.planes) {
        add(transvection(sp, tau_a, u));
        add(transvection(sp, tau_a, v));
        if (sp.eps < 0) add(transvection(sp, tau_a, vec_add(sp, u, v)));
    }
    // Eichler elements across distinct planes
    for (size_t s = 0; s < hd.planes.size(); ++s)
        for (size_t t = s + 1; t < hd.planes.size(); ++t) {
            const Vec& us = hd.planes[s].first;
            const Vec& ws = hd.planes[s].second;
            const Vec& ut = hd.planes[t].first;
            const Vec& wt = hd.planes[t].second;
            for (const auto& a : addgens) {
                add(eichler(sp, a, us, ut));
                add(eichler(sp, a, us, wt));
                add(eichler(sp, a, ws, ut));
                add(eichler(sp, a, ws, wt));
            }
        }
    // plane torus over generators of the unit group, Weyl flip, plane swaps
    std::vector<RingElem> unit_gens;
    {
        auto units = enumerate_units(rs);
        std::unordered_map<long long, long long> uidx;
        for (size_t i = 0; i < units.size(); ++i) uidx[elem_key(rs, units[i])] = (long long)i;
        auto mul = [&](long long i, long long j) {
            return uidx.at(elem_key(rs, ring_mul(rs, units[i], units[j])));
        };
        auto stu = abelian_structure((long long)units.size(), mul, uidx.at(1));
        for (int gi : stu.gen_index) unit_gens.push_back(units[gi]);
    }
    for (auto& [u, v] : hd.planes) {
        for (const auto& z : unit_gens) add(plane_torus(sp, u, v, z));
        // Weyl flip u -> v, v -> eps u
        UElem wfl;
        wfl.m = sp.m;
        wfl.a.assign(size_t(sp.m) * sp.m, ring_zero(rs));
        RingElem eps = sp.eps < 0 ? ring_neg(rs, ring_one(rs)) : ring_one(rs);
        for (int j = 0; j < sp.m; ++j) {
            Vec x = vec_unit(sp, j);
            RingElem alpha = ring_mul(rs, eps, h_eval(sp, v, x)); // u-component
            RingElem beta = h_eval(sp, u, x);                     // v-component
            Vec img = x;
            img = vec_sub(sp, img, vec_scal(sp, alpha, u));
            img = vec_sub(sp, img, vec_scal(sp, beta, v));
            img = vec_add(sp, img, vec_scal(sp, alpha, v));
            img = vec_add(sp, img, vec_scal(sp, ring_mul(rs, eps, beta), u));
            for (int i = 0; i < sp.m; ++i) wfl.at(i, j) = img.c[i];
        }
        add(wfl);
    }
    for (size_t s = 0; s + 1 < hd.planes.size(); ++s) {
        // swap plane s with plane s+1
        std::vector<Vec> basis;
        for (auto& [u, v] : hd.planes) {
            basis.push_back(u);
            basis.push_back(v);
        }
        for (const auto& o : hd.ortho) basis.push_back(o);
        UElem perm = u_identity(sp);
        int a0 = (int)(2 * s), b0 = (int)(2 * (s + 1));
        for (int t = 0; t < 2; ++t) {
            perm.at(a0 + t, a0 + t) = ring_zero(rs);
            perm.at(b0 + t, b0 + t) = ring_zero(rs);
            perm.at(a0 + t, b0 + t) = ring_one(rs);
            perm.at(b0 + t, a0 + t) = ring_one(rs);
        }
        add(conjugate_to_basis(sp, basis, perm));
    }
    // scalars from N
    for (const auto& z : norm_one_group(rs)) add(u_scalar(sp, z));
    // plane-slot mixers
    for (auto& [u, v] : hd.planes)
        for (const auto& w : hd.ortho)
            for (const auto& a : addgens) {
                add(plane_slot_mixer(sp, u, v, w, a));
                add(plane_slot_mixer(sp, v, u, w, a)); // other isotropic corner
            }
    // orthogonal slots: local scalars from N and pairwise 2x2 subgroups
    if (!hd.ortho.empty()) {
        std::vector<Vec> basis;
        for (auto& [u, v] : hd.planes) {
            basis.push_back(u);
            basis.push_back(v);
        }
        int off = (int)(2 * hd.planes.size());
        for (const auto& o : hd.ortho) basis.push_back(o);
        for (size_t s = 0; s < hd.ortho.size(); ++s)
            for (const auto& z : norm_one_group(rs)) {
                UElem dg = u_identity(sp);
                dg.at(off + (int)s, off + (int)s) = z;
                add(conjugate_to_basis(sp, basis, dg));
            }
        for (size_t s = 0; s < hd.ortho.size(); ++s)
            for (size_t t = s + 1; t < hd.ortho.size(); ++t) {
                // full 2x2 unitary subgroup on the anisotropic pair
                HermSpace sub;
                sub.ring = rs;
                sub.m = 2;
                sub.kind = sp.kind;
                sub.eps = sp.eps;
                sub.gram = {{hd.ortho_vals[s], ring_zero(rs)}, {ring_zero(rs), hd.ortho_vals[t]}};
                GroupStore sg = enumerate_group(sub, subgroup_budget);
                for (const auto& el : sg.elems) {
                    UElem dg = u_identity(sp);
                    for (int i2 = 0; i2 < 2; ++i2)
                        for (int j2 = 0; j2 < 2; ++j2) {
                            int ii = off + (int)(i2 == 0 ? s : t);
                            int jj = off + (int)(j2 == 0 ? s : t);
                            dg.at(ii, jj) = el.at(i2, j2);
                        }
                    add(conjugate_to_basis(sp, basis, dg));
                }
            }
    }
    // dedupe
    std::unordered_map<std::string, int> seen;
    std::vector<UElem> out;
    for (const auto& g : pool) {
        std::string k = u_key(sp, g);
        if (seen.count(k)) continue;
        seen[k] = 1;
        out.push_back(g);
    }
    return out;
}

CycNum alpha_char(const HermSpace& sp, const Vec& t, const UElem& g, int i, int conductor) {
    const RingSpec& rs = sp.ring;
    if (2 * i < rs.e) throw std::invalid_argument("alpha_char: ideal square must vanish");
    if (!in_congruence(sp, g, i)) throw std::invalid_argument("alpha_char: element not in Omega(i)");
    Vec gt = u_apply(sp, g, t);
    return mu_char(rs, h_eval(sp, gt, t), conductor);
}

std::vector<int> stabilizer_indices(const HermSpace& sp, const GroupStore& st, const Vec& t, int j) {
    std::vector<int> out;
    for (size_t i = 0; i < st.elems.size(); ++i) {
        Vec d = vec_sub(sp, u_apply(sp, st.elems[i], t), t);
        if (vec_in_ideal_layer(sp, d, j)) out.push_back((int)i);
    }
    return out;
}

namespace {
std::vector<long long> quotient_coords(const HermSpace& sp, const Vec& v, int i,
                                       const std::vector<long long>& shape) {
    const RingSpec& rs = sp.ring;
    long long xdj = shape[0], ydj = shape[1], xdi = shape[2], ydi = shape[3];
    std::vector<long long> out;
    for (int slot = 0; slot < sp.m; ++slot) {
        if (xdi / xdj > 1) {
            if (v.c[slot].x % xdj != 0)
                throw std::invalid_argument("quotient_coords: vector not in jV");
            out.push_back((v.c[slot].x / xdj) % (xdi / xdj));
        } else if (v.c[slot].x % xdj != 0) {
            throw std::invalid_argument("quotient_coords: vector not in jV");
        }
        if (rs.has_y()) {
            if (ydi / ydj > 1) {
                if (v.c[slot].y % ydj != 0)
                    throw std::invalid_argument("quotient_coords: vector not in jV");
                out.push_back((v.c[slot].y / ydj) % (ydi / ydj));
            } else if (v.c[slot].y % ydj != 0) {
                throw std::invalid_argument("quotient_coords: vector not in jV");
            }
        }
    }
    return out;
}
} // namespace

GammaResult gamma_image(const HermSpace& sp, const std::vector<UElem>& omega_j,
                        const Vec& t, int i, long long hom_pair_budget) {
    const RingSpec& rs = sp.ring;
    std::vector<long long> shape;
    FinSympGroup q = fin_symp_quotient(sp, i, nullptr, &shape);
    std::vector<std::vector<long long>> imgs;
    for (const auto& g : omega_j) {
        Vec d = vec_sub(sp, u_apply(sp, g, t), t);
        imgs.push_back(quotient_coords(sp, d, i, shape));
    }
    GammaResult res;
    res.image = subgroup_from_generators(q.mods, imgs);
    res.index = res.image.index();
    // homomorphism check on pairs
    res.homomorphism = true;
    long long pairs = 0;
    for (size_t a = 0; a < omega_j.size() && pairs < hom_pair_budget; ++a)
        for (size_t b = 0; b < omega_j.size() && pairs < hom_pair_budget; ++b) {
            ++pairs;
            Vec dab = vec_sub(sp, u_apply(sp, u_mul(sp, omega_j[a], omega_j[b]), t), t);
            auto ca = imgs[a];
            auto cb = imgs[b];
            auto cab = quotient_coords(sp, dab, i, shape);
            for (size_t k = 0; k < ca.size(); ++k)
                if ((ca[k] + cb[k]) % q.mods[k] != cab[k]) res.homomorphism = false;
        }
    res.pairs_checked = pairs;
    return res;
}

long long affine_span_index(const HermSpace& sp, const std::vector<UElem>& gens,
                            const Vec& t, bool use_invariant_closure) {
    std::vector<long long> mods = sp.coord_mods();
    std::vector<std::vector<long long>> diffs;
    std::vector<UElem> action = gens;
    if (use_invariant_closure)
        for (const auto& g : gens) action.push_back(u_inv(sp, g));
    for (const auto& g : action) {
        Vec d = vec_sub(sp, u_apply(sp, g, t), t);
        diffs.push_back(sp.to_coords(d));
    }
    SubgroupHNF E = subgroup_from_generators(mods, diffs);
    if (use_invariant_closure) {
        while (true) {
            std::vector<std::vector<long long>> more = diffs;
            for (const auto& col : E.basis) more.push_back(col);
            for (const auto& g : action)
                for (const auto& col : E.basis)
                    more.push_back(sp.to_coords(u_apply(sp, g, sp.from_coords(col))));
            SubgroupHNF E2 = subgroup_from_generators(mods, more);
            if (E2 == E) break;
            E = E2;
        }
    }
    return E.index();
}

// --- cache ---

namespace {
unsigned long long fnv64(const std::string& s) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}
constexpr uint32_t kCacheVersion = 1;
constexpr char kMagic[9] = "WEILGRP1";
} // namespace

std::string store_cache_key(const HermSpace& sp, long long budget) {
    std::string s = ring_case_name(sp.ring.rcase) + "|p" + std::to_string(sp.ring.p) + "|l" +
                    std::to_string(sp.ring.level) + "|u" + std::to_string(sp.ring.u) + "|m" +
                    std::to_string(sp.m) + "|" + form_kind_name(sp.kind) + "|b" +
                    std::to_string(budget) + "|weilver-1";
    return s;
}

bool store_write(const std::string& dir, const std::string& key, const HermSpace& sp,
                 const GroupStore& st) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    unsigned long long kh = fnv64(key);
    std::string path = dir + "/grp_" + std::to_string(kh) + ".bin";
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) return false;
    f.write(kMagic, 8);
    uint32_t ver = kCacheVersion;
    f.write(reinterpret_cast<const char*>(&ver), 4);
    f.write(reinterpret_cast<const char*>(&kh), 8);
    uint32_t m = (uint32_t)sp.m, layer = (uint32_t)st.layer;
    uint64_t count = (uint64_t)st.elems.size();
    f.write(reinterpret_cast<const char*>(&m), 4);
    f.write(reinterpret_cast<const char*>(&layer), 4);
    f.write(reinterpret_cast<const char*>(&count), 8);
    std::string payload;
    payload.reserve(st.elems.size() * sp.m * sp.m * 16);
    for (const auto& g : st.elems)
        for (const auto& e : g.a) {
            int64_t x = e.x, y = e.y;
            payload.append(reinterpret_cast<const char*>(&x), 8);
            payload.append(reinterpret_cast<const char*>(&y), 8);
        }
    f.write(payload.data(), (std::streamsize)payload.size());
    uint64_t sum = fnv64(payload);
    f.write(reinterpret_cast<const char*>(&sum), 8);
    return (bool)f;
}

bool store_read(const std::string& dir, const std::string& key, const HermSpace& sp,
                GroupStore& st) {
    unsigned long long kh = fnv64(key);
    std::string path = dir + "/grp_" + std::to_string(kh) + ".bin";
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kMagic, 8) != 0) return false;
    uint32_t ver = 0;
    uint64_t fkh = 0;
    f.read(reinterpret_cast<char*>(&ver), 4);
    f.read(reinterpret_cast<char*>(&fkh), 8);
    if (!f || ver != kCacheVersion || fkh != kh) return false;
    uint32_t m = 0, layer = 0;
    uint64_t count = 0;
    f.read(reinterpret_cast<char*>(&m), 4);
    f.read(reinterpret_cast<char*>(&layer), 4);
    f.read(reinterpret_cast<char*>(&count), 8);
    if (!f || (int)m != sp.m) return false;
    std::string payload(size_t(count) * sp.m * sp.m * 16, '\0');
    f.read(payload.data(), (std::streamsize)payload.size());
    uint64_t sum = 0;
    f.read(reinterpret_cast<char*>(&sum), 8);
    if (!f || sum != fnv64(payload)) return false;
    GroupStore out;
    out.layer = (int)layer;
    const char* p = payload.data();
    for (uint64_t n = 0; n < count; ++n) {
        UElem g;
        g.m = sp.m;
        g.a.resize(size_t(sp.m) * sp.m);
        for (auto& e : g.a) {
            int64_t x, y;
            std::memcpy(&x, p, 8);
            std::memcpy(&y, p + 8, 8);
            p += 16;
            e.x = x;
            e.y = y;
        }
        if (!is_unitary(sp, g)) return false;
        out.index[u_key(sp, g)] = (int)out.elems.size();
        out.elems.push_back(std::move(g));
    }
    st = std::move(out);
    return true;
}

} // namespace weil
