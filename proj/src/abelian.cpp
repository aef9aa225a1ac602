#include "weil/abelian.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace weil {

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

namespace {

using Col = std::vector<long long>;

// Column-style Hermite reduction of the lattice spanned by cols inside Z^K.
// Rows are processed top to bottom; the output is a K x K upper-triangular
// basis with reduced off-diagonal entries. row_mods[r] > 0 marks rows whose
// modulus column lies in the lattice, so entries there may be reduced to
// keep the arithmetic bounded.
std::vector<Col> hermite(std::vector<Col> cols, int K, const std::vector<long long>& row_mods) {
    std::vector<Col> basis;
    // entries strictly below the working row may be reduced; the working row
    // itself must stay intact so the modulus can join the gcd
    auto reduce_col = [&](Col& c, int below_row) {
        for (int r = below_row + 1; r < K; ++r)
            if (r < (int)row_mods.size() && row_mods[r] > 0)
                c[r] = ((c[r] % row_mods[r]) + row_mods[r]) % row_mods[r];
    };
    for (int row = 0; row < K; ++row) {
        if (row < (int)row_mods.size() && row_mods[row] > 0) {
            // the modulus column takes part in the gcd at this row
            Col mc(K, 0);
            mc[row] = row_mods[row];
            cols.push_back(std::move(mc));
        }
        for (auto& c : cols) reduce_col(c, row);
        // gcd-combine all columns with support at this row
        int keep = -1;
        for (size_t c = 0; c < cols.size(); ++c) {
            if (cols[c][row] == 0) continue;
            if (keep < 0) { keep = (int)c; continue; }
            // combine cols[keep], cols[c] so the second gets 0 at this row
            long long a = cols[keep][row], b = cols[c][row];
            long long old_a = a, old_b = b;
            long long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
            while (b != 0) {
                long long qq = a / b;
                long long t;
                t = a - qq * b; a = b; b = t;
                t = x0 - qq * x1; x0 = x1; x1 = t;
                t = y0 - qq * y1; y0 = y1; y1 = t;
            }
            long long g = a;
            long long ka = old_a / g, kb = old_b / g;
            for (int r = 0; r < K; ++r) {
                long long va = cols[keep][r], vb = cols[c][r];
                __int128 nk = (__int128)x0 * va + (__int128)y0 * vb;
                __int128 nc = (__int128)(-kb) * va + (__int128)ka * vb;
                if (nk > INT64_MAX / 2 || nk < INT64_MIN / 2 || nc > INT64_MAX / 2 || nc < INT64_MIN / 2)
                    throw std::overflow_error("hermite: entry overflow");
                cols[keep][r] = (long long)nk;
                cols[c][r] = (long long)nc;
            }
            reduce_col(cols[keep], row);
            reduce_col(cols[c], row);
        }
        if (keep < 0)
            throw std::logic_error("hermite: row without pivot (moduli columns missing?)");
        if (cols[keep][row] < 0)
            for (auto& v : cols[keep]) v = -v;
        basis.push_back(cols[keep]);
        cols.erase(cols.begin() + keep);
    }
    // reduce entries above each pivot
    for (int j = 0; j < K; ++j) {
        if (basis[j][j] == 0) continue;
        for (int i = j + 1; i < K; ++i) {
            if (basis[i][i] == 0) continue;
            long long q = basis[j][i] >= 0 ? basis[j][i] / basis[i][i]
                                           : -((-basis[j][i] + basis[i][i] - 1) / basis[i][i]);
            if (q)
                for (int r = 0; r < K; ++r) basis[j][r] -= q * basis[i][r];
        }
    }
    return basis;
}

} // namespace

long long SubgroupHNF::group_order() const {
    long long n = 1;
    for (long long m : mods) n *= m;
    return n;
}

long long SubgroupHNF::index() const {
    long long n = 1;
    for (size_t i = 0; i < basis.size(); ++i) n *= basis[i][i];
    return n;
}

long long SubgroupHNF::subgroup_order() const { return group_order() / index(); }

bool SubgroupHNF::contains(std::vector<long long> v) const {
    int K = (int)mods.size();
    for (int i = 0; i < K; ++i) v[i] = ((v[i] % mods[i]) + mods[i]) % mods[i];
    for (int i = 0; i < K; ++i) {
        if (v[i] == 0) continue;
        long long piv = basis[i][i];
        if (piv == 0 || v[i] % piv != 0) return false;
        long long c = v[i] / piv;
        for (int r = 0; r < K; ++r) v[r] -= c * basis[i][r];
    }
    return true;
}

SubgroupHNF subgroup_from_generators(const std::vector<long long>& mods,
                                     const std::vector<std::vector<long long>>& gens) {
    int K = (int)mods.size();
    std::vector<Col> cols;
    for (const auto& g : gens) {
        Col c(K);
        for (int i = 0; i < K; ++i) c[i] = ((g[i] % mods[i]) + mods[i]) % mods[i];
        cols.push_back(std::move(c));
    }
    for (int i = 0; i < K; ++i) {
        Col c(K, 0);
        c[i] = mods[i];
        cols.push_back(std::move(c));
    }
    SubgroupHNF h;
    h.mods = mods;
    h.basis = hermite(std::move(cols), K, mods);
    return h;
}

SubgroupHNF pairing_kernel(const std::vector<long long>& mods,
                           const std::vector<long long>& eqmods,
                           const std::vector<std::vector<long long>>& B) {
    int K = (int)mods.size(), R = (int)eqmods.size();
    // Lattice in Z^{R+K}: rows 0..R-1 carry the equation values, rows R.. the
    // argument vector. Columns: (B e_k, e_k) per coordinate and (eqmods_r e_r, 0).
    int N = R + K;
    std::vector<Col> cols;
    for (int k = 0; k < K; ++k) {
        Col c(N, 0);
        for (int r = 0; r < R; ++r) c[r] = ((B[r][k] % eqmods[r]) + eqmods[r]) % eqmods[r];
        c[R + k] = 1;
        cols.push_back(std::move(c));
    }
    for (int r = 0; r < R; ++r) {
        Col c(N, 0);
        c[r] = eqmods[r];
        cols.push_back(std::move(c));
    }
    // only the equation rows carry modulus columns of their own
    std::vector<long long> row_mods(N, 0);
    for (int r = 0; r < R; ++r) row_mods[r] = eqmods[r];
    std::vector<Col> tri = hermite(std::move(cols), N, row_mods);
    // Columns with pivot at row >= R project to kernel generators.
    std::vector<std::vector<long long>> gens;
    for (int j = R; j < N; ++j) {
        if (tri[j][j] == 0) continue;
        std::vector<long long> g(K);
        for (int k = 0; k < K; ++k) g[k] = tri[j][R + k];
        gens.push_back(std::move(g));
    }
    return subgroup_from_generators(mods, gens);
}

namespace {

// Smith normal form of a square integer matrix with tracked row transform.
// Returns diag entries d and matrix U with U * A * V = diag(d); only U is
// tracked (V is not needed by callers).
void smith_with_row_transform(std::vector<std::vector<long long>> A,
                              std::vector<long long>& d,
                              std::vector<std::vector<long long>>& U) {
    int n = (int)A.size();
    U.assign(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) U[i][i] = 1;
    auto row_op = [&](int i, int j, long long c) { // row_i -= c * row_j
        for (int k = 0; k < n; ++k) { A[i][k] -= c * A[j][k]; U[i][k] -= c * U[j][k]; }
    };
    auto col_op = [&](int i, int j, long long c) { // col_i -= c * col_j
        for (int k = 0; k < n; ++k) A[k][i] -= c * A[k][j];
    };
    for (int t = 0; t < n; ++t) {
        while (true) {
            int pi = -1, pj = -1;
            long long best = 0;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j)
                    if (A[i][j] != 0 && (best == 0 || std::llabs(A[i][j]) < best)) {
                        best = std::llabs(A[i][j]);
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) break;
            std::swap(A[t], A[pi]);
            std::swap(U[t], U[pi]);
            for (int k = 0; k < n; ++k) std::swap(A[k][t], A[k][pj]);
            bool clean = true;
            for (int i = t + 1; i < n; ++i)
                if (A[i][t] != 0) { row_op(i, t, A[i][t] / A[t][t]); clean &= A[i][t] == 0; }
            for (int j = t + 1; j < n; ++j)
                if (A[t][j] != 0) { col_op(j, t, A[t][j] / A[t][t]); clean &= A[t][j] == 0; }
            if (clean) break;
        }
        if (A[t][t] < 0) {
            for (int k = 0; k < n; ++k) { A[t][k] = -A[t][k]; U[t][k] = -U[t][k]; }
        }
    }
    // No divisibility-chain pass: any diagonal decomposition into independent
    // cyclic factors is enough for the character machinery downstream.
    d.resize(n);
    for (int i = 0; i < n; ++i) d[i] = A[i][i];
}

} // namespace

AbelianStructure abelian_structure(
    long long n,
    const std::function<long long(long long, long long)>& mul,
    long long identity_index) {
    AbelianStructure st;
    if (n <= 0) throw std::invalid_argument("abelian_structure: empty group");
    // greedy generators with incremental closure
    std::unordered_map<long long, std::vector<long long>> expo; // elem -> word in gens
    expo[identity_index] = {};
    std::vector<long long> gens;
    std::vector<long long> gen_orders; // order of g_i modulo previous closure is not enough;
                                       // we use full orders for the tuple sweep
    for (long long x = 0; x < n; ++x) {
        if (expo.count(x)) continue;
        gens.push_back(x);
        for (auto& kv : expo) kv.second.push_back(0);
        // extend closure by powers of x
        std::vector<std::pair<long long, std::vector<long long>>> base(expo.begin(), expo.end());
        long long p = x;
        long long k = 1;
        while (p != identity_index) {
            for (auto& [e, w] : base) {
                long long ne = mul(e, p);
                if (!expo.count(ne)) {
                    auto nw = w;
                    nw.back() = k;
                    expo[ne] = nw;
                }
            }
            p = mul(p, x);
            ++k;
        }
    }
    int K = (int)gens.size();
    if (K == 0) {
        st.gen_index = {};
        st.orders = {};
        st.dlog.assign(1, {});
        st.exponent = 1;
        return st;
    }
    for (long long g : gens) {
        long long o = 1, p = g;
        while (p != identity_index) { p = mul(p, g); ++o; }
        gen_orders.push_back(o);
    }
    if ((long long)expo.size() != n)
        throw std::logic_error("abelian_structure: generators failed to span (group not closed?)");
    // relation lattice: order relations + collision relations from the words
    std::vector<std::vector<long long>> rel_gens;
    for (int i = 0; i < K; ++i) {
        std::vector<long long> r(K, 0);
        r[i] = gen_orders[i];
        rel_gens.push_back(r);
    }
    // words were built greedily; verify them and harvest extra relations by
    // recomputing each element from its word
    std::vector<long long> gpow_cache;
    auto word_to_elem = [&](const std::vector<long long>& w) {
        long long e = identity_index;
        for (int i = 0; i < K; ++i)
            for (long long t = 0; t < w[i]; ++t) e = mul(e, gens[i]);
        return e;
    };
    for (auto& [e, w] : expo) {
        std::vector<long long> wfull = w;
        wfull.resize(K, 0);
        if (word_to_elem(wfull) != e) throw std::logic_error("abelian_structure: word mismatch");
    }
    // Collision relations: product over a tuple sweep would be expensive;
    // instead use pairwise sums of known words, which generate the kernel
    // together with the order relations because expo covers the whole group.
    {
        std::unordered_map<long long, std::vector<long long>> seen;
        for (auto& [e, w] : expo) {
            std::vector<long long> wf = w;
            wf.resize(K, 0);
            seen[e] = wf;
        }
        for (auto& [e1, w1] : seen)
            for (int i = 0; i < K; ++i) {
                long long e2 = mul(e1, gens[i]);
                auto w2 = w1;
                w2[i] += 1;
                const auto& canon = seen.at(e2);
                std::vector<long long> rel(K);
                bool nonzero = false;
                for (int k = 0; k < K; ++k) {
                    rel[k] = w2[k] - canon[k];
                    nonzero |= rel[k] != 0;
                }
                if (nonzero) rel_gens.push_back(rel);
            }
    }
    // SNF of the relation lattice basis
    SubgroupHNF lat;
    {
        std::vector<long long> bigmods(K);
        for (int i = 0; i < K; ++i) bigmods[i] = gen_orders[i];
        lat = subgroup_from_generators(bigmods, rel_gens);
    }
    std::vector<std::vector<long long>> L(K, std::vector<long long>(K));
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i) L[i][j] = lat.basis[j][i];
    std::vector<long long> dd;
    std::vector<std::vector<long long>> U;
    smith_with_row_transform(L, dd, U);
    // group = Z^K / Lambda with iso y = U x mod d
    std::vector<int> keep;
    for (int i = 0; i < K; ++i)
        if (dd[i] > 1) keep.push_back(i);
    st.orders.clear();
    for (int i : keep) st.orders.push_back(dd[i]);
    st.exponent = 1;
    for (long long d : st.orders) st.exponent = lcm_ll(st.exponent, d);
    st.dlog.assign(n, {});
    for (auto& [e, w] : expo) {
        std::vector<long long> wf = w;
        wf.resize(K, 0);
        std::vector<long long> y(keep.size());
        for (size_t a = 0; a < keep.size(); ++a) {
            long long acc = 0;
            for (int k = 0; k < K; ++k) acc += U[keep[a]][k] * wf[k];
            long long d = dd[keep[a]];
            y[a] = ((acc % d) + d) % d;
        }
        st.dlog[e] = std::move(y);
    }
    // representative generators: elements whose dlog is a unit vector
    st.gen_index.assign(keep.size(), -1);
    for (long long e = 0; e < n; ++e) {
        const auto& y = st.dlog[e];
        int pos = -1;
        bool unitvec = true;
        for (size_t a = 0; a < y.size(); ++a) {
            if (y[a] == 0) continue;
            if (y[a] == 1 && pos < 0) pos = (int)a;
            else { unitvec = false; break; }
        }
        if (unitvec && pos >= 0 && st.gen_index[pos] < 0) st.gen_index[pos] = (int)e;
    }
    for (size_t a = 0; a < st.gen_index.size(); ++a)
        if (st.gen_index[a] < 0) throw std::logic_error("abelian_structure: missing canonical generator");
    // sanity: dlog is a bijection onto the tuple space
    long long prod = 1;
    for (long long d : st.orders) prod *= d;
    if (prod != n) throw std::logic_error("abelian_structure: order mismatch");
    return st;
}

long long AbelianStructure::num_characters() const {
    long long n = 1;
    for (long long d : orders) n *= d;
    return n;
}

CharacterTable character_table(const AbelianStructure& st, int conductor) {
    if (conductor % st.exponent != 0)
        throw std::invalid_argument("character_table: conductor not divisible by exponent");
    CharacterTable t;
    t.st = &st;
    t.conductor = conductor;
    std::vector<long long> cur(st.orders.size(), 0);
    long long n = st.num_characters();
    for (long long i = 0; i < n; ++i) {
        t.labels.push_back(cur);
        for (size_t j = 0; j < cur.size(); ++j) {
            if (++cur[j] < st.orders[j]) break;
            cur[j] = 0;
        }
    }
    return t;
}

CycNum CharacterTable::value(size_t char_idx, long long elem_idx) const {
    const auto& c = labels[char_idx];
    const auto& y = st->dlog[elem_idx];
    long long expo = 0;
    for (size_t j = 0; j < c.size(); ++j)
        expo = (expo + c[j] * y[j] % conductor * (conductor / st->orders[j])) % conductor;
    return CycNum::root_of_unity(conductor, expo);
}

} // namespace weil
