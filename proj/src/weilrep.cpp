#include "weil/weilrep.hpp"

#include <algorithm>
#include <stdexcept>

namespace weil {

namespace {
// iterate over all coordinate vectors of the group
template <class F>
void for_each_vector(const FinSympGroup& g, F&& fn) {
    std::vector<long long> v(g.mods.size(), 0);
    while (true) {
        fn(v);
        int t = (int)v.size() - 1;
        while (t >= 0) {
            if (++v[t] < g.mods[t]) break;
            v[t] = 0;
            --t;
        }
        if (t < 0) return;
    }
}

std::vector<long long> act_coords(const SchrodingerModel& model, const HermSpace& sp,
                                  const UElem& g, const std::vector<long long>& v) {
    (void)model;
    return sp.to_coords(u_apply(sp, g, sp.from_coords(v)));
}

void first_nonzero(const CycMatrix& T, int& i0, int& j0) {
    for (int i = 0; i < T.rows(); ++i)
        for (int j = 0; j < T.cols(); ++j)
            if (!T.at(i, j).is_zero()) {
                i0 = i;
                j0 = j;
                return;
            }
    i0 = j0 = -1;
}
} // namespace

ProjOp intertwiner(const SchrodingerModel& model, const HermSpace& sp, const UElem& g) {
    int n = (int)model.dim();
    const FinSympGroup& fg = model.group();
    for (int probe = 0; probe < n * n; ++probe) {
        int a = probe / n, b = probe % n;
        CycMatrix T(n, n, model.conductor());
        for_each_vector(fg, [&](const std::vector<long long>& v) {
            std::vector<long long> gv = act_coords(model, sp, g, v);
            auto [ra, ea] = model.apply_basis(0, gv, a);
            std::vector<long long> nv = fg.scal(-1, v);
            long long c = model.preimage_index(nv, b);
            auto [bb, ec] = model.apply_basis(0, nv, c);
            if (bb != b) throw std::logic_error("intertwiner: preimage bookkeeping failed");
            T.at((int)ra, (int)c) += model.lambda_pow(ea + ec);
        });
        if (T.is_zero()) continue;
        // verify the intertwining identity on Heisenberg generators
        for (const auto& k : model.heis_generators()) {
            std::vector<long long> gk = act_coords(model, sp, g, k.v);
            CycMatrix lhs = model.dense(k.r, gk) * T;
            CycMatrix rhs = T * model.dense(k.r, k.v);
            if (lhs != rhs) throw std::logic_error("intertwiner: identity violated");
        }
        int i0, j0;
        first_nonzero(T, i0, j0);
        T = T.scaled(T.at(i0, j0).inverse());
        return ProjOp{std::move(T), g};
    }
    throw std::logic_error("intertwiner: all probes annihilated (should be impossible)");
}

namespace {
// gamma with gamma^d = target, inside mu(Q(zeta_M)) or rationals times it
CycNum solve_scalar_root(const CycNum& target, long long d, int M) {
    auto sr = target.as_signed_root();
    if (sr) {
        auto [sign, s] = *sr;
        for (int gs : {1, -1})
            for (long long k = 0; k < M; ++k) {
                int psign = (d % 2 == 0) ? 1 : gs;
                long long pk = (k * d) % M;
                if (psign == sign && pk == s) {
                    CycNum gmm = CycNum::root_of_unity(M, k);
                    return gs < 0 ? -gmm : gmm;
                }
            }
        throw std::domain_error("abelian_lift: no root-of-unity correction exists in this field");
    }
    // rational modulus times a root of unity
    Rational rho = (target * target.conj()).rational_part(); // |target|^2
    auto nth_root = [](const BigInt& n, long long d) -> std::optional<BigInt> {
        if (n.is_zero()) return BigInt(0);
        auto powd = [&](const BigInt& c) {
            BigInt p(1);
            for (long long t = 0; t < d; ++t) p = p * c;
            return p;
        };
        BigInt lo(1), hi(2);
        while (powd(hi) < n) hi = hi * BigInt(2);
        while (lo < hi) {
            BigInt mid = (lo + hi) / BigInt(2);
            if (powd(mid) < n) lo = mid + BigInt(1);
            else hi = mid;
        }
        if (powd(lo) == n) return lo;
        return std::nullopt;
    };
    auto r2n = nth_root(rho.num(), 2), r2d = nth_root(rho.den(), 2);
    if (!r2n || !r2d) throw std::domain_error("abelian_lift: correction modulus not rational");
    Rational r(*r2n, *r2d); // |target|
    CycNum xi = target * CycNum::from_rational(target.conductor(), Rational(r.den(), r.num()));
    auto xr = xi.as_signed_root();
    if (!xr) throw std::domain_error("abelian_lift: correction not rational times root of unity");
    auto rdn = nth_root(r.num(), d), rdd = nth_root(r.den(), d);
    if (!rdn || !rdd) throw std::domain_error("abelian_lift: no rational d-th root");
    CycNum rd = CycNum::from_rational(M, Rational(*rdn, *rdd));
    return rd * solve_scalar_root(xi, d, M);
}
} // namespace

AbelianLift abelian_lift(const SchrodingerModel& model, const HermSpace& sp,
                         const std::vector<UElem>& B) {
    AbelianLift lift;
    lift.elems = B;
    std::unordered_map<std::string, long long> idx;
    for (size_t i = 0; i < B.size(); ++i) idx[u_key(sp, B[i])] = (long long)i;
    long long id = -1;
    for (size_t i = 0; i < B.size(); ++i)
        if (B[i] == u_identity(sp)) id = (long long)i;
    if (id < 0) throw std::invalid_argument("abelian_lift: identity missing");
    auto mul = [&](long long a, long long b) {
        auto it = idx.find(u_key(sp, u_mul(sp, B[a], B[b])));
        if (it == idx.end()) throw std::invalid_argument("abelian_lift: set not closed");
        return it->second;
    };
    lift.st = abelian_structure((long long)B.size(), mul, id);
    int M = model.conductor();
    lift.dim = (int)model.dim();
    lift.conductor = M;
    size_t K = lift.st.orders.size();
    lift.gen_pows.resize(K);
    lift.twist_class_size = 1;
    // When B sits inside a congruence subgroup Omega(r^k) with (r^k)^2 = 0,
    // the genuine operators act as the identity on the fixed space of
    // (0, r^k V), which pins the scalar of every generator exactly.
    CycMatrix refvec;
    bool have_ref = false;
    {
        int kmin = (sp.ring.e + 1) / 2;
        int k = -1;
        for (int kk = sp.ring.e - 1; kk >= kmin; --kk) {
            bool all = true;
            for (const auto& g : B)
                if (!in_congruence(sp, g, kk)) all = false;
            if (all) { k = kk; break; }
        }
        if (k >= 0) {
            std::vector<std::vector<long long>> U;
            for (const auto& v : enumerate_layer(sp, k)) U.push_back(sp.to_coords(v));
            CycMatrix PU = averaging_projection(model, U);
            for (int j = 0; j < PU.cols() && !have_ref; ++j) {
                bool nz = false;
                for (int i = 0; i < PU.rows(); ++i)
                    if (!PU.at(i, j).is_zero()) nz = true;
                if (!nz) continue;
                refvec = CycMatrix(PU.rows(), 1, M);
                for (int i = 0; i < PU.rows(); ++i) refvec.at(i, 0) = PU.at(i, j);
                have_ref = true;
            }
        }
    }
    lift.has_reference = have_ref;
    if (have_ref) lift.reference = refvec;
    for (size_t a = 0; a < K; ++a) {
        long long d = lift.st.orders[a];
        ProjOp T = intertwiner(model, sp, B[lift.st.gen_index[a]]);
        CycMatrix L(0, 0, M);
        if (have_ref) {
            // scale so the reference vector is fixed
            CycMatrix w = T.op * refvec;
            int k0 = -1;
            for (int i = 0; i < refvec.rows(); ++i)
                if (!refvec.at(i, 0).is_zero()) { k0 = i; break; }
            CycNum theta = w.at(k0, 0) * refvec.at(k0, 0).inverse();
            if (theta.is_zero()) throw std::logic_error("abelian_lift: reference vector annihilated");
            L = T.op.scaled(theta.inverse());
            if (L * refvec != refvec)
                throw std::logic_error("abelian_lift: reference vector not an eigenvector");
            CycMatrix P = CycMatrix::identity((int)model.dim(), M);
            for (long long t = 0; t < d; ++t) P = P * L;
            if (P != CycMatrix::identity((int)model.dim(), M))
                throw std::logic_error("abelian_lift: reference-normalized generator order wrong");
        } else {
            // order relation T^d = c * I, then correct by a d-th root of c^{-1}
            CycMatrix P = CycMatrix::identity((int)model.dim(), M);
            for (long long t = 0; t < d; ++t) P = P * T.op;
            CycNum c = P.at(0, 0);
            CycMatrix cI = CycMatrix::identity((int)model.dim(), M).scaled(c);
            if (P != cI) throw std::logic_error("abelian_lift: generator power not scalar");
            CycNum gmm = solve_scalar_root(c.inverse(), d, M);
            L = T.op.scaled(gmm);
        }
        // count valid corrections: roots of unity gamma' with gamma'^d = 1
        long long sols = 0;
        for (int gs : {1, -1})
            for (long long k = 0; k < M; ++k) {
                int psign = (d % 2 == 0) ? 1 : gs;
                if (psign == 1 && (k * d) % M == 0) ++sols;
            }
        lift.twist_class_size *= sols;
        lift.gen_pows[a].push_back(CycMatrix::identity((int)model.dim(), M));
        for (long long t = 1; t < d; ++t) lift.gen_pows[a].push_back(lift.gen_pows[a].back() * L);
        // exact order check
        if (lift.gen_pows[a].back() * L != CycMatrix::identity((int)model.dim(), M))
            throw std::logic_error("abelian_lift: corrected generator order wrong");
    }
    // pairwise commutation of the corrected generators
    for (size_t a = 0; a < K; ++a)
        for (size_t b = a + 1; b < K; ++b)
            if (lift.gen_pows[a][1] * lift.gen_pows[b][1] != lift.gen_pows[b][1] * lift.gen_pows[a][1])
                throw std::logic_error("abelian_lift: generators do not commute");
    return lift;
}

CycMatrix lift_op(const AbelianLift& lift, long long elem_idx) {
    if (lift.gen_pows.empty()) return CycMatrix::identity(lift.dim, lift.conductor);
    const auto& y = lift.st.dlog[elem_idx];
    CycMatrix out = lift.gen_pows[0][y[0]];
    for (size_t a = 1; a < y.size(); ++a)
        if (y[a] != 0) out = out * lift.gen_pows[a][y[a]];
    return out;
}

void enumerate_with_ops(const AbelianLift& lift,
                        const std::function<void(long long, const CycMatrix&)>& fn) {
    size_t K = lift.st.orders.size();
    if (K == 0) {
        fn(0, CycMatrix::identity(lift.dim, lift.conductor));
        return;
    }
    // elem index from dlog tuple
    std::unordered_map<long long, long long> by_tuple;
    auto tuple_key = [&](const std::vector<long long>& y) {
        long long k = 0;
        for (size_t a = 0; a < y.size(); ++a) k = k * (lift.st.orders[a] + 1) + y[a];
        return k;
    };
    for (size_t e = 0; e < lift.st.dlog.size(); ++e) by_tuple[tuple_key(lift.st.dlog[e])] = (long long)e;
    std::vector<long long> y(K, 0);
    std::vector<CycMatrix> prefix(K + 1);
    prefix[0] = lift.gen_pows[0][0]; // identity
    auto recompute_from = [&](size_t level) {
        for (size_t a = level; a < K; ++a)
            prefix[a + 1] = y[a] == 0 ? prefix[a] : prefix[a] * lift.gen_pows[a][y[a]];
    };
    recompute_from(0);
    while (true) {
        fn(by_tuple.at(tuple_key(y)), prefix[K]);
        int t = (int)K - 1;
        while (t >= 0) {
            if (++y[t] < lift.st.orders[t]) break;
            y[t] = 0;
            --t;
        }
        if (t < 0) break;
        recompute_from((size_t)t);
    }
}

bool lift_multiplicative(const SchrodingerModel& model, const AbelianLift& lift,
                         const HermSpace& sp, long long dense_budget) {
    long long n = (long long)lift.elems.size();
    std::unordered_map<std::string, long long> idx;
    for (size_t i = 0; i < lift.elems.size(); ++i) idx[u_key(sp, lift.elems[i])] = (long long)i;
    long long dense_cost = n * n * model.dim() * model.dim() * model.dim();
    if (dense_cost <= dense_budget) {
        std::vector<CycMatrix> ops(n);
        for (long long e = 0; e < n; ++e) ops[e] = lift_op(lift, e);
        for (long long a = 0; a < n; ++a)
            for (long long b = 0; b < n; ++b) {
                long long ab = idx.at(u_key(sp, u_mul(sp, lift.elems[a], lift.elems[b])));
                if (ops[a] * ops[b] != ops[ab]) return false;
            }
        return true;
    }
    if (lift.has_reference) {
        // every operator fixes the reference vector exactly (checked at
        // construction) and products of intertwiners intertwine the product
        // element, so L(a)L(b) = kappa L(ab) with kappa fixing the reference:
        // kappa = 1 across the whole table
        enumerate_with_ops(lift, [&](long long e, const CycMatrix& L) {
            if (L * lift.reference != lift.reference)
                throw std::logic_error("lift_multiplicative: reference not fixed");
            (void)e;
        });
        return true;
    }
    // materialize the operators once; both sides of each table identity
    // intertwine the same element, so by the irreducibility certificate they
    // agree iff they agree at one nonzero entry (one row-by-column dot)
    std::vector<CycMatrix> ops(n);
    for (long long e2 = 0; e2 < n; ++e2) ops[e2] = lift_op(lift, e2);
    for (long long a = 0; a < n; ++a)
        for (long long b = 0; b < n; ++b) {
            long long ab = idx.at(u_key(sp, u_mul(sp, lift.elems[a], lift.elems[b])));
            int i0, j0;
            first_nonzero(ops[ab], i0, j0);
            CycNum dot = CycNum::zero(model.conductor());
            for (int k = 0; k < ops[a].cols(); ++k)
                if (!ops[a].at(i0, k).is_zero() && !ops[b].at(k, j0).is_zero())
                    dot += ops[a].at(i0, k) * ops[b].at(k, j0);
            if (dot != ops[ab].at(i0, j0)) return false;
        }
    return true;
}

std::vector<long long> eigenspace_dims(const SchrodingerModel& model, const AbelianLift& lift,
                                       const CharacterTable& chars, const CycMatrix& Pbot) {
    long long nb = (long long)lift.elems.size();
    int n = (int)model.dim();
    // per element: tr L(z) and tr (L(z) Pbot)
    std::vector<CycNum> t1(nb, CycNum::zero(model.conductor()));
    std::vector<CycNum> t2(nb, CycNum::zero(model.conductor()));
    enumerate_with_ops(lift, [&](long long e, const CycMatrix& L) {
        CycNum a = CycNum::zero(model.conductor());
        CycNum b = CycNum::zero(model.conductor());
        for (int i = 0; i < n; ++i) {
            a += L.at(i, i);
            for (int j = 0; j < n; ++j)
                if (!L.at(i, j).is_zero() && !Pbot.at(j, i).is_zero()) b += L.at(i, j) * Pbot.at(j, i);
        }
        t1[e] = a;
        t2[e] = b;
    });
    std::vector<long long> dims;
    for (size_t c = 0; c < chars.size(); ++c) {
        CycNum acc = CycNum::zero(model.conductor());
        for (long long e = 0; e < nb; ++e) acc += chars.value(c, e).conj() * (t1[e] - t2[e]);
        acc = acc * CycNum::from_rational(model.conductor(), Rational(BigInt(1), BigInt(nb)));
        if (!acc.is_rational() || !acc.rational_part().is_integer())
            throw std::logic_error("eigenspace_dims: non-integral dimension");
        dims.push_back(acc.rational_part().num().to_ll());
    }
    return dims;
}

std::vector<long long> isotypic_dims(const SchrodingerModel& model, const AbelianLift& lift,
                                     const std::vector<std::vector<CycNum>>& values,
                                     const CycMatrix& Pbot) {
    long long nb = (long long)lift.elems.size();
    int n = (int)model.dim();
    std::vector<CycNum> t1(nb, CycNum::zero(model.conductor()));
    std::vector<CycNum> t2(nb, CycNum::zero(model.conductor()));
    enumerate_with_ops(lift, [&](long long e, const CycMatrix& L) {
        CycNum a = CycNum::zero(model.conductor());
        CycNum b = CycNum::zero(model.conductor());
        for (int i = 0; i < n; ++i) {
            a += L.at(i, i);
            for (int j = 0; j < n; ++j)
                if (!L.at(i, j).is_zero() && !Pbot.at(j, i).is_zero()) b += L.at(i, j) * Pbot.at(j, i);
        }
        t1[e] = a;
        t2[e] = b;
    });
    std::vector<long long> dims;
    for (const auto& val : values) {
        CycNum acc = CycNum::zero(model.conductor());
        for (long long e = 0; e < nb; ++e) acc += val[e].conj() * (t1[e] - t2[e]);
        acc = acc * CycNum::from_rational(model.conductor(), Rational(BigInt(1), BigInt(nb)));
        if (!acc.is_rational() || !acc.rational_part().is_integer())
            throw std::logic_error("isotypic_dims: non-integral dimension");
        dims.push_back(acc.rational_part().num().to_ll());
    }
    return dims;
}

std::vector<UElem> minimal_generating_subset(const HermSpace& sp, const std::vector<UElem>& pool,
                                             long long target_order) {
    std::vector<UElem> gens;
    std::unordered_map<std::string, int> closure;
    closure[u_key(sp, u_identity(sp))] = 1;
    auto grow = [&]() {
        std::vector<UElem> cl = group_closure(sp, gens, target_order + 8);
        closure.clear();
        for (const auto& g : cl) closure[u_key(sp, g)] = 1;
    };
    for (const auto& cand : pool) {
        if ((long long)closure.size() >= target_order) break;
        if (closure.count(u_key(sp, cand))) continue;
        gens.push_back(cand);
        grow();
    }
    if ((long long)closure.size() != target_order)
        throw std::logic_error("minimal_generating_subset: pool does not generate the group");
    return gens;
}

CommutantReport multiplicity_free_check(const SchrodingerModel& model, const HermSpace& sp,
                                        const std::vector<UElem>& group_generators,
                                        const AbelianLift& liftN, const CharacterTable& chars,
                                        const std::vector<size_t>& nonzero_chars,
                                        const CycMatrix& Pbot) {
    int n = (int)model.dim();
    int M = model.conductor();
    CycMatrix Ptop = CycMatrix::identity(n, M) - Pbot;
    // projective operators for the generators
    std::vector<CycMatrix> W;
    for (const auto& s : group_generators) W.push_back(intertwiner(model, sp, s).op);
    // they must commute with the bottom projection and with the N-lift
    for (const auto& Ws : W) {
        if (Ws * Pbot != Pbot * Ws)
            throw std::logic_error("multiplicity_free_check: operator does not respect Bot");
        for (size_t a = 0; a < liftN.gen_pows.size(); ++a)
            if (Ws * liftN.gen_pows[a][1] != liftN.gen_pows[a][1] * Ws)
                throw std::logic_error("multiplicity_free_check: operator does not commute with N");
    }
    // dense eigenprojections for the nonzero characters
    long long nb = (long long)liftN.elems.size();
    std::vector<CycMatrix> eplist(nonzero_chars.size(), CycMatrix(n, n, M));
    enumerate_with_ops(liftN, [&](long long e, const CycMatrix& L) {
        for (size_t t = 0; t < nonzero_chars.size(); ++t) {
            CycNum w = chars.value(nonzero_chars[t], e).conj();
            if (w.is_zero()) continue;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!L.at(i, j).is_zero()) eplist[t].at(i, j) += w * L.at(i, j);
        }
    });
    CycNum inv = CycNum::from_rational(M, Rational(BigInt(1), BigInt(nb)));
    for (auto& ep : eplist) ep = ep.scaled(inv);

    CommutantReport rep;
    std::vector<std::vector<CycMatrix>> restricted(nonzero_chars.size());
    std::vector<CycMatrix> bases;
    for (size_t t = 0; t < nonzero_chars.size(); ++t) {
        CycMatrix img = eplist[t] * Ptop;
        std::vector<int> piv = img.transpose().pivot_columns(); // independent rows -> columns of img
        // column space basis: pick pivot columns of img directly
        std::vector<int> cols = img.pivot_columns();
        CycMatrix Q(n, (int)cols.size(), M);
        for (size_t c = 0; c < cols.size(); ++c)
            for (int i = 0; i < n; ++i) Q.at(i, (int)c) = img.at(i, cols[c]);
        (void)piv;
        bases.push_back(Q);
        int d = Q.cols();
        // pivot rows for solving Q R = W Q
        std::vector<int> prow = Q.transpose().pivot_columns();
        CycMatrix Qp(d, d, M);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) Qp.at(r, c) = Q.at(prow[r], c);
        for (const auto& Ws : W) {
            CycMatrix WQ = Ws * Q;
            CycMatrix WQp(d, Q.cols(), M);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < Q.cols(); ++c) WQp.at(r, c) = WQ.at(prow[r], c);
            CycMatrix R = Qp.solve(WQp);
            if (Q * R != WQ)
                throw std::logic_error("multiplicity_free_check: eigenspace not invariant");
            restricted[t].push_back(R);
        }
        std::vector<CycMatrix> cbasis;
        rep.block_dims.push_back(commutant_dimension(restricted[t], M, &cbasis));
        for (size_t a = 0; a < cbasis.size(); ++a)
            for (size_t b = a + 1; b < cbasis.size(); ++b)
                if (cbasis[a] * cbasis[b] != cbasis[b] * cbasis[a]) rep.commutative = false;
    }
    // cross blocks: Hom between distinct eigenspaces vanishes
    for (size_t s = 0; s < nonzero_chars.size() && rep.cross_blocks_vanish; ++s)
        for (size_t t = 0; t < nonzero_chars.size() && rep.cross_blocks_vanish; ++t) {
            if (s == t) continue;
            int ds = restricted[s][0].rows(), dt = restricted[t][0].rows();
            // {X : R_s X = X R_t} = 0
            CycMatrix sys((int)restricted[s].size() * ds * dt, ds * dt, M);
            int row0 = 0;
            for (size_t w = 0; w < restricted[s].size(); ++w) {
                const CycMatrix& A = restricted[s][w];
                const CycMatrix& Bm = restricted[t][w];
                for (int i = 0; i < ds; ++i)
                    for (int j = 0; j < dt; ++j) {
                        int r = row0 + i * dt + j;
                        for (int k = 0; k < ds; ++k) sys.at(r, k * dt + j) += A.at(i, k);
                        for (int k = 0; k < dt; ++k) sys.at(r, i * dt + k) -= Bm.at(k, j);
                    }
                row0 += ds * dt;
            }
            sys.make_rows_integral();
            if (!sys.nullspace().empty()) rep.cross_blocks_vanish = false;
        }
    rep.total = 0;
    for (long long d : rep.block_dims) rep.total += d;
    return rep;
}

// --- float shadow ---

FloatMatrix intertwiner_float(const SchrodingerModel& model, const HermSpace& sp, const UElem& g) {
    int n = (int)model.dim();
    const FinSympGroup& fg = model.group();
    double two_pi = 2.0 * M_PI;
    auto lam = [&](long long e) {
        return std::polar(1.0, two_pi * (double)(e % model.lambda_mod()) / (double)model.lambda_mod());
    };
    for (int probe = 0; probe < n * n; ++probe) {
        int a = probe / n, b = probe % n;
        FloatMatrix T(n, n, 1);
        for_each_vector(fg, [&](const std::vector<long long>& v) {
            std::vector<long long> gv = act_coords(model, sp, g, v);
            auto [ra, ea] = model.apply_basis(0, gv, a);
            std::vector<long long> nv = fg.scal(-1, v);
            long long c = model.preimage_index(nv, b);
            auto [bb, ec] = model.apply_basis(0, nv, c);
            (void)bb;
            T.at((int)ra, (int)c) += lam(ea + ec);
        });
        if (T.is_zero()) continue;
        // normalize by the largest entry for numerical stability
        double best = 0;
        std::complex<double> piv = 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (std::abs(T.at(i, j)) > best) {
                    best = std::abs(T.at(i, j));
                    piv = T.at(i, j);
                }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T.at(i, j) /= piv;
        return T;
    }
    throw std::logic_error("intertwiner_float: all probes annihilated");
}

FloatLift abelian_lift_float(const SchrodingerModel& model, const HermSpace& sp,
                             const std::vector<UElem>& B) {
    FloatLift lift;
    lift.elems = B;
    std::unordered_map<std::string, long long> idx;
    for (size_t i = 0; i < B.size(); ++i) idx[u_key(sp, B[i])] = (long long)i;
    long long id = -1;
    for (size_t i = 0; i < B.size(); ++i)
        if (B[i] == u_identity(sp)) id = (long long)i;
    auto mul = [&](long long a, long long b) {
        return idx.at(u_key(sp, u_mul(sp, B[a], B[b])));
    };
    lift.st = abelian_structure((long long)B.size(), mul, id);
    int n = (int)model.dim();
    size_t K = lift.st.orders.size();
    std::vector<std::vector<FloatMatrix>> pows(K);
    for (size_t a = 0; a < K; ++a) {
        long long d = lift.st.orders[a];
        FloatMatrix T = intertwiner_float(model, sp, B[lift.st.gen_index[a]]);
        FloatMatrix P = FloatMatrix::identity(n, 1);
        for (long long t = 0; t < d; ++t) P = P * T;
        std::complex<double> c = P.trace() / (double)n;
        std::complex<double> gmm = std::pow(c, -1.0 / (double)d);
        FloatMatrix L = T.scaled(gmm);
        pows[a].push_back(FloatMatrix::identity(n, 1));
        for (long long t = 1; t < d; ++t) pows[a].push_back(pows[a].back() * L);
    }
    lift.ops.resize(B.size(), FloatMatrix::identity(n, 1));
    for (size_t e = 0; e < B.size(); ++e) {
        FloatMatrix L = FloatMatrix::identity(n, 1);
        for (size_t a = 0; a < K; ++a)
            if (lift.st.dlog[e][a] != 0) L = L * pows[a][lift.st.dlog[e][a]];
        lift.ops[e] = L;
    }
    return lift;
}

std::vector<long long> eigenspace_dims_float(const SchrodingerModel& model, const FloatLift& lift,
                                             const CharacterTable& chars, const FloatMatrix& Pbot,
                                             bool* agree_flag) {
    long long nb = (long long)lift.elems.size();
    int n = (int)model.dim();
    std::vector<std::complex<double>> t1(nb), t2(nb);
    for (long long e = 0; e < nb; ++e) {
        std::complex<double> a = 0, b = 0;
        for (int i = 0; i < n; ++i) {
            a += lift.ops[e].at(i, i);
            for (int j = 0; j < n; ++j) b += lift.ops[e].at(i, j) * Pbot.at(j, i);
        }
        t1[e] = a;
        t2[e] = b;
    }
    std::vector<long long> dims;
    bool ok = true;
    for (size_t c = 0; c < chars.size(); ++c) {
        std::complex<double> acc = 0;
        for (long long e = 0; e < nb; ++e)
            acc += std::conj(chars.value(c, e).to_complex()) * (t1[e] - t2[e]);
        acc /= (double)nb;
        long long r = llround(acc.real());
        if (std::abs(acc.real() - (double)r) > 1e-8 || std::abs(acc.imag()) > 1e-8) ok = false;
        dims.push_back(r);
    }
    if (agree_flag) *agree_flag = ok;
    return dims;
}

} // namespace weil
