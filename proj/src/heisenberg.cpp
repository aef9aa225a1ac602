#include "weil/heisenberg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace weil {

HeisElem heis_mul(const FinSympGroup& g, const HeisElem& a, const HeisElem& b) {
    long long modv = 1;
    for (int t = 0; t < g.E; ++t) modv *= g.p;
    HeisElem r;
    r.r = ((a.r + b.r + g.f_pair(a.v, b.v)) % modv + modv) % modv;
    r.v = g.add(a.v, b.v);
    return r;
}

HeisElem heis_inv(const FinSympGroup& g, const HeisElem& a) {
    long long modv = 1;
    for (int t = 0; t < g.E; ++t) modv *= g.p;
    HeisElem r;
    r.r = (modv - a.r % modv) % modv;
    r.v = g.scal(-1, a.v);
    return r;
}

SchrodingerModel::SchrodingerModel(FinSympGroup g, int conductor)
    : g_(std::move(g)), pairs_(symplectic_pairs(g_)), conductor_(conductor) {
    pE_ = 1;
    for (int t = 0; t < g_.E; ++t) pE_ *= g_.p;
    if (conductor_ % pE_ != 0)
        throw std::invalid_argument("SchrodingerModel: conductor must absorb lambda values");
    dim_ = pairs_.lagrangian_size();
    radix_.assign(pairs_.order.size(), 1);
    long long acc = 1;
    for (size_t t = 0; t < pairs_.order.size(); ++t) {
        radix_[t] = acc;
        acc *= pairs_.order[t];
    }
}

long long SchrodingerModel::index_of(const std::vector<long long>& b) const {
    long long idx = 0;
    for (size_t t = 0; t < b.size(); ++t) idx += (b[t] % pairs_.order[t]) * radix_[t];
    return idx;
}

std::vector<long long> SchrodingerModel::tuple_of(long long idx) const {
    std::vector<long long> b(pairs_.order.size());
    for (size_t t = 0; t < b.size(); ++t) {
        b[t] = idx % pairs_.order[t];
        idx /= pairs_.order[t];
    }
    return b;
}

std::vector<long long> SchrodingerModel::rep_of(long long idx) const {
    std::vector<long long> b = tuple_of(idx);
    std::vector<long long> v(g_.mods.size(), 0);
    for (size_t t = 0; t < b.size(); ++t) v = g_.add(v, g_.scal(b[t], pairs_.w[t]));
    return v;
}

std::pair<long long, long long> SchrodingerModel::apply_basis(long long r,
                                                              const std::vector<long long>& v,
                                                              long long cidx) const {
    std::vector<long long> cv = rep_of(cidx);
    std::vector<long long> vc = g_.add(v, cv);
    std::vector<long long> a, b;
    pairs_.decompose(vc, a, b);
    long long cp = index_of(b);
    std::vector<long long> cpv = rep_of(cp);
    std::vector<long long> l = g_.add(vc, g_.scal(-1, cpv));
    long long e = r + g_.f_pair(v, cv) - g_.f_pair(cpv, l);
    return {cp, ((e % pE_) + pE_) % pE_};
}

long long SchrodingerModel::preimage_index(const std::vector<long long>& v, long long b) const {
    // S(0,v) e_c lands on e_b iff rep(c) = rep(b) - v modulo the lagrangian
    std::vector<long long> target = g_.add(g_.scal(-1, v), rep_of(b));
    std::vector<long long> a, bt;
    pairs_.decompose(target, a, bt);
    return index_of(bt);
}

MonomialOp SchrodingerModel::op(long long r, const std::vector<long long>& v) const {
    MonomialOp m;
    m.perm.resize(dim_);
    m.sexp.resize(dim_);
    for (long long c = 0; c < dim_; ++c) {
        auto [cp, e] = apply_basis(r, v, c);
        m.perm[c] = cp;
        m.sexp[c] = e;
    }
    return m;
}

MonomialOp SchrodingerModel::compose(const MonomialOp& a, const MonomialOp& b) const {
    MonomialOp m;
    m.perm.resize(dim_);
    m.sexp.resize(dim_);
    for (long long c = 0; c < dim_; ++c) {
        m.perm[c] = a.perm[b.perm[c]];
        m.sexp[c] = (b.sexp[c] + a.sexp[b.perm[c]]) % pE_;
    }
    return m;
}

CycNum SchrodingerModel::lambda_pow(long long e) const {
    long long ee = ((e % pE_) + pE_) % pE_;
    return CycNum::root_of_unity(conductor_, ee * (conductor_ / pE_));
}

CycMatrix SchrodingerModel::dense(const MonomialOp& m) const {
    CycMatrix out((int)dim_, (int)dim_, conductor_);
    for (long long c = 0; c < dim_; ++c) out.at((int)m.perm[c], (int)c) = lambda_pow(m.sexp[c]);
    return out;
}

std::vector<HeisElem> SchrodingerModel::heis_generators() const {
    std::vector<HeisElem> gens;
    HeisElem center;
    center.r = 1;
    center.v.assign(g_.mods.size(), 0);
    gens.push_back(center);
    for (size_t i = 0; i < g_.mods.size(); ++i) {
        HeisElem h;
        h.r = 0;
        h.v.assign(g_.mods.size(), 0);
        h.v[i] = 1;
        gens.push_back(h);
    }
    return gens;
}

Rational SchrodingerModel::commutant_dimension_by_traces() const {
    // |tr S(r,v)|^2 = |lambda(r)|^2 |tr S(0,v)|^2, so the central sweep only
    // contributes a factor p^E
    CycNum acc = CycNum::zero(conductor_);
    std::vector<long long> v(g_.mods.size(), 0);
    while (true) {
        MonomialOp m = op(0, v);
        CycNum tr = CycNum::zero(conductor_);
        for (long long c = 0; c < dim_; ++c)
            if (m.perm[c] == c) tr += lambda_pow(m.sexp[c]);
        acc += tr * tr.conj();
        int t = (int)v.size() - 1;
        while (t >= 0) {
            if (++v[t] < g_.mods[t]) break;
            v[t] = 0;
            --t;
        }
        if (t < 0) break;
    }
    if (!acc.is_rational()) throw std::logic_error("trace sum not rational");
    return acc.rational_part() / Rational(g_.size());
}

CycMatrix averaging_projection(const SchrodingerModel& model,
                               const std::vector<std::vector<long long>>& subgroup) {
    int n = (int)model.dim();
    CycMatrix acc(n, n, model.conductor());
    for (const auto& u : subgroup) acc = acc + model.dense(0, u);
    CycNum scale = CycNum::from_rational(model.conductor(),
                                         Rational(BigInt(1), BigInt((long long)subgroup.size())));
    return acc.scaled(scale);
}

long long commutant_dimension(const std::vector<CycMatrix>& ops, int conductor,
                              std::vector<CycMatrix>* basis_out) {
    if (ops.empty()) throw std::invalid_argument("commutant_dimension: no operators");
    int n = ops[0].rows();
    int N = n * n;
    CycMatrix sys((int)ops.size() * N, N, conductor);
    int row0 = 0;
    for (const auto& G : ops) {
        // (G X - X G)_{ij} = sum_k G_{ik} X_{kj} - X_{ik} G_{kj}
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int r = row0 + i * n + j;
                for (int k = 0; k < n; ++k) {
                    sys.at(r, k * n + j) += G.at(i, k);
                    sys.at(r, i * n + k) -= G.at(k, j);
                }
            }
        row0 += N;
    }
    sys.make_rows_integral();
    auto null_basis = sys.nullspace();
    if (basis_out) {
        basis_out->clear();
        for (const auto& vec : null_basis) {
            CycMatrix M(n, n, conductor);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) M.at(i, j) = vec.at(i * n + j, 0);
            basis_out->push_back(std::move(M));
        }
    }
    return (long long)null_basis.size();
}

HtReport ht_induction_check(const SchrodingerModel& model, const SubgroupHNF& image) {
    HtReport rep;
    rep.subgroup_index = image.index();
    const FinSympGroup& q = model.group();
    // subgroup elements of I inside the quotient group
    std::vector<std::vector<long long>> I;
    {
        std::vector<std::vector<long long>> gens;
        for (const auto& col : image.basis) gens.push_back(q.reduce(col));
        // BFS closure in the finite group
        std::map<std::vector<long long>, bool> seen;
        std::vector<std::vector<long long>> frontier{std::vector<long long>(q.mods.size(), 0)};
        seen[frontier[0]] = true;
        while (!frontier.empty()) {
            auto cur = frontier.back();
            frontier.pop_back();
            for (const auto& g : gens) {
                auto nx = q.add(cur, g);
                if (!seen.count(nx)) {
                    seen[nx] = true;
                    frontier.push_back(nx);
                }
            }
        }
        for (auto& [v, _] : seen) I.push_back(v);
    }
    if ((long long)I.size() * rep.subgroup_index != q.size())
        throw std::logic_error("ht_induction_check: subgroup order mismatch");
    // commutant of the restriction: generators (0, x) suffice, the center
    // acts by scalars
    std::vector<CycMatrix> ops;
    for (const auto& col : image.basis) ops.push_back(model.dense(0, q.reduce(col)));
    std::vector<CycMatrix> basis;
    rep.commutant_dim = commutant_dimension(ops, model.conductor(), &basis);
    // character-sum route over the full subgroup H_t = R x I
    {
        CycNum acc = CycNum::zero(model.conductor());
        for (const auto& x : I) {
            MonomialOp m = model.op(0, x);
            CycNum tr = CycNum::zero(model.conductor());
            for (long long c = 0; c < model.dim(); ++c)
                if (m.perm[c] == c) tr += model.lambda_pow(m.sexp[c]);
            acc += tr * tr.conj();
        }
        if (!acc.is_rational()) throw std::logic_error("ht trace sum not rational");
        rep.trace_formula = acc.rational_part() / Rational((long long)I.size());
    }
    rep.commutant_commutative = true;
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = a + 1; b < basis.size(); ++b)
            if (basis[a] * basis[b] != basis[b] * basis[a]) rep.commutant_commutative = false;
    if (rep.commutant_commutative) rep.num_components = rep.commutant_dim;
    rep.double_commutant_dim = commutant_dimension(basis, model.conductor());
    // multiplicity free with equal component dims d: sum d_i = dim,
    // sum d_i^2 = dim^2 / c forces all equal by Cauchy-Schwarz
    rep.components_equal_dim =
        rep.commutant_commutative &&
        rep.double_commutant_dim * rep.commutant_dim == model.dim() * model.dim();
    if (rep.components_equal_dim) rep.component_dim = model.dim() / rep.commutant_dim;
    return rep;
}

} // namespace weil
