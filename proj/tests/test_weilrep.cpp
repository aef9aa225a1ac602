#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weil/weilrep.hpp"

using namespace weil;

namespace {
struct Inst {
    HermSpace sp;
    SchrodingerModel model;
    GroupStore st;
    CycMatrix Pbot;
    Inst(HermSpace s, int conductor)
        : sp(s), model(fin_symp_of(s), conductor), st(enumerate_group(s)), Pbot(bot(s, model)) {}
    static CycMatrix bot(const HermSpace& sp, const SchrodingerModel& model) {
        std::vector<std::vector<long long>> minv;
        for (const auto& v : enumerate_layer(sp, sp.ring.e - 1)) minv.push_back(sp.to_coords(v));
        return averaging_projection(model, minv);
    }
};
} // namespace

TEST_CASE("intertwiner: identity, central flip, random checks") {
    auto sp = make_space(make_ring_spec(RingCase::Symplectic, 3, 2), 2, FormKind::SkewHermitian);
    SchrodingerModel model(fin_symp_of(sp), 18);
    // identity gives the identity after normalization (Schur)
    ProjOp pid = intertwiner(model, sp, u_identity(sp));
    CHECK(pid.op == CycMatrix::identity((int)model.dim(), 18));
    // g = -1: square of the operator is scalar
    UElem m1 = u_scalar(sp, ring_neg(sp.ring, ring_one(sp.ring)));
    ProjOp pm = intertwiner(model, sp, m1);
    CycMatrix sq = pm.op * pm.op;
    CycMatrix scal = CycMatrix::identity((int)model.dim(), 18).scaled(sq.at(0, 0));
    CHECK(sq == scal);
    // the intertwining identity on random Heisenberg elements, for a few ops
    GroupStore st = enumerate_group(sp);
    std::mt19937_64 rng(23);
    const FinSympGroup& g = model.group();
    for (int t = 0; t < 4; ++t) {
        const UElem& u = st.elems[rng() % st.elems.size()];
        ProjOp W = intertwiner(model, sp, u);
        for (int s = 0; s < 20; ++s) {
            HeisElem k;
            k.r = (long long)(rng() % 9);
            k.v.resize(g.mods.size());
            for (size_t i = 0; i < k.v.size(); ++i) k.v[i] = (long long)(rng() % g.mods[i]);
            std::vector<long long> gk = sp.to_coords(u_apply(sp, u, sp.from_coords(k.v)));
            CHECK(model.dense(k.r, gk) * W.op == W.op * model.dense(k.r, k.v));
        }
    }
}

TEST_CASE("abelian lift on N for the symplectic instance") {
    auto sp = make_space(make_ring_spec(RingCase::Symplectic, 3, 2), 2, FormKind::SkewHermitian);
    SchrodingerModel model(fin_symp_of(sp), 18);
    std::vector<UElem> N;
    for (const auto& z : norm_one_group(sp.ring)) N.push_back(u_scalar(sp, z));
    AbelianLift lift = abelian_lift(model, sp, N);
    CHECK(lift.st.num_characters() == 2);
    CHECK(lift_multiplicative(model, lift, sp));
    // W(-1)^2 = 1 exactly
    for (size_t e = 0; e < N.size(); ++e) {
        CycMatrix L = lift_op(lift, (long long)e);
        CHECK(L * L == CycMatrix::identity((int)model.dim(), 18));
    }
}

TEST_CASE("instance A decomposition: dims 4+4, commutant 2") {
    auto sp = make_space(make_ring_spec(RingCase::Symplectic, 3, 2), 2, FormKind::SkewHermitian);
    Inst in(sp, 18);
    CHECK(in.Pbot * in.Pbot == in.Pbot);
    std::vector<UElem> N;
    for (const auto& z : norm_one_group(sp.ring)) N.push_back(u_scalar(sp, z));
    AbelianLift lift = abelian_lift(in.model, sp, N);
    CharacterTable chars = character_table(lift.st, 18);
    auto dims = eigenspace_dims(in.model, lift, chars, in.Pbot);
    REQUIRE(dims.size() == 2);
    CHECK(dims[0] + dims[1] == 8);
    CHECK(dims[0] == 4);
    CHECK(dims[1] == 4);
    // eigenprojection contracts: idempotent, orthogonal, complete on Top
    int n = (int)in.model.dim();
    std::vector<CycMatrix> eps;
    for (size_t c = 0; c < chars.size(); ++c) {
        CycMatrix e(n, n, 18);
        enumerate_with_ops(lift, [&](long long z, const CycMatrix& L) {
            CycNum w = chars.value(c, z).conj();
            e = e + L.scaled(w);
        });
        e = e.scaled(CycNum::from_rational(18, Rational(BigInt(1), BigInt((long long)N.size()))));
        eps.push_back(e);
    }
    CycMatrix sum(n, n, 18);
    for (size_t c = 0; c < eps.size(); ++c) {
        CHECK(eps[c] * eps[c] == eps[c]);
        for (size_t d2 = c + 1; d2 < eps.size(); ++d2) CHECK((eps[c] * eps[d2]).is_zero());
        sum = sum + eps[c];
    }
    CHECK(sum == CycMatrix::identity(n, 18));
    // multiplicity-free: commutant dimension 2 on Top, commutative
    auto pool = generator_pool(sp);
    auto gens = minimal_generating_subset(sp, pool, in.st.size());
    std::vector<size_t> nonzero{0, 1};
    auto rep = multiplicity_free_check(in.model, sp, gens, lift, chars, nonzero, in.Pbot);
    CHECK(rep.total == 2);
    CHECK(rep.block_dims == std::vector<long long>{1, 1});
    CHECK(rep.cross_blocks_vanish);
    CHECK(rep.commutative);
}

TEST_CASE("omega isotypics match the orbit transversal on instance A") {
    auto sp = make_space(make_ring_spec(RingCase::Symplectic, 3, 2), 2, FormKind::SkewHermitian);
    Inst in(sp, 18);
    auto om = congruence_filter(sp, in.st, 1);
    std::vector<UElem> omega;
    for (int i : om) omega.push_back(in.st.elems[i]);
    AbelianLift lo = abelian_lift(in.model, sp, omega);
    CHECK(lift_multiplicative(in.model, lo, sp));
    auto tr = orbit_transversal(sp, 1);
    REQUIRE(tr.count == 1);
    std::vector<std::vector<CycNum>> vals;
    for (auto& [inv, t] : tr.reps) {
        std::vector<CycNum> v;
        for (const auto& g : omega) v.push_back(alpha_char(sp, t, g, 1, 18));
        vals.push_back(v);
    }
    auto dims = isotypic_dims(in.model, lo, vals, in.Pbot);
    REQUIRE(dims.size() == 1);
    // alpha_t enters Top; its isotypic piece is dim Top / #conjugates = 2
    CHECK(dims[0] == 2);
    // the distinct conjugate characters alpha_s (s primitive) fill Top
    std::vector<std::vector<CycNum>> all_vals;
    for (const auto& s : enumerate_mod_layer(sp, 1)) {
        if (!is_primitive(sp, s)) continue;
        std::vector<CycNum> v;
        for (const auto& g : omega) v.push_back(alpha_char(sp, s, g, 1, 18));
        bool dup = false;
        for (const auto& w : all_vals)
            if (w == v) dup = true;
        if (!dup) all_vals.push_back(v);
    }
    CHECK(all_vals.size() == 4); // orbit of alpha_t under U(V) has [U : N G_t] = 4 members
    auto all_dims = isotypic_dims(in.model, lo, all_vals, in.Pbot);
    long long total = 0;
    for (long long d : all_dims) {
        CHECK(d == 2);
        total += d;
    }
    CHECK(total == 8);
}

TEST_CASE("float shadow agrees on instance A") {
    auto sp = make_space(make_ring_spec(RingCase::Symplectic, 3, 2), 2, FormKind::SkewHermitian);
    Inst in(sp, 18);
    std::vector<UElem> N;
    for (const auto& z : norm_one_group(sp.ring)) N.push_back(u_scalar(sp, z));
    AbelianLift lift = abelian_lift(in.model, sp, N);
    CharacterTable chars = character_table(lift.st, 18);
    auto dims = eigenspace_dims(in.model, lift, chars, in.Pbot);
    FloatLift fl = abelian_lift_float(in.model, sp, N);
    bool agree = false;
    auto fdims = eigenspace_dims_float(in.model, fl, chars, to_float(in.Pbot), &agree);
    CHECK(agree);
    CHECK(fdims == dims);
}

TEST_CASE("instance B: both hermitian types at p=3") {
    RingSpec rs = make_ring_spec(RingCase::RamifiedEven, 3, 1);
    int M = 6; // lcm(3, exponent of N = 6)
    for (FormKind kind : {FormKind::HermitianType1, FormKind::HermitianType2}) {
        HermSpace sp = make_space(rs, 2, kind);
        Inst in(sp, M);
        std::vector<UElem> N;
        for (const auto& z : norm_one_group(rs)) N.push_back(u_scalar(sp, z));
        AbelianLift lift = abelian_lift(in.model, sp, N);
        CHECK(lift_multiplicative(in.model, lift, sp));
        CharacterTable chars = character_table(lift.st, M);
        auto dims = eigenspace_dims(in.model, lift, chars, in.Pbot);
        std::vector<long long> nz;
        for (long long d : dims)
            if (d > 0) nz.push_back(d);
        std::sort(nz.begin(), nz.end());
        bool iso = find_isotropic(sp).has_value();
        if (iso) {
            // |script-N| = |N| = 6 with dimension multiset {1,1,1,1,2,2}
            CHECK(nz == std::vector<long long>{1, 1, 1, 1, 2, 2});
        } else {
            // exactly 2(q-1) = 4 nonzero characters, each of dim 2
            CHECK(nz == std::vector<long long>{2, 2, 2, 2});
        }
        long long sum = 0;
        for (long long d : nz) sum += d;
        CHECK(sum == 8);
    }
}
