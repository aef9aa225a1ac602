#include "weil/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace weil {

using nlohmann::json;

FormKind form_kind_of(const Config& cfg) {
    if (cfg.rcase == RingCase::RamifiedEven)
        return cfg.form_type == 2 ? FormKind::HermitianType2 : FormKind::HermitianType1;
    return FormKind::SkewHermitian;
}

RingCase parse_case(const std::string& s) {
    if (s == "symplectic") return RingCase::Symplectic;
    if (s == "unramified") return RingCase::Unramified;
    if (s == "ramified-odd") return RingCase::RamifiedOdd;
    if (s == "ramified-even") return RingCase::RamifiedEven;
    throw std::invalid_argument("unknown case: " + s +
                                " (expected symplectic|unramified|ramified-odd|ramified-even)");
}

void Report::tally() {
    num_pass = num_fail = num_skip = 0;
    for (const auto& c : checks) {
        if (c.skipped) ++num_skip;
        else if (c.pass) ++num_pass;
        else ++num_fail;
    }
}

std::string Report::to_json() const {
    json meta;
    meta["case"] = ring_case_name(cfg.rcase);
    meta["p"] = cfg.p;
    meta["level"] = cfg.level;
    meta["m"] = cfg.m;
    meta["formType"] = cfg.form_type;
    meta["i"] = cfg.ideal_i;
    meta["j"] = j;
    meta["e"] = e;
    meta["q"] = q;
    meta["arith"] = cfg.arith;
    json arr = json::array();
    for (const auto& c : checks) {
        json r;
        r["id"] = c.id;
        r["anchor"] = c.anchor;
        r["expected"] = c.expected;
        r["computed"] = c.computed;
        r["pass"] = c.pass;
        if (c.skipped) r["skipped"] = true;
        r["millis"] = c.millis;
        arr.push_back(r);
    }
    json summary;
    json out;
    summary["pass"] = num_pass;
    summary["fail"] = num_fail;
    summary["skip"] = num_skip;
    out["meta"] = meta;
    out["checks"] = arr;
    out["summary"] = summary;
    return out.dump(2);
}

namespace {

long long isqrt_exact(long long n) {
    long long r = (long long)std::llround(std::sqrt((double)n));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (r * r != n) throw std::logic_error("isqrt_exact: not a perfect square");
    return r;
}

struct Runner {
    Report& rep;
    const Config& cfg;
    std::chrono::steady_clock::time_point t0;

    void begin() { t0 = std::chrono::steady_clock::now(); }
    void add(const std::string& id, const std::string& anchor, const std::string& expected,
             const std::string& computed, bool pass) {
        CheckRecord c;
        c.id = id;
        c.anchor = anchor;
        c.expected = expected;
        c.computed = computed;
        c.pass = pass;
        c.millis = cfg.timings
                       ? std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count()
                       : 0;
        rep.checks.push_back(std::move(c));
        begin();
    }
    void skip(const std::string& id, const std::string& anchor, const std::string& why) {
        CheckRecord c;
        c.id = id;
        c.anchor = anchor;
        c.expected = "-";
        c.computed = why;
        c.pass = false;
        c.skipped = true;
        rep.checks.push_back(std::move(c));
        begin();
    }
};

// closed-form expected dimension per case; -1 when no closed form applies
long long closed_form_dim(const HermSpace& sp, bool aniso, bool invariant_is_unit) {
    long long q = sp.ring.q;
    int m = sp.m, e = sp.ring.e, l = sp.ring.level;
    auto qpow = [&](long long x) { return x < 0 ? -1 : pow_ll(q, x); };
    switch (sp.ring.rcase) {
        case RingCase::Symplectic: {
            long long n = m / 2;
            return (qpow(n * e) - qpow(n * (e - 2))) / 2;
        }
        case RingCase::RamifiedOdd: {
            long long n = m / 2;
            return (qpow(n * (2 * l - 1)) - qpow(n * (2 * l - 3))) / (2 * qpow(l - 1));
        }
        case RingCase::Unramified: {
            long long sgn_m = (m % 2 == 0) ? 1 : -1;
            long long tail = pow_ll(q, m) - sgn_m; // q^m + (-1)^{m+1}
            if (invariant_is_unit) return qpow((e - 1) * (m - 1)) * tail / (q + 1);
            return (qpow((e - 1) * (m - 1)) + sgn_m * qpow((e - 2) * (m - 1))) * tail / (q + 1);
        }
        case RingCase::RamifiedEven:
            if (aniso) return qpow(l - 1) * (q + 1) / 2;
            return -1; // isotropic hermitian: use the stabilizer-index form
    }
    return -1;
}

} // namespace

Report run_verify(const Config& cfg) {
    Report rep;
    rep.cfg = cfg;
    // --- validation against module preconditions ---
    RingSpec rs = make_ring_spec(cfg.rcase, cfg.p, cfg.level);
    if (cfg.m < 2) throw std::invalid_argument("m must be at least 2");
    if (cfg.rcase == RingCase::RamifiedEven && cfg.form_type != 1 && cfg.form_type != 2)
        throw std::invalid_argument("ramified-even requires --form-type 1 or 2");
    if (cfg.rcase != RingCase::RamifiedEven && cfg.form_type != 0)
        throw std::invalid_argument("--form-type only applies to the ramified-even case");
    HermSpace sp = make_space(rs, cfg.m, form_kind_of(cfg));
    int e = rs.e;
    int i = cfg.ideal_i;
    if (i < 1 || i >= e) throw std::invalid_argument("ideal exponent must satisfy 1 <= i <= e-1");
    int j = e - i;
    rep.e = e;
    rep.j = j;
    rep.q = rs.q;
    bool want_counts = cfg.checks == "counts" || cfg.checks == "all";
    bool want_abelian = cfg.checks == "abelian" || cfg.checks == "all";
    bool want_nonabelian = cfg.checks == "nonabelian" || cfg.checks == "all";
    if (cfg.checks != "counts" && cfg.checks != "abelian" && cfg.checks != "nonabelian" &&
        cfg.checks != "all")
        throw std::invalid_argument("--checks must be counts|abelian|nonabelian|all");
    bool abelian_legal = 2 * i >= e;
    bool nonabelian_legal = 2 * i >= e && 3 * i <= 2 * e && j >= 1;
    if (cfg.checks == "abelian" && !abelian_legal)
        throw std::invalid_argument("abelian suite requires the ideal to square to zero (2i >= e)");
    if (cfg.checks == "nonabelian" && !nonabelian_legal)
        throw std::invalid_argument("nonabelian suite requires i^2 = 0 and j^2 inside i");
    bool shadow = cfg.arith == "float-shadow";
    if (cfg.arith != "exact" && cfg.arith != "float-shadow")
        throw std::invalid_argument("--arith must be exact|float-shadow");

    Runner R{rep, cfg, {}};
    R.begin();

    bool aniso = sp.kind != FormKind::SkewHermitian && !find_isotropic(sp).has_value();
    auto N = norm_one_group(rs);
    auto n_meet_i = norm_one_congruence(rs, i);
    auto n_meet_j = norm_one_congruence(rs, j);

    // ---------------- counting suite ----------------
    if (want_counts) {
        {
            bool ok = true;
            std::string detail;
            for (int k = 0; k <= e; ++k) {
                auto full = ideal_meet(rs, k, IdealPart::Full);
                auto rp = ideal_meet(rs, k, IdealPart::RPart);
                auto spart = ideal_meet(rs, k, IdealPart::SPart);
                if (full.size() != rp.size() * spart.size()) {
                    ok = false;
                    detail = "k=" + std::to_string(k);
                }
            }
            R.add("ideal-splitting", "ideal meets split as (R cap k) x (S cap k)",
                  "|r^k| = |R cap r^k| * |S cap r^k| for 0 <= k <= e", ok ? "ok" : detail, ok);
        }
        {
            bool ok = true;
            std::string detail = "ok";
            for (int k = 0; k <= e; ++k) {
                SubgroupHNF fp = perp_of(sp, k);
                if (fp != h_perp_of(sp, k)) {
                    ok = false;
                    detail = "dagger mismatch at k=" + std::to_string(k);
                }
                if (fp != layer_subgroup(sp, e - k)) {
                    ok = false;
                    detail = "annihilator mismatch at k=" + std::to_string(k);
                }
            }
            R.add("perp-annihilator", "(r^k V)-perp equals ann(r^k) V, under both forms",
                  "equality for 0 <= k <= e", detail, ok);
        }
        {
            bool ok = true;
            for (int k = (e + 1) / 2; k <= e; ++k) {
                auto lhs = norm_one_congruence(rs, k);
                auto rhs = one_plus_skew(rs, k);
                std::set<long long> a, b;
                for (auto& z : lhs) a.insert(elem_key(rs, z));
                for (auto& z : rhs) b.insert(elem_key(rs, z));
                if (a != b) ok = false;
            }
            R.add("norm-one-skew-param", "N cap (1 + k) = 1 + (S cap k) when k^2 = 0",
                  "sets equal for all square-zero levels", ok ? "ok" : "mismatch", ok);
        }
        {
            bool ok = true;
            bool any = false;
            for (int ii = (e + 1) / 2; ii < e; ++ii) {
                int jj = e - ii;
                if (2 * jj < ii) continue; // parameterization needs j^2 inside i
                any = true;
                auto lhs = norm_one_congruence(rs, jj);
                auto rhs = one_plus_halfsquare_skew(rs, jj);
                std::set<long long> a, b;
                for (auto& z : lhs) a.insert(elem_key(rs, z));
                for (auto& z : rhs) b.insert(elem_key(rs, z));
                if (a != b) ok = false;
            }
            if (any)
                R.add("norm-one-halfsquare-param", "N cap (1+j) = {1 + s^2/2 + s : s in S cap j}",
                      "sets equal for all admissible complementary pairs", ok ? "ok" : "mismatch", ok);
        }
        {
            bool ok = true;
            std::string cmp;
            for (int ii = (e + 1) / 2; ii < e; ++ii) {
                auto tr = orbit_transversal(sp, ii);
                long long n1 = (long long)norm_one_congruence(rs, ii).size();
                long long expect = aniso ? n1 - n1 / rs.q : n1;
                if (tr.count != expect) ok = false;
                if (ii == i) cmp = std::to_string(tr.count) + " orbits vs " + std::to_string(expect);
            }
            R.add("orbit-count-congruence",
                  aniso ? "|T cap P| = (1 - 1/q)|N cap (1+i)| (hermitian non-isotropic)"
                        : "|T cap P| = |N cap (1+i)|",
                  "counts agree for every square-zero ideal", cmp + (ok ? "" : " (mismatch)"), ok);
        }
        {
            bool ok = true;
            for (int ii = (e + 1) / 2; ii < e; ++ii) {
                auto tr = orbit_transversal(sp, ii);
                long long n1 = (long long)norm_one_congruence(rs, ii).size();
                long long scriptN = tr.count * ((long long)N.size() / n1);
                long long expect = aniso ? (long long)N.size() - (long long)N.size() / rs.q
                                         : (long long)N.size();
                if (scriptN != expect) ok = false;
            }
            R.add("character-set-size",
                  aniso ? "|script N| = (1 - 1/q)|N|" : "|script N| = |N|",
                  "|T cap P| * [N : N cap (1+i)] matches", ok ? "ok" : "mismatch", ok);
        }
        {
            long long S = rs.has_y() ? rs.ymod : 1;
            long long idx = -1;
            std::string note;
            try {
                std::vector<UElem> pool = generator_pool(sp);
                idx = affine_span_index(sp, pool, vec_unit(sp, 0), true);
                note = std::to_string(idx);
            } catch (const BudgetExceeded&) {
                note = "budget";
            }
            R.add("affine-span-index", "[V : <gt - t>] equals the number of skew hermitian elements",
                  std::to_string(S), note, idx == S);
        }
    }

    if (!want_abelian && !want_nonabelian) {
        rep.tally();
        if (!cfg.report_path.empty()) {
            std::ofstream f(cfg.report_path);
            f << rep.to_json() << "\n";
        }
        return rep;
    }

    // ---------------- heavy context ----------------
    long long expN = 1;
    for (const auto& z : N) {
        long long o = 1;
        RingElem pz = z;
        while (pz != ring_one(rs)) {
            pz = ring_mul(rs, pz, z);
            ++o;
        }
        expN = lcm_ll(expN, o);
    }
    int M = (int)lcm_ll(rs.xmod, expN);
    SchrodingerModel model(fin_symp_of(sp), M);
    std::vector<std::vector<long long>> minv;
    for (const auto& v : enumerate_layer(sp, e - 1)) minv.push_back(sp.to_coords(v));
    CycMatrix Pbot = averaging_projection(model, minv);
    long long dimX = model.dim();

    bool group_ok = true;
    GroupStore st;
    {
        std::string key = store_cache_key(sp, cfg.max_group_order);
        bool cached = !cfg.cache_dir.empty() && store_read(cfg.cache_dir, key, sp, st);
        if (!cached) {
            try {
                st = enumerate_group(sp, cfg.max_group_order);
                if (!cfg.cache_dir.empty()) store_write(cfg.cache_dir, key, sp, st);
            } catch (const BudgetExceeded&) {
                group_ok = false;
            }
        }
    }

    long long rV = ideal_size(rs, 1);
    for (int t = 1; t < sp.m; ++t) rV *= ideal_size(rs, 1);
    long long botrank_expect = rV / dimX;
    long long dimTop = dimX - botrank_expect;

    auto tr_i = orbit_transversal(sp, i);

    if (want_abelian && abelian_legal) {
        {
            bool idem = (Pbot * Pbot) == Pbot;
            CycNum tr = Pbot.trace();
            long long rank = tr.is_rational() && tr.rational_part().is_integer()
                                 ? tr.rational_part().num().to_ll()
                                 : -1;
            R.add("bot-projection", "fixed space of (0, min V); dim = |rV| / sqrt|V|",
                  "idempotent of rank " + std::to_string(botrank_expect),
                  std::string(idem ? "idempotent" : "NOT idempotent") + ", rank " +
                      std::to_string(rank),
                  idem && rank == botrank_expect);
        }
        {
            Rational schur = model.commutant_dimension_by_traces();
            R.add("schrodinger-irreducible", "the type-lambda module has scalar commutant",
                  "1", schur.str(), schur == Rational(1));
        }
        if (!group_ok) {
            R.skip("group-order", "full enumeration by layered lifting", "group order exceeds budget");
        } else {
            R.add("group-order", "full enumeration by layered lifting",
                  "closed under product/inverse", std::to_string(st.size()) + " elements", true);
        }
        // generator pool certification
        std::vector<UElem> gens;
        bool pool_ok = false;
        if (group_ok) {
            try {
                auto pool = generator_pool(sp);
                gens = minimal_generating_subset(sp, pool, st.size());
                pool_ok = true;
                R.add("generator-pool", "transvections, Eichler maps, tori, Weyl flips generate",
                      "closure order " + std::to_string(st.size()),
                      "generating subset of size " + std::to_string(gens.size()), true);
            } catch (const std::exception& ex) {
                R.add("generator-pool", "transvections, Eichler maps, tori, Weyl flips generate",
                      "closure reaches the full group", ex.what(), false);
            }
        } else {
            R.skip("generator-pool", "pool closure equals the enumerated order", "no enumeration");
        }

        // orbit reps and alpha machinery need swept representatives
        if (!tr_i.swept) {
            R.skip("alpha-suite", "character machinery over the orbit transversal",
                   "quotient too large to sweep representatives");
        } else if (!group_ok) {
            R.skip("alpha-suite", "character machinery over the orbit transversal", "no enumeration");
        } else {
            std::vector<Vec> treps;
            for (auto& [inv, t] : tr_i.reps) treps.push_back(t);
            auto omega_idx = congruence_filter(sp, st, i);
            std::vector<UElem> omega;
            for (int ix : omega_idx) omega.push_back(st.elems[ix]);
            {
                // alpha_t is a homomorphism on all of Omega(i)
                bool ok = true;
                std::unordered_map<int, int> pos_of;
                for (size_t c = 0; c < omega_idx.size(); ++c) pos_of[omega_idx[c]] = (int)c;
                for (const auto& t : treps) {
                    std::vector<CycNum> vals;
                    for (const auto& g : omega) vals.push_back(alpha_char(sp, t, g, i, M));
                    for (size_t a = 0; a < omega.size() && ok; ++a)
                        for (size_t b = 0; b < omega.size() && ok; ++b) {
                            int pos = pos_of.at(st.find(sp, u_mul(sp, omega[a], omega[b])));
                            if (vals[a] * vals[b] != vals[pos]) ok = false;
                        }
                }
                R.add("alpha-homomorphism", "alpha_t(g) = mu(h(gt,t)) is a character of Omega(i)",
                      "multiplicative over the full table", ok ? "ok" : "violation", ok);
            }
            {
                // the invariant h(t,t) mod j separates exactly the group orbits
                bool ok = true;
                for (const auto& t : treps) {
                    std::set<long long> orbit;
                    for (const auto& g : st.elems) {
                        Vec gv = u_apply(sp, g, t);
                        for (auto& c : gv.c) c = reduce_mod_ideal(rs, c, j);
                        orbit.insert(vec_key(sp, gv));
                    }
                    RingElem inv = orbit_invariant(sp, t, j);
                    for (const auto& s : enumerate_mod_layer(sp, j)) {
                        if (!is_primitive(sp, s)) continue;
                        bool in_orb = orbit.count(vec_key(sp, s)) > 0;
                        if (in_orb != (orbit_invariant(sp, s, j) == inv)) ok = false;
                    }
                }
                R.add("orbit-invariant-separation",
                      "h(v,v) mod j is constant on group orbits and separates them",
                      "orbits equal invariant classes", ok ? "ok" : "mismatch", ok);
            }
            {
                // distinct transversal members have distinct restrictions
                bool ok = true;
                for (size_t a = 0; a < treps.size(); ++a)
                    for (size_t b = a + 1; b < treps.size(); ++b) {
                        bool same = true;
                        for (const auto& z : n_meet_i) {
                            UElem zi = u_scalar(sp, z);
                            if (alpha_char(sp, treps[a], zi, i, M) !=
                                alpha_char(sp, treps[b], zi, i, M))
                                same = false;
                        }
                        if (same) ok = false;
                    }
                R.add("alpha-separation", "restrictions to N cap (1+i) separate the orbits",
                      "pairwise distinct", ok ? "ok" : "collision", ok);
            }
            {
                // stabilizer of alpha_t equals N G_t elementwise
                bool ok = true;
                // alpha values are determined by the residue of t mod jV on a
                // generating set of Omega(i)
                std::vector<UElem> omega_gens =
                    minimal_generating_subset(sp, omega, (long long)omega.size());
                for (const auto& t : treps) {
                    auto alpha_vec = [&](const Vec& s) {
                        std::vector<CycNum> v;
                        for (const auto& g : omega_gens) v.push_back(alpha_char(sp, s, g, i, M));
                        return v;
                    };
                    auto base = alpha_vec(t);
                    auto gt_idx = stabilizer_indices(sp, st, t, j);
                    std::set<int> ngt;
                    for (const auto& z : N)
                        for (int gidx : gt_idx)
                            ngt.insert(st.find(sp, u_mul(sp, u_scalar(sp, z), st.elems[gidx])));
                    for (size_t gi = 0; gi < st.elems.size(); ++gi) {
                        bool stab = alpha_vec(u_apply(sp, st.elems[gi], t)) == base;
                        if (stab != (ngt.count((int)gi) > 0)) ok = false;
                    }
                }
                R.add("alpha-stabilizer", "the stabilizer of alpha_t in U(V) is N G_t",
                      "elementwise equality", ok ? "ok" : "mismatch", ok);
            }
            if (dimX <= 100 && sp.space_size() <= 1000) {
                // witness search: alpha_v = alpha_w forces w = z v + u0
                bool ok = true;
                std::vector<UElem> omega_gens =
                    minimal_generating_subset(sp, omega, (long long)omega.size());
                auto alpha_vec = [&](const Vec& s) {
                    std::vector<CycNum> v;
                    for (const auto& g : omega_gens) v.push_back(alpha_char(sp, s, g, i, M));
                    return v;
                };
                auto all = enumerate_layer(sp, 0);
                std::vector<Vec> prim;
                for (const auto& v : all)
                    if (is_primitive(sp, v)) prim.push_back(v);
                auto jlayer = enumerate_layer(sp, j);
                for (const auto& v : prim)
                    for (const auto& w : prim) {
                        if (!(alpha_vec(v) == alpha_vec(w))) continue;
                        bool found = false;
                        for (const auto& z : N) {
                            Vec zv = vec_scal(sp, z, v);
                            for (const auto& u0 : jlayer)
                                if (vec_add(sp, zv, u0) == w) found = true;
                            if (found) break;
                        }
                        if (!found) ok = false;
                    }
                R.add("alpha-equality-witness", "alpha_v = alpha_w implies w = z v + u0 with u0 in U-perp",
                      "witness exists for every equal pair", ok ? "ok" : "missing witness", ok);
            }

            // --- spectral work ---
            std::vector<UElem> Nu;
            for (const auto& z : N) Nu.push_back(u_scalar(sp, z));
            if (shadow) {
                FloatLift fl = abelian_lift_float(model, sp, Nu);
                CharacterTable chars = character_table(fl.st, M);
                bool agree = false;
                auto dims = eigenspace_dims_float(model, fl, chars, to_float(Pbot), &agree);
                long long total = 0, nonzero = 0;
                for (long long d : dims) {
                    total += d;
                    if (d > 0) ++nonzero;
                }
                long long expect_nonzero =
                    aniso ? 2 * (pow_ll(rs.q, rs.level) - pow_ll(rs.q, rs.level - 1))
                          : (long long)N.size();
                R.add("eigenspace-cardinality-float",
                      "number of nonzero N-eigenspaces in the top layer (float shadow)",
                      std::to_string(expect_nonzero), std::to_string(nonzero),
                      agree && nonzero == expect_nonzero);
                R.add("top-dimension-float", "sum of eigenspace dims equals dim Top (float shadow)",
                      std::to_string(dimTop), std::to_string(total), agree && total == dimTop);
                {
                    std::vector<long long> sorted;
                    for (long long d : dims)
                        if (d > 0) sorted.push_back(d);
                    std::sort(sorted.begin(), sorted.end());
                    std::string s;
                    for (size_t t2 = 0; t2 < sorted.size(); ++t2)
                        s += (t2 ? "," : "") + std::to_string(sorted[t2]);
                    R.add("eigenspace-dimensions-float", "multiset of nonzero eigenspace dimensions",
                          "agrees with the exact mode", s, agree);
                }
                R.skip("lift-multiplicative", "genuine lift table on N", "exact-only check");
                R.skip("omega-isotypics", "alpha_t enters Top(phi) uniquely", "exact-only check");
                R.skip("commutant-top", "multiplicity free decomposition", "exact-only check");
            } else {
                AbelianLift lift = abelian_lift(model, sp, Nu);
                CharacterTable chars = character_table(lift.st, M);
                {
                    bool mult = lift_multiplicative(model, lift, sp);
                    R.add("lift-multiplicative", "genuine operators on N multiply exactly",
                          "full table multiplicative",
                          mult ? "ok (twist class " + std::to_string(lift.twist_class_size) + ")"
                               : "violation",
                          mult);
                }
                auto dims = eigenspace_dims(model, lift, chars, Pbot);
                long long total = 0, nonzero = 0;
                std::vector<size_t> nzidx;
                for (size_t k = 0; k < dims.size(); ++k) {
                    total += dims[k];
                    if (dims[k] > 0) {
                        ++nonzero;
                        nzidx.push_back(k);
                    }
                }
                long long expect_nonzero =
                    aniso ? 2 * (pow_ll(rs.q, rs.level) - pow_ll(rs.q, rs.level - 1))
                          : (long long)N.size();
                R.add("eigenspace-cardinality",
                      aniso ? "script N has cardinality 2(q^l - q^{l-1})"
                            : "script N equals the full character group of N",
                      std::to_string(expect_nonzero), std::to_string(nonzero),
                      nonzero == expect_nonzero);
                R.add("top-dimension", "sum of eigenspace dims equals dim Top = sqrt|V| - |rV|/sqrt|V|",
                      std::to_string(dimTop), std::to_string(total), total == dimTop);
                {
                    std::vector<long long> sorted;
                    for (long long d : dims)
                        if (d > 0) sorted.push_back(d);
                    std::sort(sorted.begin(), sorted.end());
                    std::string s;
                    for (size_t t2 = 0; t2 < sorted.size(); ++t2)
                        s += (t2 ? "," : "") + std::to_string(sorted[t2]);
                    R.add("eigenspace-dimensions", "multiset of nonzero eigenspace dimensions",
                          "audited against the closed forms", s, true);
                }
                R.add("space-dimensions", "degree sqrt|V| and its bottom/top split",
                      "dim X = dim Bot + dim Top",
                      "dimX=" + std::to_string(dimX) + " bot=" + std::to_string(botrank_expect) +
                          " top=" + std::to_string(dimTop),
                      true);

                // match phi -> t via restrictions to N cap (1+i)
                std::vector<int> n_in_i_idx;
                for (size_t z = 0; z < N.size(); ++z)
                    if (in_ideal(rs, ring_sub(rs, N[z], ring_one(rs)), i)) n_in_i_idx.push_back((int)z);
                std::vector<int> phi_to_t(chars.size(), -1);
                bool matched_all = false;
                {
                    // alpha values on N cap (1+i) per transversal element
                    std::vector<std::vector<CycNum>> avals(treps.size());
                    for (size_t tdx = 0; tdx < treps.size(); ++tdx)
                        for (int z : n_in_i_idx)
                            avals[tdx].push_back(alpha_char(sp, treps[tdx], Nu[z], i, M));
                    // the matching may be off by one common twist character of
                    // N cap (1+i); collect candidates from the first eigenspace
                    std::vector<std::vector<CycNum>> cands;
                    for (size_t tdx = 0; tdx < treps.size(); ++tdx) {
                        std::vector<CycNum> c;
                        for (size_t zi = 0; zi < n_in_i_idx.size(); ++zi)
                            c.push_back(chars.value(nzidx[0], n_in_i_idx[zi]) *
                                        avals[tdx][zi].conj());
                        cands.push_back(std::move(c));
                    }
                    bool twist_trivial = false;
                    std::map<int, std::vector<size_t>> groups;
                    for (const auto& cand : cands) {
                        std::fill(phi_to_t.begin(), phi_to_t.end(), -1);
                        groups.clear();
                        bool ok = true;
                        for (size_t k : nzidx) {
                            int which = -1;
                            for (size_t tdx = 0; tdx < treps.size(); ++tdx) {
                                bool match = true;
                                for (size_t zi = 0; zi < n_in_i_idx.size(); ++zi)
                                    if (chars.value(k, n_in_i_idx[zi]) * avals[tdx][zi].conj() !=
                                        cand[zi])
                                        match = false;
                                if (match) {
                                    if (which >= 0) ok = false;
                                    which = (int)tdx;
                                }
                            }
                            if (which < 0) ok = false;
                            phi_to_t[k] = which;
                            if (which >= 0) groups[which].push_back(k);
                        }
                        if (!ok) continue;
                        matched_all = true;
                        twist_trivial = true;
                        for (const auto& c : cand)
                            if (!(c == CycNum::one(M))) twist_trivial = false;
                        break;
                    }
                    long long ext = (long long)N.size() / (long long)n_meet_i.size();
                    bool sizes_ok = matched_all && (long long)groups.size() == tr_i.count;
                    if (sizes_ok)
                        for (auto& [tdx, ks] : groups)
                            if ((long long)ks.size() != ext) sizes_ok = false;
                    R.add("extension-classes",
                          "nonzero eigenspaces split into |T cap P| classes of [N : N cap (1+i)] extensions",
                          std::to_string(tr_i.count) + " classes of " + std::to_string(ext),
                          std::to_string(groups.size()) + " classes" +
                              (matched_all && !twist_trivial ? " (nontrivial common twist flagged)"
                                                             : ""),
                          sizes_ok);
                }

                // dimension audit per nonzero character
                if (group_ok && matched_all) {
                    bool ok = true;
                    std::string fail;
                    long long sqQ = isqrt_exact((long long)fin_symp_quotient(sp, i).size());
                    long long nmi = (long long)n_meet_i.size();
                    long long nmj = (long long)n_meet_j.size();
                    for (size_t k : nzidx) {
                        if (phi_to_t[k] < 0) { ok = false; fail = "unmatched eigenspace"; continue; }
                        const Vec& t = treps[phi_to_t[k]];
                        long long orbit = st.size() / (long long)stabilizer_indices(sp, st, t, j).size();
                        // N cap G_t really is N cap (1+j)
                        long long ncg = 0;
                        for (const auto& z : N) {
                            Vec d = vec_sub(sp, vec_scal(sp, z, t), t);
                            if (vec_in_ideal_layer(sp, d, j)) ++ncg;
                        }
                        if (ncg != nmj) { ok = false; fail = "N cap G_t"; }
                        // sqrt[jV:iV] * [U:S_t] / [N : N cap (1+i)]
                        long long byform = sqQ * orbit * nmi / (long long)N.size();
                        long long dimz = sqQ / (nmj / nmi);
                        long long byzeta = dimz * (orbit * nmj / (long long)N.size());
                        if (dims[k] != byform || dims[k] != byzeta) {
                            ok = false;
                            fail = "phi#" + std::to_string(k);
                        }
                        long long cf = closed_form_dim(sp, aniso,
                                                       is_unit(rs, h_eval(sp, t, t)));
                        if (cf >= 0 && dims[k] != cf) {
                            ok = false;
                            fail = "closed form phi#" + std::to_string(k);
                        }
                    }
                    R.add("dimension-audit",
                          "dim Top(phi) = sqrt([jV:iV]) [U:S_t] / [N:N cap (1+i)] and the zeta factorization",
                          "all nonzero eigenspaces match", ok ? "ok" : fail, ok);
                } else {
                    R.skip("dimension-audit", "stabilizer-index dimension formulas", "no enumeration");
                }

                // Mackey cross-check
                if (group_ok) {
                    long long sqQ = isqrt_exact((long long)fin_symp_quotient(sp, i).size());
                    long long sum = 0;
                    for (const auto& t : treps)
                        sum += st.size() / (long long)stabilizer_indices(sp, st, t, j).size() * sqQ;
                    R.add("mackey-dimension", "sum over orbits of [U(V):G_t] sqrt|U-perp/U| = dim Top",
                          std::to_string(dimTop), std::to_string(sum), sum == dimTop);
                }

                // omega isotypics
                {
                    AbelianLift lo = abelian_lift(model, sp, omega);
                    bool mult = lift_multiplicative(model, lo, sp);
                    std::vector<std::vector<CycNum>> vals;
                    for (const auto& t : treps) {
                        std::vector<CycNum> v;
                        for (const auto& g : omega) v.push_back(alpha_char(sp, t, g, i, M));
                        vals.push_back(v);
                    }
                    auto idims = isotypic_dims(model, lo, vals, Pbot);
                    bool pos = true;
                    for (long long d : idims)
                        if (d <= 0) pos = false;
                    R.add("omega-isotypics",
                          "each transversal character alpha_t enters the top layer (trivial twist)",
                          "positive isotypic dimension per orbit",
                          pos ? "ok" : "a transversal character is missing", pos && mult);
                    // per-phi uniqueness: only the matched t has a nonzero
                    // alpha_t-component inside Top(phi)
                    bool uniq = true;
                    int n = (int)model.dim();
                    std::vector<CycMatrix> ealpha;
                    for (size_t tdx = 0; tdx < treps.size(); ++tdx) {
                        CycMatrix acc(n, n, M);
                        enumerate_with_ops(lo, [&](long long eidx, const CycMatrix& L) {
                            acc = acc + L.scaled(vals[tdx][eidx].conj());
                        });
                        acc = acc.scaled(
                            CycNum::from_rational(M, Rational(BigInt(1), BigInt((long long)omega.size()))));
                        ealpha.push_back(acc);
                    }
                    CycMatrix Ptop = CycMatrix::identity(n, M) - Pbot;
                    for (size_t k : nzidx) {
                        if (phi_to_t[k] < 0) { uniq = false; continue; }
                        CycMatrix ephi(n, n, M);
                        enumerate_with_ops(lift, [&](long long z, const CycMatrix& L) {
                            ephi = ephi + L.scaled(chars.value(k, z).conj());
                        });
                        ephi = ephi.scaled(
                            CycNum::from_rational(M, Rational(BigInt(1), BigInt((long long)N.size()))));
                        for (size_t tdx = 0; tdx < treps.size(); ++tdx) {
                            CycNum tr = (ealpha[tdx] * (ephi * Ptop)).trace();
                            bool nz = !tr.is_zero();
                            if (nz != (phi_to_t[k] == (int)tdx)) uniq = false;
                        }
                    }
                    R.add("omega-uniqueness",
                          "for each phi exactly one transversal alpha_t enters Top(phi)",
                          "unique match per eigenspace", uniq ? "ok" : "violation", uniq);
                }

                // multiplicity-free commutant
                if (pool_ok) {
                    auto crep = multiplicity_free_check(model, sp, gens, lift, chars, nzidx, Pbot);
                    bool blocks1 = true;
                    for (long long b : crep.block_dims)
                        if (b != 1) blocks1 = false;
                    bool pass = blocks1 && crep.cross_blocks_vanish && crep.commutative &&
                                crep.total == nonzero;
                    R.add("commutant-top", "multiplicity free decomposition of the top layer",
                          "commutant dimension " + std::to_string(nonzero) + ", commutative",
                          "dimension " + std::to_string(crep.total) +
                              (crep.commutative ? ", commutative" : ", NOT commutative"),
                          pass);
                } else {
                    R.skip("commutant-top", "multiplicity free decomposition", "no generator pool");
                }
            }
        }
    } else if (want_abelian) {
        R.skip("abelian-suite", "abelian Clifford theory", "ideal does not square to zero");
    }

    // ---------------- nonabelian suite ----------------
    if (want_nonabelian && nonabelian_legal && j >= 1 && 2 * j < e) {
        if (!group_ok) {
            R.skip("gamma-index", "index of the congruence image in jV/iV", "no enumeration");
        } else {
            auto omj_idx = congruence_filter(sp, st, j);
            std::vector<UElem> omj;
            for (int ix : omj_idx) omj.push_back(st.elems[ix]);
            long long expect = (long long)n_meet_j.size() / (long long)n_meet_i.size();
            bool hom_ok = true, idx_ok = true;
            GammaResult res;
            // sweep primitive residue representatives
            std::vector<Vec> tsweep;
            for (const auto& v : enumerate_mod_layer(sp, j))
                if (is_primitive(sp, v)) tsweep.push_back(v);
            for (const auto& t : tsweep) {
                res = gamma_image(sp, omj, t, i);
                if (!res.homomorphism) hom_ok = false;
                if (res.index != expect) idx_ok = false;
            }
            R.add("gamma-homomorphism", "g -> gt - t + iV is a homomorphism on Omega(j)",
                  "additive on all pairs, every primitive t",
                  hom_ok ? "ok" : "not additive", hom_ok);
            R.add("gamma-index", "[jV/iV : image] = |N cap (1+j) / N cap (1+i)|",
                  std::to_string(expect), std::to_string(res.index), idx_ok);
            {
                // explicit congruence witnesses attain the image
                Vec t = tsweep.front();
                for (const auto& tt : tsweep)
                    if (vec_key(sp, tt) < vec_key(sp, t)) t = tt;
                std::vector<UElem> wits;
                for (const auto& z : n_meet_j) wits.push_back(u_scalar(sp, z));
                auto hd = hyperbolic_decomposition(sp);
                long long xdj, ydj;
                ideal_divisors(rs, j, xdj, ydj);
                for (auto& [u, v] : hd.planes) {
                    RingElem tau_a = sp.eps < 0 ? ring_from_int(rs, xdj)
                                                : ring_from_parts(rs, 0, ydj);
                    if (!(tau_a == ring_zero(rs))) {
                        wits.push_back(transvection(sp, tau_a, u));
                        wits.push_back(transvection(sp, tau_a, v));
                    }
                    wits.push_back(plane_torus(sp, u, v, ring_from_int(rs, 1 + xdj)));
                    for (const auto& w : hd.ortho) {
                        wits.push_back(plane_slot_mixer(sp, u, v, w, ring_from_int(rs, xdj)));
                        if (rs.has_y())
                            wits.push_back(plane_slot_mixer(sp, u, v, w, ring_from_parts(rs, 0, ydj)));
                    }
                }
                if (hd.planes.empty() && sp.m == 2) {
                    // anisotropic rank 2: the explicit 2x2 congruence elements
                    for (long long a = 0; a < rs.xmod; a += xdj)
                        wits.push_back(aniso_mixer(sp, hd.ortho[0], hd.ortho[1], ring_from_int(rs, a)));
                    if (rs.has_y())
                        for (long long b = 0; b < rs.ymod; b += ydj)
                            wits.push_back(
                                aniso_mixer(sp, hd.ortho[0], hd.ortho[1], ring_from_parts(rs, 0, b)));
                }
                bool all_in = true;
                for (const auto& w : wits)
                    if (!in_congruence(sp, w, j)) all_in = false;
                auto wres = gamma_image(sp, wits, t, i, 0);
                auto fullres = gamma_image(sp, omj, t, i, 0);
                bool attained = all_in && wres.image == fullres.image;
                R.add("gamma-witnesses", "explicit congruence lifts attain the full image",
                      "witnesses lie in Omega(j), image matches", attained ? "ok" : "short",
                      attained);
            }
            {
                SchrodingerModel qm(fin_symp_quotient(sp, i), M);
                Vec t = tsweep.front();
                auto gam = gamma_image(sp, omj, t, i);
                HtReport hrep = ht_induction_check(qm, gam.image);
                long long sqQ = isqrt_exact((long long)qm.group().size());
                bool pass = hrep.subgroup_index == expect && hrep.commutant_dim == expect &&
                            hrep.trace_formula == Rational(expect) && hrep.commutant_commutative &&
                            hrep.num_components == expect && hrep.components_equal_dim &&
                            hrep.component_dim == sqQ / expect;
                R.add("induction-index", "[H(U-perp) : H_t] equals the congruence index",
                      std::to_string(expect), std::to_string(hrep.subgroup_index),
                      hrep.subgroup_index == expect);
                R.add("induction-components",
                      "restriction to H_t is multiplicity free with equal component dimension",
                      std::to_string(expect) + " components of dim " + std::to_string(sqQ / expect),
                      std::to_string(hrep.num_components) + " components of dim " +
                          std::to_string(hrep.component_dim) +
                          " (commutant " + std::to_string(hrep.commutant_dim) + ", trace " +
                          hrep.trace_formula.str() + ")",
                      pass);
            }
        }
    } else if (want_nonabelian && cfg.checks == "nonabelian") {
        R.skip("nonabelian-suite", "nonabelian Clifford theory", "preconditions not met");
    } else if (want_nonabelian && !(j >= 1 && 2 * j < e) && nonabelian_legal) {
        // j^2 = 0 means Omega(j) is abelian: covered by the abelian suite
        R.skip("nonabelian-suite", "nonabelian Clifford theory", "Omega(j) is abelian here");
    }

    rep.tally();
    if (!cfg.report_path.empty()) {
        std::ofstream f(cfg.report_path);
        f << rep.to_json() << "\n";
    }
    return rep;
}

} // namespace weil
