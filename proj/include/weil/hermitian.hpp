#pragma once

#include <optional>

#include "weil/abelian.hpp"
#include "weil/localring.hpp"

namespace weil {

enum class FormKind { SkewHermitian, HermitianType1, HermitianType2 };

std::string form_kind_name(FormKind k);

struct Vec {
    std::vector<RingElem> c;
    bool operator==(const Vec& o) const { return c == o.c; }
    bool operator!=(const Vec& o) const { return !(*this == o); }
};

// Free A-module of rank m with its hermitian or skew hermitian gram matrix.
struct HermSpace {
    RingSpec ring;
    int m = 2;
    FormKind kind = FormKind::SkewHermitian;
    int eps = -1; // -1 skew hermitian, +1 hermitian
    std::vector<std::vector<RingElem>> gram;

    // V as a finite abelian group: one x-slot (and one y-slot when present)
    // per A-coordinate, in that interleaved order.
    std::vector<long long> coord_mods() const;
    int coords_per_entry() const { return ring.has_y() ? 2 : 1; }
    std::vector<long long> to_coords(const Vec& v) const;
    Vec from_coords(const std::vector<long long>& c) const;
    long long space_size() const;
};

HermSpace make_space(const RingSpec& ring, int m, FormKind kind);

Vec vec_zero(const HermSpace& sp);
Vec vec_unit(const HermSpace& sp, int i);
Vec vec_add(const HermSpace& sp, const Vec& a, const Vec& b);
Vec vec_sub(const HermSpace& sp, const Vec& a, const Vec& b);
Vec vec_neg(const HermSpace& sp, const Vec& a);
Vec vec_scal(const HermSpace& sp, const RingElem& s, const Vec& a);
bool vec_in_ideal_layer(const HermSpace& sp, const Vec& v, int k); // v in r^k V
bool is_primitive(const HermSpace& sp, const Vec& v);
long long vec_key(const HermSpace& sp, const Vec& v);

RingElem h_eval(const HermSpace& sp, const Vec& x, const Vec& y);
long long f_eval(const HermSpace& sp, const Vec& x, const Vec& y); // in R = Z/p^eprime

// All vectors of r^k V (k = 0 enumerates V); sizes grow fast, callers guard.
std::vector<Vec> enumerate_layer(const HermSpace& sp, int k);
// Representatives of V / r^j V, coordinates reduced by the ideal shape of r^j.
std::vector<Vec> enumerate_mod_layer(const HermSpace& sp, int j);

// Canonical representative of a + r^k in A / r^k.
RingElem reduce_mod_ideal(const RingSpec& s, const RingElem& a, int k);

// Subgroup of V generated by r^k V, as an HNF lattice.
SubgroupHNF layer_subgroup(const HermSpace& sp, int k);
// (r^k V)^perp with respect to f, computed by exact kernel solving.
SubgroupHNF perp_of(const HermSpace& sp, int k);
// Same, with respect to h (the dagger perp of the statement P^perp = P^dagger).
SubgroupHNF h_perp_of(const HermSpace& sp, int k);

// Class of h(v,v) in A / r^j; requires v primitive.
RingElem orbit_invariant(const HermSpace& sp, const Vec& v, int j);

struct OrbitTransversal {
    long long count = 0;
    // invariant value (canonical in A/r^j) -> lexicographically smallest
    // primitive representative; present only if a full sweep ran
    std::vector<std::pair<RingElem, Vec>> reps;
    bool swept = false;
};

// Orbits of primitive vectors of V / ann(i)-layer, classified by the value of
// h(v,v) mod r^j (j = e - i). Runs a full vector sweep when the quotient is
// small and a per-block value-set composition always; the two counts must
// agree whenever both run.
OrbitTransversal orbit_transversal(const HermSpace& sp, int i,
                                   long long sweep_budget = 4000000);

std::optional<Vec> find_isotropic(const HermSpace& sp);

struct HyperbolicDecomp {
    std::vector<std::pair<Vec, Vec>> planes; // isotropic pairs with h(u,v) = 1
    std::vector<Vec> ortho;                  // remaining orthogonal slots
    std::vector<RingElem> ortho_vals;        // h(w,w) for those slots
};

// Splits V into hyperbolic planes plus an orthogonal remainder. For the
// standard skew hermitian grams this reads blocks off directly; hermitian
// isotropic forms are split by explicit plane construction.
HyperbolicDecomp hyperbolic_decomposition(const HermSpace& sp);

// Symplectic pair structure of a finite abelian group with a nondegenerate
// alternating Z/p^E-valued form, plus the Lagrangian it induces.
struct FinSympGroup {
    std::vector<long long> mods; // cyclic coordinate orders
    long long p = 3;
    long long E = 1;                          // values live in Z/p^E
    std::vector<std::vector<long long>> fmat; // f on coordinate generators

    long long f_pair(const std::vector<long long>& a, const std::vector<long long>& b) const;
    long long size() const;
    std::vector<long long> reduce(std::vector<long long> v) const;
    std::vector<long long> add(const std::vector<long long>& a, const std::vector<long long>& b) const;
    std::vector<long long> scal(long long s, const std::vector<long long>& a) const;
};

FinSympGroup fin_symp_of(const HermSpace& sp);
// The quotient ann(r^i)V / r^i V with the form f induces; requires j = e - i.
FinSympGroup fin_symp_quotient(const HermSpace& sp, int i,
                               std::vector<std::vector<long long>>* lift_out = nullptr,
                               std::vector<long long>* shape_out = nullptr);

struct SympPairs {
    // hyperbolic pairs (u_t, w_t): f(u_t, w_t) = eta_t * p^{val_t}, all cross
    // pairs orthogonal, both elements of order p^{E - val_t}
    std::vector<std::vector<long long>> u, w;
    std::vector<long long> eta, val, order;
    const FinSympGroup* g = nullptr;

    long long lagrangian_size() const;
    // exact coordinates of v in the pair basis: v = sum a_t u_t + b_t w_t
    void decompose(const std::vector<long long>& v,
                   std::vector<long long>& a, std::vector<long long>& b) const;
};

// Greedy hyperbolic pairing; throws if the form is degenerate.
SympPairs symplectic_pairs(const FinSympGroup& g);

} // namespace weil
