#pragma once

#include <string>
#include <unordered_map>

#include "weil/hermitian.hpp"

namespace weil {

struct UElem {
    int m = 0;
    std::vector<RingElem> a; // row-major m x m
    RingElem& at(int i, int j) { return a[size_t(i) * m + j]; }
    const RingElem& at(int i, int j) const { return a[size_t(i) * m + j]; }
    bool operator==(const UElem& o) const { return m == o.m && a == o.a; }
};

UElem u_identity(const HermSpace& sp);
UElem u_scalar(const HermSpace& sp, const RingElem& z);
UElem u_mul(const HermSpace& sp, const UElem& g, const UElem& h);
UElem u_inv(const HermSpace& sp, const UElem& g);
Vec u_apply(const HermSpace& sp, const UElem& g, const Vec& v);
bool is_unitary(const HermSpace& sp, const UElem& g);
// g in Omega(r^k), i.e. gv = v mod r^k V for all v
bool in_congruence(const HermSpace& sp, const UElem& g, int k);
std::string u_key(const HermSpace& sp, const UElem& g);

// rho_{a,u,v}(x) = x + a h(u,x) v - eps a^* h(v,x) u; u, v isotropic orthogonal
UElem eichler(const HermSpace& sp, const RingElem& a, const Vec& u, const Vec& v);
// tau_{a,u}(x) = x + a h(u,x) u; a^* = -eps a, u isotropic
UElem transvection(const HermSpace& sp, const RingElem& a, const Vec& u);

// explicit congruence lifts on a hyperbolic plane plus an orthogonal slot:
// u -> u, v -> b u + v + a w, w -> c u + w with b = -eps a a^* d / 2,
// c = -eps a^* d, d = h(w,w)
UElem plane_slot_mixer(const HermSpace& sp, const Vec& u, const Vec& v, const Vec& w,
                       const RingElem& a);
// diag((1+r)^{-1}, 1+r) on a hyperbolic plane
UElem plane_torus(const HermSpace& sp, const Vec& u, const Vec& v, const RingElem& z);
// the 2x2 congruence element on an orthogonal basis {t, v} of an anisotropic
// plane: [[1+b, a'],[a, 1+b']]
UElem aniso_mixer(const HermSpace& sp, const Vec& t, const Vec& v, const RingElem& a);

struct GroupStore {
    std::vector<UElem> elems;
    std::unordered_map<std::string, int> index;
    std::vector<UElem> gens;
    int layer = 0; // congruence level the enumeration was produced at

    int find(const HermSpace& sp, const UElem& g) const {
        auto it = index.find(u_key(sp, g));
        return it == index.end() ? -1 : it->second;
    }
    long long size() const { return (long long)elems.size(); }
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full enumeration by layered lifting: the residue group is enumerated by
// isometric-frame backtracking over A/r, then lifted layer by layer through
// the linearized isometry condition.
GroupStore enumerate_group(const HermSpace& sp, long long budget = 1000000);
// Plain filter over all matrices; tiny instances only.
GroupStore enumerate_group_bruteforce(const HermSpace& sp, long long budget = 2000000);

std::vector<int> congruence_filter(const HermSpace& sp, const GroupStore& st, int k);

// Standard generator pool: transvections, Eichler elements, plane tori and
// Weyl flips, plane swaps, scalars from N, slot mixers, and full 2x2
// subgroups on anisotropic slot pairs.
std::vector<UElem> generator_pool(const HermSpace& sp, long long subgroup_budget = 400000);

std::vector<UElem> group_closure(const HermSpace& sp, const std::vector<UElem>& gens,
                                 long long budget = 1000000);

// alpha_t(g) = mu(h(gt, t)); requires g in Omega(r^i) with (r^i)^2 = 0
CycNum alpha_char(const HermSpace& sp, const Vec& t, const UElem& g, int i, int conductor);

// indices of G_t = {g : gt = t mod r^j V} inside an enumerated store
std::vector<int> stabilizer_indices(const HermSpace& sp, const GroupStore& st, const Vec& t, int j);

// Gamma(g) = gt - t + r^i V as an element of the quotient jV/iV (j = e - i)
struct GammaResult {
    SubgroupHNF image;
    long long index = 0;
    bool homomorphism = false;
    long long pairs_checked = 0;
};
GammaResult gamma_image(const HermSpace& sp, const std::vector<UElem>& omega_j,
                        const Vec& t, int i, long long hom_pair_budget = 2000000);

// [V : E] where E is the subgroup generated by {gt - t : g in U(V)};
// with use_invariant_closure the input is treated as a generating set of the
// group and E is closed under its action.
long long affine_span_index(const HermSpace& sp, const std::vector<UElem>& gens,
                            const Vec& t, bool use_invariant_closure);

// on-disk cache of enumerations (see README for the byte layout)
bool store_write(const std::string& dir, const std::string& key, const HermSpace& sp,
                 const GroupStore& st);
bool store_read(const std::string& dir, const std::string& key, const HermSpace& sp,
                GroupStore& st);
std::string store_cache_key(const HermSpace& sp, long long budget);

} // namespace weil
