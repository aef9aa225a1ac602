#pragma once

#include "weil/hermitian.hpp"
#include "weil/matrix.hpp"

namespace weil {

// Element (r, v) of the Heisenberg group R x G of a finite symplectic group,
// with product (r,u)(s,v) = (r+s+f(u,v), u+v).
struct HeisElem {
    long long r = 0;
    std::vector<long long> v;
};

HeisElem heis_mul(const FinSympGroup& g, const HeisElem& a, const HeisElem& b);
HeisElem heis_inv(const FinSympGroup& g, const HeisElem& a);

// Permutation-with-scalar operator on the Schrodinger basis; scalars are
// powers of lambda stored as exponents mod p^E.
struct MonomialOp {
    std::vector<long long> perm;  // basis index -> image index
    std::vector<long long> sexp;  // lambda exponent per source index
};

// Monomial Schrodinger model of type lambda for a finite symplectic group:
// basis indexed by a transversal of the Lagrangian spanned by the pair
// vectors u_t, with action
//   S(s,v) e_c = lambda(s + f(v,c) - f(c', l)) e_{c'},  v + c = l + c'.
class SchrodingerModel {
public:
    SchrodingerModel(FinSympGroup g, int conductor);

    const FinSympGroup& group() const { return g_; }
    const SympPairs& pairs() const { return pairs_; }
    long long dim() const { return dim_; }
    long long lambda_mod() const { return pE_; }
    int conductor() const { return conductor_; }

    long long index_of(const std::vector<long long>& btuple) const;
    std::vector<long long> tuple_of(long long idx) const;
    // the transversal vector c for a basis index
    std::vector<long long> rep_of(long long idx) const;

    MonomialOp op(long long r, const std::vector<long long>& v) const;
    MonomialOp op(const HeisElem& k) const { return op(k.r, k.v); }
    // S(r,v) e_c = lambda^{exp} e_{c'}; returns (c', exp)
    std::pair<long long, long long> apply_basis(long long r, const std::vector<long long>& v,
                                                long long cidx) const;
    // the unique c with S(0,v) e_c supported on e_b
    long long preimage_index(const std::vector<long long>& v, long long b) const;
    MonomialOp compose(const MonomialOp& a, const MonomialOp& b) const; // a after b

    CycMatrix dense(const MonomialOp& m) const;
    CycMatrix dense(long long r, const std::vector<long long>& v) const {
        return dense(op(r, v));
    }
    CycNum lambda_pow(long long e) const;

    // generators of the Heisenberg group: (1,0) and (0, coordinate gens)
    std::vector<HeisElem> heis_generators() const;

    // Schur number sum_k |tr S(k)|^2 / |H|; equals 1 exactly iff irreducible.
    Rational commutant_dimension_by_traces() const;

private:
    FinSympGroup g_;
    SympPairs pairs_;
    int conductor_;
    long long pE_;
    long long dim_;
    std::vector<long long> radix_;
};

// P = |W|^{-1} sum_{u in W} S(0,u) for a subgroup W given by coordinate
// vectors; for W = (min)V this is the projection onto the bottom layer.
CycMatrix averaging_projection(const SchrodingerModel& model,
                               const std::vector<std::vector<long long>>& subgroup);

// Exact commutant dimension of a set of operators (nullspace of the exact
// commutation system on dim x dim matrices).
long long commutant_dimension(const std::vector<CycMatrix>& ops, int conductor,
                              std::vector<CycMatrix>* basis_out = nullptr);

// The H_t analysis of the relative model: restriction of S' to the subgroup
// generated by the center and (0, x), x in a subgroup I of the quotient.
struct HtReport {
    long long subgroup_index = 0;   // [H(U^perp) : H_t] = [Q : I]
    long long commutant_dim = 0;    // from the exact nullspace
    Rational trace_formula;         // same quantity via the character sum
    bool commutant_commutative = false;
    long long double_commutant_dim = 0;
    long long num_components = 0;   // = commutant_dim when multiplicity free
    bool components_equal_dim = false;
    long long component_dim = 0;
};

HtReport ht_induction_check(const SchrodingerModel& relative_model, const SubgroupHNF& image);

} // namespace weil
