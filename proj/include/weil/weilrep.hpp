#pragma once

#include "weil/heisenberg.hpp"
#include "weil/unitary.hpp"

namespace weil {

// Projective Weil operator: intertwines the Schrodinger action with its
// g-twist, normalized so the first nonzero entry (row major) is 1.
struct ProjOp {
    CycMatrix op;
    UElem g;
};

// T = sum_{v in V} S(0, gv) E_{ab} S(0,v)^{-1} over deterministic probes
// E_{ab} until nonzero; the result is verified to intertwine on a generating
// set of the Heisenberg group.
ProjOp intertwiner(const SchrodingerModel& model, const HermSpace& sp, const UElem& g);

// Genuine lift on an abelian subgroup: scalar-corrected intertwiners with
// exact generator orders and pairwise commutation, so products along the
// discrete-log coordinates form an exactly multiplicative table.
struct AbelianLift {
    std::vector<UElem> elems;       // the subgroup B in a fixed order
    AbelianStructure st;            // structure with dlog per element
    // per canonical generator: powers 0..order-1 of the corrected operator
    std::vector<std::vector<CycMatrix>> gen_pows;
    long long twist_class_size = 1; // number of valid corrections (|B^|)
    int dim = 0;
    int conductor = 1;
    // joint fixed vector of all operators, present for congruence subgroups;
    // its existence certifies multiplicativity of the whole table
    bool has_reference = false;
    CycMatrix reference;
};

AbelianLift abelian_lift(const SchrodingerModel& model, const HermSpace& sp,
                         const std::vector<UElem>& B);

// operator of one element (product over the dlog coordinates)
CycMatrix lift_op(const AbelianLift& lift, long long elem_idx);
// visit every element with its operator, sharing prefix products
void enumerate_with_ops(const AbelianLift& lift,
                        const std::function<void(long long, const CycMatrix&)>& fn);

// Verify L(z)L(w) = L(zw) over the full table. Uses the Schur scalar-ratio
// argument backed by the verified irreducibility certificate; for small
// dimensions the dense products are compared directly as well.
bool lift_multiplicative(const SchrodingerModel& model, const AbelianLift& lift,
                         const HermSpace& sp, long long dense_budget = 4000000);

// dims[k] = dim of the phi_k-eigenspace of the lift inside ker(Pbot)
std::vector<long long> eigenspace_dims(const SchrodingerModel& model, const AbelianLift& lift,
                                       const CharacterTable& chars, const CycMatrix& Pbot);

// isotypic dimensions inside Top for explicit character value vectors
// (values[t][e] = chi_t(lift.elems[e]))
std::vector<long long> isotypic_dims(const SchrodingerModel& model, const AbelianLift& lift,
                                     const std::vector<std::vector<CycNum>>& values,
                                     const CycMatrix& Pbot);

// Restriction of the projective operators to each nonzero eigenspace and the
// exact commutant dimensions there, plus the vanishing of cross blocks.
struct CommutantReport {
    std::vector<long long> block_dims;      // commutant dim per nonzero eigenspace
    bool cross_blocks_vanish = true;
    long long total = 0;                    // sum of blocks when cross blocks vanish
    bool commutative = true;
};

CommutantReport multiplicity_free_check(const SchrodingerModel& model, const HermSpace& sp,
                                        const std::vector<UElem>& group_generators,
                                        const AbelianLift& liftN, const CharacterTable& chars,
                                        const std::vector<size_t>& nonzero_chars,
                                        const CycMatrix& Pbot);

// greedy generating subset certified by closure order
std::vector<UElem> minimal_generating_subset(const HermSpace& sp, const std::vector<UElem>& pool,
                                             long long target_order);

// --- float-shadow variants (oracle; 1e-8 tolerance) ---

FloatMatrix intertwiner_float(const SchrodingerModel& model, const HermSpace& sp, const UElem& g);

struct FloatLift {
    std::vector<UElem> elems;
    AbelianStructure st;
    std::vector<FloatMatrix> ops;
};

FloatLift abelian_lift_float(const SchrodingerModel& model, const HermSpace& sp,
                             const std::vector<UElem>& B);
std::vector<long long> eigenspace_dims_float(const SchrodingerModel& model, const FloatLift& lift,
                                             const CharacterTable& chars, const FloatMatrix& Pbot,
                                             bool* agree_flag);

} // namespace weil
