#pragma once

#include <functional>
#include <map>
#include <vector>

#include "weil/cyclo.hpp"

namespace weil {

// --- Subgroups of G = prod_k Z/mods[k], represented by integer lattices ---
//
// A subgroup is stored as the column HNF basis of the lattice
// L = span(generators) + diag(mods) inside Z^K. The HNF is upper triangular
// with positive diagonal and entries above each pivot reduced, so equal
// subgroups have equal representations.

struct SubgroupHNF {
    std::vector<long long> mods;               // coordinate moduli
    std::vector<std::vector<long long>> basis; // K columns, upper triangular

    long long group_order() const;    // |G|
    long long subgroup_order() const; // |L / diag|
    long long index() const;          // [G : L]
    bool contains(std::vector<long long> v) const;
    bool operator==(const SubgroupHNF& o) const { return mods == o.mods && basis == o.basis; }
};

SubgroupHNF subgroup_from_generators(const std::vector<long long>& mods,
                                     const std::vector<std::vector<long long>>& gens);

// Kernel of the map G -> prod_r Z/eqmods[r], v |-> B v, as a subgroup of G.
// B has eqmods.size() rows and mods.size() columns.
SubgroupHNF pairing_kernel(const std::vector<long long>& mods,
                           const std::vector<long long>& eqmods,
                           const std::vector<std::vector<long long>>& B);

// --- Structure of a finite abelian group given by black-box multiplication ---
//
// Elements are referenced by their index in an external enumeration.

struct AbelianStructure {
    std::vector<int> gen_index;                // chosen independent generators
    std::vector<long long> orders;             // cyclic orders d_j of those generators
    std::vector<std::vector<long long>> dlog;  // element index -> exponents (y_j mod d_j)
    long long exponent = 1;                    // lcm of the d_j

    long long num_elements() const { return (long long)dlog.size(); }
    long long num_characters() const;
};

AbelianStructure abelian_structure(
    long long n,
    const std::function<long long(long long, long long)>& mul,
    long long identity_index);

// Linear characters of the group, realized in Q(zeta_conductor).
// Character c (a tuple of residues c_j mod d_j) sends element v to
// zeta^{ sum_j c_j * dlog_j(v) * conductor / d_j }.
struct CharacterTable {
    const AbelianStructure* st;
    int conductor;
    std::vector<std::vector<long long>> labels; // all characters as tuples

    CycNum value(size_t char_idx, long long elem_idx) const;
    size_t size() const { return labels.size(); }
};

CharacterTable character_table(const AbelianStructure& st, int conductor);

// Smallest exponent table utilities
long long lcm_ll(long long a, long long b);

} // namespace weil
