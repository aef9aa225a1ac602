#pragma once

#include <string>
#include <vector>

#include "weil/cyclo.hpp"

namespace weil {

enum class RingCase { Symplectic, Unramified, RamifiedOdd, RamifiedEven };

std::string ring_case_name(RingCase c);

// One of the four involutive local ring shapes. Elements are written
// x + y*theta (unramified) or x + y*pi (ramified); the symplectic case
// has no y coordinate.
struct RingSpec {
    RingCase rcase;
    int p = 3;       // odd prime residue characteristic
    int level = 2;   // e (Symplectic/Unramified) or ell (Ramified)
    long long u = 0; // theta^2 in the Unramified case; non-square unit

    // Derived quantities, filled by make_ring_spec.
    int e = 0;          // nilpotency degree of the maximal ideal
    int eprime = 0;     // additive exponent of R (R = Z/p^eprime)
    long long xmod = 0; // p^eprime
    long long ymod = 0; // modulus of the y coordinate, 0 when absent
    long long q = 0;    // residue field size (engine restriction: q = p)

    long long ring_size() const { return xmod * (ymod ? ymod : 1); }
    bool has_y() const { return ymod != 0; }
};

RingSpec make_ring_spec(RingCase c, int p, int level, long long u = -1);

struct RingElem {
    long long x = 0;
    long long y = 0;
    bool operator==(const RingElem& o) const { return x == o.x && y == o.y; }
    bool operator!=(const RingElem& o) const { return !(*this == o); }
};

// key for hashing/sorting
inline long long elem_key(const RingSpec& s, const RingElem& a) { return a.x + a.y * s.xmod; }

RingElem ring_zero(const RingSpec& s);
RingElem ring_one(const RingSpec& s);
RingElem ring_from_parts(const RingSpec& s, long long x, long long y);
RingElem ring_from_int(const RingSpec& s, long long n);

RingElem ring_add(const RingSpec& s, const RingElem& a, const RingElem& b);
RingElem ring_sub(const RingSpec& s, const RingElem& a, const RingElem& b);
RingElem ring_neg(const RingSpec& s, const RingElem& a);
RingElem ring_mul(const RingSpec& s, const RingElem& a, const RingElem& b);
RingElem ring_pow(const RingSpec& s, RingElem a, long long n);

// The involution *: fixes the x coordinate, negates y.
RingElem invol(const RingSpec& s, const RingElem& a);

bool is_unit(const RingSpec& s, const RingElem& a);
RingElem ring_inv(const RingSpec& s, const RingElem& a); // throws on non-unit

// R-linear map d: projection onto R, except onto the pi coordinate in the
// ramified even case.
long long d_map(const RingSpec& s, const RingElem& a);

// Membership in the ideal r^k (0 <= k <= e); r^0 = A, r^e = 0.
bool in_ideal(const RingSpec& s, const RingElem& a, int k);
int ideal_val(const RingSpec& s, const RingElem& a); // max k with a in r^k

enum class IdealPart { Full, RPart, SPart };
std::vector<RingElem> ideal_meet(const RingSpec& s, int k, IdealPart part);
long long ideal_size(const RingSpec& s, int k);
// divisors (xdiv, ydiv) with r^k = xdiv*R x ydiv*R_y coordinatewise
void ideal_divisors(const RingSpec& s, int k, long long& xdiv, long long& ydiv);

std::vector<RingElem> enumerate_ring(const RingSpec& s);
std::vector<RingElem> enumerate_units(const RingSpec& s);

// N = {a in A^x : a a* = 1}, enumerated exactly.
std::vector<RingElem> norm_one_group(const RingSpec& s);
// N intersect (1 + r^k), by direct filter.
std::vector<RingElem> norm_one_congruence(const RingSpec& s, int k);
// {1 + s : s in S meet r^k}; equals N cap (1 + r^k) when
// (r^k)^2 = 0.
std::vector<RingElem> one_plus_skew(const RingSpec& s, int k);
// {1 + s^2/2 + s : s in S meet r^k} — valid when (r^k)^2 lies in an ideal of
// square zero.
std::vector<RingElem> one_plus_halfsquare_skew(const RingSpec& s, int k);

// lambda(r) = zeta_{p^eprime}^r realized in Q(zeta_conductor); mu = lambda o d.
CycNum lambda_char(const RingSpec& s, long long r, int conductor);
CycNum mu_char(const RingSpec& s, const RingElem& a, int conductor);

// exact inverse of 2 modulo p^k (p odd)
long long half_mod(long long modulus);
long long inv_mod(long long a, long long modulus);
long long pow_ll(long long b, long long e);

} // namespace weil
