#include "weil/localring.hpp"

#include <algorithm>
#include <stdexcept>

namespace weil {

std::string ring_case_name(RingCase c) {
    switch (c) {
        case RingCase::Symplectic: return "symplectic";
        case RingCase::Unramified: return "unramified";
        case RingCase::RamifiedOdd: return "ramified-odd";
        case RingCase::RamifiedEven: return "ramified-even";
    }
    return "?";
}

long long pow_ll(long long b, long long e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

long long inv_mod(long long a, long long modulus) {
    long long t = 0, nt = 1, r = modulus, nr = ((a % modulus) + modulus) % modulus;
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::domain_error("inv_mod: not invertible");
    return ((t % modulus) + modulus) % modulus;
}

long long half_mod(long long modulus) { return inv_mod(2, modulus); }

namespace {
bool is_square_mod_p(long long a, int p) {
    a %= p;
    if (a < 0) a += p;
    for (long long t = 0; t < p; ++t)
        if (t * t % p == a) return true;
    return false;
}

long long default_nonsquare_unit(int p, long long lifted_mod) {
    if (p % 4 == 3) return lifted_mod - 1; // -1 is a non-square when p = 3 mod 4
    for (long long c = 2; c < p; ++c)
        if (!is_square_mod_p(c, p)) return c;
    throw std::logic_error("no non-square unit found");
}
} // namespace

RingSpec make_ring_spec(RingCase c, int p, int level, long long u) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("ring: p must be an odd prime");
    for (int d = 3; d * d <= p; d += 2)
        if (p % d == 0) throw std::invalid_argument("ring: p must be prime");
    RingSpec s;
    s.rcase = c;
    s.p = p;
    s.level = level;
    s.q = p;
    switch (c) {
        case RingCase::Symplectic:
            if (level < 2) throw std::invalid_argument("symplectic: level e must be >= 2");
            s.e = level;
            s.eprime = level;
            s.xmod = pow_ll(p, level);
            s.ymod = 0;
            break;
        case RingCase::Unramified:
            if (level < 2) throw std::invalid_argument("unramified: level e must be >= 2");
            s.e = level;
            s.eprime = level;
            s.xmod = pow_ll(p, level);
            s.ymod = s.xmod;
            s.u = (u >= 0) ? (u % s.xmod) : default_nonsquare_unit(p, s.xmod);
            if (s.u % p == 0 || is_square_mod_p(s.u, p))
                throw std::invalid_argument("unramified: u must be a non-square unit");
            break;
        case RingCase::RamifiedOdd:
            if (level < 2) throw std::invalid_argument("ramified-odd: level ell must be >= 2");
            s.e = 2 * level - 1;
            s.eprime = level;
            s.xmod = pow_ll(p, level);
            s.ymod = pow_ll(p, level - 1);
            break;
        case RingCase::RamifiedEven:
            if (level < 1) throw std::invalid_argument("ramified-even: level ell must be >= 1");
            s.e = 2 * level;
            s.eprime = level;
            s.xmod = pow_ll(p, level);
            s.ymod = s.xmod;
            break;
    }
    return s;
}

RingElem ring_zero(const RingSpec&) { return {0, 0}; }
RingElem ring_one(const RingSpec&) { return {1, 0}; }

RingElem ring_from_parts(const RingSpec& s, long long x, long long y) {
    RingElem r;
    r.x = ((x % s.xmod) + s.xmod) % s.xmod;
    r.y = s.has_y() ? ((y % s.ymod) + s.ymod) % s.ymod : 0;
    return r;
}

RingElem ring_from_int(const RingSpec& s, long long n) { return ring_from_parts(s, n, 0); }

RingElem ring_add(const RingSpec& s, const RingElem& a, const RingElem& b) {
    return ring_from_parts(s, a.x + b.x, a.y + b.y);
}

RingElem ring_sub(const RingSpec& s, const RingElem& a, const RingElem& b) {
    return ring_from_parts(s, a.x - b.x, a.y - b.y);
}

RingElem ring_neg(const RingSpec& s, const RingElem& a) { return ring_from_parts(s, -a.x, -a.y); }

RingElem ring_mul(const RingSpec& s, const RingElem& a, const RingElem& b) {
    switch (s.rcase) {
        case RingCase::Symplectic:
            return ring_from_parts(s, a.x * b.x, 0);
        case RingCase::Unramified:
            // theta^2 = u
            return ring_from_parts(s, a.x * b.x + s.u % s.xmod * (a.y * b.y % s.xmod) % s.xmod,
                                   a.x * b.y + a.y * b.x);
        case RingCase::RamifiedOdd:
        case RingCase::RamifiedEven:
            // pi^2 = p
            return ring_from_parts(s, a.x * b.x + (long long)s.p * (a.y * b.y),
                                   a.x * b.y + a.y * b.x);
    }
    return {};
}

RingElem ring_pow(const RingSpec& s, RingElem a, long long n) {
    RingElem r = ring_one(s);
    while (n > 0) {
        if (n & 1) r = ring_mul(s, r, a);
        a = ring_mul(s, a, a);
        n >>= 1;
    }
    return r;
}

RingElem invol(const RingSpec& s, const RingElem& a) { return ring_from_parts(s, a.x, -a.y); }

bool is_unit(const RingSpec& s, const RingElem& a) {
    if (s.rcase == RingCase::Unramified) return a.x % s.p != 0 || a.y % s.p != 0;
    return a.x % s.p != 0;
}

RingElem ring_inv(const RingSpec& s, const RingElem& a) {
    if (!is_unit(s, a)) throw std::domain_error("ring_inv: not a unit");
    if (s.rcase == RingCase::Symplectic) return ring_from_parts(s, inv_mod(a.x, s.xmod), 0);
    // (x + y w)^{-1} = (x - y w) / (x^2 - w^2 y^2), w = theta or pi
    long long w2 = (s.rcase == RingCase::Unramified) ? s.u : s.p;
    long long norm = ((a.x * a.x - w2 % s.xmod * (a.y * a.y % s.xmod)) % s.xmod + s.xmod) % s.xmod;
    long long ninv = inv_mod(norm, s.xmod);
    return ring_from_parts(s, a.x * ninv, -a.y * ninv);
}

long long d_map(const RingSpec& s, const RingElem& a) {
    return s.rcase == RingCase::RamifiedEven ? a.y : a.x;
}

namespace {
// exponents (a, b) such that r^k = { x in p^a R } x { y in p^b R_y }
void ideal_shape(const RingSpec& s, int k, long long& xdiv, long long& ydiv) {
    switch (s.rcase) {
        case RingCase::Symplectic:
        case RingCase::Unramified:
            xdiv = pow_ll(s.p, std::min<long long>(k, s.eprime));
            ydiv = xdiv;
            return;
        case RingCase::RamifiedOdd:
        case RingCase::RamifiedEven: {
            int a = (k % 2 == 0) ? k / 2 : k / 2 + 1;
            int b = k / 2;
            xdiv = pow_ll(s.p, std::min<long long>(a, s.eprime));
            long long ylev = s.rcase == RingCase::RamifiedOdd ? s.level - 1 : s.level;
            ydiv = pow_ll(s.p, std::min<long long>(b, ylev));
            return;
        }
    }
}
} // namespace

void ideal_divisors(const RingSpec& s, int k, long long& xdiv, long long& ydiv) {
    if (k >= s.e) {
        xdiv = s.xmod;
        ydiv = s.has_y() ? s.ymod : 1;
        return;
    }
    if (k <= 0) {
        xdiv = 1;
        ydiv = 1;
        return;
    }
    ideal_shape(s, k, xdiv, ydiv);
    if (!s.has_y()) ydiv = 1;
}

bool in_ideal(const RingSpec& s, const RingElem& a, int k) {
    if (k <= 0) return true;
    if (k >= s.e) return a.x == 0 && a.y == 0;
    long long xd, yd;
    ideal_shape(s, k, xd, yd);
    if (a.x % xd != 0) return false;
    if (s.has_y() && a.y % yd != 0) return false;
    return true;
}

int ideal_val(const RingSpec& s, const RingElem& a) {
    int k = 0;
    while (k < s.e && in_ideal(s, a, k + 1)) ++k;
    return k;
}

long long ideal_size(const RingSpec& s, int k) {
    if (k >= s.e) return 1;
    long long xd, yd;
    ideal_shape(s, k, xd, yd);
    long long n = s.xmod / xd;
    if (s.has_y()) n *= s.ymod / yd;
    return n;
}

std::vector<RingElem> ideal_meet(const RingSpec& s, int k, IdealPart part) {
    if (k < 0 || k > s.e) throw std::invalid_argument("ideal_meet: k out of range");
    long long xd, yd;
    if (k >= s.e) { xd = s.xmod; yd = s.has_y() ? s.ymod : 1; }
    else ideal_shape(s, k, xd, yd);
    std::vector<RingElem> out;
    if (part == IdealPart::RPart) {
        for (long long x = 0; x < s.xmod; x += xd) out.push_back(ring_from_parts(s, x, 0));
        return out;
    }
    if (part == IdealPart::SPart) {
        if (!s.has_y()) return {ring_zero(s)};
        for (long long y = 0; y < s.ymod; y += yd) out.push_back(ring_from_parts(s, 0, y));
        return out;
    }
    for (long long x = 0; x < s.xmod; x += xd) {
        if (!s.has_y()) { out.push_back(ring_from_parts(s, x, 0)); continue; }
        for (long long y = 0; y < s.ymod; y += yd) out.push_back(ring_from_parts(s, x, y));
    }
    return out;
}

std::vector<RingElem> enumerate_ring(const RingSpec& s) { return ideal_meet(s, 0, IdealPart::Full); }

std::vector<RingElem> enumerate_units(const RingSpec& s) {
    std::vector<RingElem> out;
    for (const auto& a : enumerate_ring(s))
        if (is_unit(s, a)) out.push_back(a);
    return out;
}

std::vector<RingElem> norm_one_group(const RingSpec& s) {
    std::vector<RingElem> out;
    for (const auto& a : enumerate_units(s))
        if (ring_mul(s, a, invol(s, a)) == ring_one(s)) out.push_back(a);
    return out;
}

std::vector<RingElem> norm_one_congruence(const RingSpec& s, int k) {
    std::vector<RingElem> out;
    for (const auto& a : norm_one_group(s))
        if (in_ideal(s, ring_sub(s, a, ring_one(s)), k)) out.push_back(a);
    return out;
}

std::vector<RingElem> one_plus_skew(const RingSpec& s, int k) {
    std::vector<RingElem> out;
    for (const auto& v : ideal_meet(s, k, IdealPart::SPart))
        out.push_back(ring_add(s, ring_one(s), v));
    return out;
}

std::vector<RingElem> one_plus_halfsquare_skew(const RingSpec& s, int k) {
    RingElem half = ring_from_int(s, half_mod(s.xmod));
    std::vector<RingElem> out;
    for (const auto& v : ideal_meet(s, k, IdealPart::SPart)) {
        RingElem z = ring_add(s, ring_mul(s, half, ring_mul(s, v, v)), v);
        out.push_back(ring_add(s, ring_one(s), z));
    }
    std::sort(out.begin(), out.end(), [&](const RingElem& a, const RingElem& b) {
        return elem_key(s, a) < elem_key(s, b);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CycNum lambda_char(const RingSpec& s, long long r, int conductor) {
    long long base = s.xmod; // additive exponent of R
    if (conductor % base != 0)
        throw std::invalid_argument("lambda_char: conductor not divisible by p^eprime");
    long long rr = ((r % base) + base) % base;
    return CycNum::root_of_unity(conductor, rr * (conductor / base));
}

CycNum mu_char(const RingSpec& s, const RingElem& a, int conductor) {
    return lambda_char(s, d_map(s, a), conductor);
}

} // namespace weil
