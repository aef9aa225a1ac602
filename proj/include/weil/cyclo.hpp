#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "weil/bigint.hpp"

namespace weil {

// Exact element of the cyclotomic field Q(zeta_M), stored as rational
// coordinates in the power basis 1, zeta, ..., zeta^{phi(M)-1}.
class CycNum {
public:
    CycNum() : conductor_(1), coeffs_(1) {}
    explicit CycNum(Rational r) : conductor_(1), coeffs_{std::move(r)} {}
    CycNum(long long n) : conductor_(1), coeffs_{Rational(n)} {}

    static CycNum zero(int conductor);
    static CycNum one(int conductor);
    // reduce a raw power-basis convolution (length up to 2*phi(M)-1)
    static CycNum from_convolution(int conductor, const std::vector<Rational>& conv);
    // zeta_M^k, reduced into the power basis. k may be any integer.
    static CycNum root_of_unity(int conductor, long long k);
    static CycNum from_rational(int conductor, Rational r);

    int conductor() const { return conductor_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const;
    Rational rational_part() const; // valid only when is_rational()

    friend CycNum operator+(const CycNum& a, const CycNum& b);
    friend CycNum operator-(const CycNum& a, const CycNum& b);
    friend CycNum operator*(const CycNum& a, const CycNum& b);
    CycNum operator-() const;
    CycNum& operator+=(const CycNum& o) { *this = *this + o; return *this; }
    CycNum& operator-=(const CycNum& o) { *this = *this - o; return *this; }
    CycNum& operator*=(const CycNum& o) { *this = *this * o; return *this; }

    CycNum inverse() const; // throws std::domain_error on zero
    CycNum conj() const;    // complex conjugation, zeta -> zeta^{M-1}
    CycNum pow(long long e) const;

    bool operator==(const CycNum& o) const;
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    // If this is +-zeta_M^k, returns (sign, k); otherwise nullopt.
    std::optional<std::pair<int, int>> as_signed_root() const;

    std::complex<double> to_complex() const;
    std::string str() const;

    // Conversion into the power basis of Q(zeta_{M'}) for M | M'.
    CycNum embed(int conductor) const;

    static int euler_phi(int n);

private:
    int conductor_;
    std::vector<Rational> coeffs_; // size euler_phi(conductor_)
    void trim();
};

// Coerce two elements to the lcm of their conductors.
std::pair<CycNum, CycNum> coerce(const CycNum& a, const CycNum& b);

} // namespace weil
