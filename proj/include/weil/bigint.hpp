#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace weil {

// Signed arbitrary-precision integer with an inline int64 fast path.
// Values that fit in [-2^62, 2^62] never touch the heap.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) : small_(v) {}

    static BigInt from_string(const std::string& s);

    bool is_zero() const { return big_.empty() ? small_ == 0 : false; }
    bool is_negative() const { return big_.empty() ? small_ < 0 : sign_ < 0; }
    bool is_one() const { return big_.empty() && small_ == 1; }

    // Valid only when the value fits; callers guard with fits_ll().
    bool fits_ll() const;
    long long to_ll() const;
    double to_double() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    BigInt operator-() const;
    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

    // Truncated division (quotient rounds toward zero, like C++ '/').
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    static BigInt gcd(BigInt a, BigInt b);

    bool operator==(const BigInt& o) const { return cmp(*this, o) == 0; }
    bool operator!=(const BigInt& o) const { return cmp(*this, o) != 0; }
    bool operator<(const BigInt& o) const { return cmp(*this, o) < 0; }
    bool operator<=(const BigInt& o) const { return cmp(*this, o) <= 0; }
    bool operator>(const BigInt& o) const { return cmp(*this, o) > 0; }
    bool operator>=(const BigInt& o) const { return cmp(*this, o) >= 0; }

    std::string str() const;

private:
    // Inline form: big_ empty, value in small_.
    // Big form: big_ holds base-2^32 limbs (little endian, no leading zero),
    // sign in sign_, small_ ignored.
    long long small_ = 0;
    int sign_ = 0;
    std::vector<uint32_t> big_;

    static int cmp(const BigInt& a, const BigInt& b);
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
    void make_big();
    void normalize();
    std::vector<uint32_t> mag() const;
    static BigInt from_mag(std::vector<uint32_t> m, int sign);
};

// Rational number, always stored reduced with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_integer() const { return den_.is_one(); }
    bool is_negative() const { return num_.is_negative(); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    double to_double() const { return num_.to_double() / den_.to_double(); }
    std::string str() const;

private:
    BigInt num_, den_;
    void reduce();
};

} // namespace weil
