#include "weil/bigint.hpp"

#include <algorithm>
#include <cmath>

namespace weil {

namespace {
constexpr long long kSmallMax = (1LL << 62);

bool add_small_ok(long long a, long long b, long long& out) {
    return !__builtin_add_overflow(a, b, &out) && out < kSmallMax && out > -kSmallMax;
}
bool mul_small_ok(long long a, long long b, long long& out) {
    return !__builtin_mul_overflow(a, b, &out) && out < kSmallMax && out > -kSmallMax;
}
} // namespace

std::vector<uint32_t> BigInt::mag() const {
    if (!big_.empty()) return big_;
    std::vector<uint32_t> m;
    unsigned long long v = small_ < 0 ? -(unsigned long long)small_ : (unsigned long long)small_;
    while (v) { m.push_back((uint32_t)(v & 0xffffffffu)); v >>= 32; }
    return m;
}

void BigInt::make_big() {
    if (!big_.empty()) return;
    sign_ = small_ < 0 ? -1 : (small_ > 0 ? 1 : 0);
    big_ = mag();
    if (big_.empty()) big_.push_back(0); // keep big form marker distinct from inline 0
}

void BigInt::normalize() {
    while (!big_.empty() && big_.back() == 0) big_.pop_back();
    if (big_.empty()) { small_ = 0; sign_ = 0; return; }
    if (big_.size() <= 2) {
        unsigned long long v = big_[0];
        if (big_.size() == 2) v |= (unsigned long long)big_[1] << 32;
        if (v < (unsigned long long)kSmallMax) {
            small_ = sign_ < 0 ? -(long long)v : (long long)v;
            big_.clear();
            sign_ = 0;
        }
    }
}

BigInt BigInt::from_mag(std::vector<uint32_t> m, int sign) {
    BigInt r;
    r.big_ = std::move(m);
    r.sign_ = sign;
    r.normalize();
    return r;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

int BigInt::cmp(const BigInt& a, const BigInt& b) {
    if (a.big_.empty() && b.big_.empty())
        return a.small_ < b.small_ ? -1 : (a.small_ > b.small_ ? 1 : 0);
    int sa = a.big_.empty() ? (a.small_ < 0 ? -1 : (a.small_ > 0 ? 1 : 0)) : a.sign_;
    int sb = b.big_.empty() ? (b.small_ < 0 ? -1 : (b.small_ > 0 ? 1 : 0)) : b.sign_;
    if (sa != sb) return sa < sb ? -1 : 1;
    int c = cmp_mag(a.mag(), b.mag());
    return sa < 0 ? -c : c;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
    unsigned long long carry = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        unsigned long long s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        r[i] = (uint32_t)(s & 0xffffffffu);
        carry = s >> 32;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Requires |a| >= |b|.
std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r = a;
    long long borrow = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        long long s = (long long)r[i] - borrow - (i < b.size() ? b[i] : 0);
        if (s < 0) { s += (1LL << 32); borrow = 1; } else borrow = 0;
        r[i] = (uint32_t)s;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        unsigned long long carry = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            unsigned long long cur = r[i + j] + (unsigned long long)a[i] * b[j] + carry;
            r[i + j] = (uint32_t)(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            unsigned long long cur = r[k] + carry;
            r[k] = (uint32_t)(cur & 0xffffffffu);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Knuth algorithm D, base 2^32.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (b.empty()) throw std::domain_error("BigInt: division by zero");
    if (cmp_mag(a, b) < 0) { q.clear(); r = a; return; }
    if (b.size() == 1) {
        q.assign(a.size(), 0);
        unsigned long long rem = 0;
        for (size_t i = a.size(); i-- > 0;) {
            unsigned long long cur = (rem << 32) | a[i];
            q[i] = (uint32_t)(cur / b[0]);
            rem = cur % b[0];
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        r.clear();
        if (rem) r.push_back((uint32_t)rem);
        return;
    }
    int shift = __builtin_clz(b.back());
    size_t n = b.size(), m = a.size() - n;
    std::vector<uint32_t> u(a.size() + 1, 0), v(n, 0);
    for (size_t i = a.size(); i-- > 0;) {
        u[i] |= shift ? (a[i] << shift) : a[i];
        if (shift && i + 1 <= a.size()) u[i + 1] |= (uint32_t)((unsigned long long)a[i] >> (32 - shift));
    }
    for (size_t i = n; i-- > 0;) {
        v[i] = shift ? (b[i] << shift) : b[i];
        if (shift && i > 0) v[i] |= (uint32_t)((unsigned long long)b[i - 1] >> (32 - shift));
    }
    q.assign(m + 1, 0);
    for (size_t j = m + 1; j-- > 0;) {
        unsigned long long num = ((unsigned long long)u[j + n] << 32) | u[j + n - 1];
        unsigned long long qhat = num / v[n - 1];
        unsigned long long rhat = num % v[n - 1];
        while (qhat >= (1ULL << 32) ||
               qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += v[n - 1];
            if (rhat >= (1ULL << 32)) break;
        }
        long long borrow = 0;
        unsigned long long carry = 0;
        for (size_t i = 0; i < n; ++i) {
            unsigned long long p = qhat * v[i] + carry;
            carry = p >> 32;
            long long t = (long long)u[i + j] - (long long)(p & 0xffffffffu) - borrow;
            if (t < 0) { t += (1LL << 32); borrow = 1; } else borrow = 0;
            u[i + j] = (uint32_t)t;
        }
        long long t = (long long)u[j + n] - (long long)carry - borrow;
        if (t < 0) {
            t += (1LL << 32);
            --qhat;
            unsigned long long c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                unsigned long long s = (unsigned long long)u[i + j] + v[i] + c2;
                u[i + j] = (uint32_t)(s & 0xffffffffu);
                c2 = s >> 32;
            }
            t += (long long)c2;
        }
        u[j + n] = (uint32_t)t;
        q[j] = (uint32_t)qhat;
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    r.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        r[i] = shift ? (u[i] >> shift) : u[i];
        if (shift && i + 1 < u.size()) r[i] |= (uint32_t)((unsigned long long)u[i + 1] << (32 - shift));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.big_.empty() && b.big_.empty()) {
        long long out;
        if (add_small_ok(a.small_, b.small_, out)) return BigInt(out);
    }
    int sa = a.is_negative() ? -1 : (a.is_zero() ? 0 : 1);
    int sb = b.is_negative() ? -1 : (b.is_zero() ? 0 : 1);
    if (sa == 0) return b;
    if (sb == 0) return a;
    auto ma = a.mag(), mb = b.mag();
    if (sa == sb) return BigInt::from_mag(BigInt::add_mag(ma, mb), sa);
    int c = BigInt::cmp_mag(ma, mb);
    if (c == 0) return BigInt(0);
    if (c > 0) return BigInt::from_mag(BigInt::sub_mag(ma, mb), sa);
    return BigInt::from_mag(BigInt::sub_mag(mb, ma), sb);
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt BigInt::operator-() const {
    if (big_.empty()) {
        if (small_ != kSmallMax) return BigInt(-small_);
    }
    BigInt r = *this;
    r.make_big();
    r.sign_ = -r.sign_;
    r.normalize();
    return r;
}

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.big_.empty() && b.big_.empty()) {
        long long out;
        if (mul_small_ok(a.small_, b.small_, out)) return BigInt(out);
    }
    if (a.is_zero() || b.is_zero()) return BigInt(0);
    int s = (a.is_negative() ? -1 : 1) * (b.is_negative() ? -1 : 1);
    return BigInt::from_mag(BigInt::mul_mag(a.mag(), b.mag()), s);
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    if (a.big_.empty() && b.big_.empty()) {
        q = BigInt(a.small_ / b.small_);
        r = BigInt(a.small_ % b.small_);
        return;
    }
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.mag(), b.mag(), qm, rm);
    int sa = a.is_negative() ? -1 : 1, sb = b.is_negative() ? -1 : 1;
    q = from_mag(std::move(qm), sa * sb);
    r = from_mag(std::move(rm), sa);
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    if (a.is_negative()) a = -a;
    if (b.is_negative()) b = -b;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    return a;
}

bool BigInt::fits_ll() const { return big_.empty(); }

long long BigInt::to_ll() const {
    if (!big_.empty()) throw std::overflow_error("BigInt: value too large for long long");
    return small_;
}

double BigInt::to_double() const {
    if (big_.empty()) return (double)small_;
    double r = 0;
    for (size_t i = big_.size(); i-- > 0;) r = r * 4294967296.0 + big_[i];
    return sign_ < 0 ? -r : r;
}

BigInt BigInt::from_string(const std::string& s) {
    BigInt r(0);
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
        r = r * BigInt(10) + BigInt(s[i] - '0');
    }
    return neg ? -r : r;
}

std::string BigInt::str() const {
    if (big_.empty()) return std::to_string(small_);
    std::string out;
    std::vector<uint32_t> cur = big_, q, r;
    std::vector<uint32_t> ten{10};
    while (!cur.empty()) {
        divmod_mag(cur, ten, q, r);
        out.push_back(char('0' + (r.empty() ? 0 : r[0])));
        cur = q;
    }
    if (sign_ < 0) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    reduce();
}

void Rational::reduce() {
    if (den_.is_negative()) { num_ = -num_; den_ = -den_; }
    if (num_.is_zero()) { den_ = BigInt(1); return; }
    if (den_.is_one()) return;
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) { num_ = num_ / g; den_ = den_ / g; }
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_.is_one() && b.den_.is_one()) {
        Rational r;
        r.num_ = a.num_ + b.num_;
        return r;
    }
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_.is_one() && b.den_.is_one()) {
        Rational r;
        r.num_ = a.num_ * b.num_;
        return r;
    }
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::string Rational::str() const {
    if (den_.is_one()) return num_.str();
    return num_.str() + "/" + den_.str();
}

} // namespace weil
