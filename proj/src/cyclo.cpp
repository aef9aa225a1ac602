#include "weil/cyclo.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <cmath>

namespace weil {

namespace {

// Integer polynomial helpers for building cyclotomic polynomials.
using IPoly = std::vector<long long>; // coefficient of x^i at index i

IPoly ipoly_div(const IPoly& a, const IPoly& b) {
    // exact division, used for x^n - 1 divided by products of cyclotomics
    IPoly r = a, q(a.size() - b.size() + 1, 0);
    for (size_t i = q.size(); i-- > 0;) {
        long long c = r[i + b.size() - 1] / b.back();
        q[i] = c;
        if (c)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] -= c * b[j];
    }
    return q;
}

struct FieldTable {
    int M = 1;
    int deg = 1;                      // phi(M)
    IPoly phi;                        // cyclotomic polynomial Phi_M
    std::vector<IPoly> pow_red;       // x^k mod Phi_M for k in [0, 2*deg-1)
    std::vector<int> conj_of_basis;   // exponent (M - j) mod M for basis j
};

IPoly cyclotomic_poly(int n, std::map<int, IPoly>& cache) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    IPoly num(n + 1, 0);
    num[0] = -1;
    num[n] = 1; // x^n - 1
    IPoly acc{1};
    for (int d = 1; d < n; ++d)
        if (n % d == 0) {
            IPoly pd = cyclotomic_poly(d, cache);
            IPoly next(acc.size() + pd.size() - 1, 0);
            for (size_t i = 0; i < acc.size(); ++i)
                for (size_t j = 0; j < pd.size(); ++j) next[i + j] += acc[i] * pd[j];
            acc = next;
        }
    IPoly res = ipoly_div(num, acc);
    cache[n] = res;
    return res;
}

const FieldTable& table_for(int M) {
    static std::map<int, FieldTable> tables;
    static std::map<int, IPoly> poly_cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(M);
    if (it != tables.end()) return it->second;
    FieldTable t;
    t.M = M;
    t.phi = cyclotomic_poly(M, poly_cache);
    t.deg = (int)t.phi.size() - 1;
    t.pow_red.resize(2 * t.deg);
    for (int k = 0; k < t.deg; ++k) {
        IPoly e(t.deg, 0);
        e[k] = 1;
        t.pow_red[k] = e;
    }
    for (int k = t.deg; k < 2 * t.deg; ++k) {
        // x^k = x * x^{k-1}, then reduce the top term via Phi
        IPoly prev = t.pow_red[k - 1];
        IPoly cur(t.deg, 0);
        long long top = prev[t.deg - 1];
        for (int i = t.deg - 1; i > 0; --i) cur[i] = prev[i - 1];
        if (top)
            for (int i = 0; i < t.deg; ++i) cur[i] -= top * t.phi[i];
        t.pow_red[k] = cur;
    }
    t.conj_of_basis.resize(t.deg);
    for (int j = 0; j < t.deg; ++j) t.conj_of_basis[j] = (M - j) % M;
    return tables.emplace(M, std::move(t)).first->second;
}

// zeta^k (0 <= k < M) as rational coordinates in the power basis.
std::vector<Rational> root_coords(const FieldTable& t, int k) {
    std::vector<Rational> c(t.deg);
    if (k < t.deg) {
        c[k] = Rational(1);
        return c;
    }
    // repeatedly shift a basis monomial up; amortized via pow_red for < 2deg
    // general k < M handled by iterated multiplication by x
    IPoly cur(t.deg, 0);
    cur[0] = 1;
    int shifted = 0;
    while (shifted < k) {
        int step = std::min(k - shifted, t.deg - 1);
        // multiply cur by x^step and reduce
        IPoly nxt(t.deg, 0);
        for (int i = 0; i < t.deg; ++i)
            if (cur[i]) {
                const IPoly& red = t.pow_red[i + step];
                for (int j = 0; j < t.deg; ++j) nxt[j] += cur[i] * red[j];
            }
        cur = nxt;
        shifted += step;
    }
    for (int i = 0; i < t.deg; ++i) c[i] = Rational(cur[i]);
    return c;
}

} // namespace

int CycNum::euler_phi(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

void CycNum::trim() {}

CycNum CycNum::zero(int conductor) {
    CycNum c;
    c.conductor_ = conductor;
    c.coeffs_.assign(table_for(conductor).deg, Rational(0));
    return c;
}

CycNum CycNum::one(int conductor) {
    CycNum c = zero(conductor);
    c.coeffs_[0] = Rational(1);
    return c;
}

CycNum CycNum::from_rational(int conductor, Rational r) {
    CycNum c = zero(conductor);
    c.coeffs_[0] = std::move(r);
    return c;
}

CycNum CycNum::root_of_unity(int conductor, long long k) {
    if (conductor < 1) throw std::invalid_argument("root_of_unity: conductor must be >= 1");
    const FieldTable& t = table_for(conductor);
    long long kk = k % conductor;
    if (kk < 0) kk += conductor;
    CycNum c;
    c.conductor_ = conductor;
    c.coeffs_ = root_coords(t, (int)kk);
    return c;
}

bool CycNum::is_zero() const {
    for (const auto& r : coeffs_)
        if (!r.is_zero()) return false;
    return true;
}

bool CycNum::is_rational() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return true;
}

Rational CycNum::rational_part() const {
    if (!is_rational()) throw std::domain_error("CycNum: not rational");
    return coeffs_[0];
}

CycNum CycNum::embed(int conductor) const {
    if (conductor == conductor_) return *this;
    if (conductor % conductor_ != 0)
        throw std::invalid_argument("CycNum::embed: target conductor not a multiple");
    int step = conductor / conductor_;
    CycNum out = zero(conductor);
    const FieldTable& t = table_for(conductor);
    for (size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j].is_zero()) continue;
        auto rc = root_coords(t, (int)((j * step) % conductor));
        for (int i = 0; i < t.deg; ++i)
            if (!rc[i].is_zero()) out.coeffs_[i] += coeffs_[j] * rc[i];
    }
    return out;
}

std::pair<CycNum, CycNum> coerce(const CycNum& a, const CycNum& b) {
    if (a.conductor() == b.conductor()) return {a, b};
    int l = std::lcm(a.conductor(), b.conductor());
    return {a.embed(l), b.embed(l)};
}

CycNum operator+(const CycNum& a, const CycNum& b) {
    if (a.conductor() != b.conductor()) {
        auto [x, y] = coerce(a, b);
        return x + y;
    }
    CycNum r = a;
    for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
    return r;
}

CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

CycNum CycNum::from_convolution(int conductor, const std::vector<Rational>& conv) {
    const FieldTable& t = table_for(conductor);
    int n = t.deg;
    CycNum r = CycNum::zero(conductor);
    for (int k = 0; k < n && k < (int)conv.size(); ++k) r.coeffs_[k] = conv[k];
    for (int k = n; k < (int)conv.size(); ++k) {
        if (conv[k].is_zero()) continue;
        const IPoly& red = t.pow_red[k];
        for (int j = 0; j < n; ++j)
            if (red[j]) r.coeffs_[j] += conv[k] * Rational(red[j]);
    }
    return r;
}

CycNum operator*(const CycNum& a, const CycNum& b) {
    if (a.conductor() != b.conductor()) {
        auto [x, y] = coerce(a, b);
        return x * y;
    }
    const FieldTable& t = table_for(a.conductor());
    int n = t.deg;
    std::vector<Rational> conv(2 * n - 1);
    for (int i = 0; i < n; ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            if (b.coeffs_[j].is_zero()) continue;
            conv[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return CycNum::from_convolution(a.conductor(), conv);
}

CycNum CycNum::conj() const {
    const FieldTable& t = table_for(conductor_);
    CycNum r = zero(conductor_);
    for (int j = 0; j < t.deg; ++j) {
        if (coeffs_[j].is_zero()) continue;
        auto rc = root_coords(t, t.conj_of_basis[j]);
        for (int i = 0; i < t.deg; ++i)
            if (!rc[i].is_zero()) r.coeffs_[i] += coeffs_[j] * rc[i];
    }
    return r;
}

CycNum CycNum::inverse() const {
    if (is_zero()) throw std::domain_error("CycNum: inverse of zero");
    // extended Euclid on (this, Phi_M) over Q[x]
    const FieldTable& t = table_for(conductor_);
    using QPoly = std::vector<Rational>;
    auto deg = [](const QPoly& p) {
        for (size_t i = p.size(); i-- > 0;)
            if (!p[i].is_zero()) return (int)i;
        return -1;
    };
    QPoly r0(t.phi.size());
    for (size_t i = 0; i < t.phi.size(); ++i) r0[i] = Rational(t.phi[i]);
    QPoly r1 = coeffs_;
    QPoly s0{Rational(0)}, s1{Rational(1)}; // coefficients of *this in the Bezout identity
    while (true) {
        int d1 = deg(r1);
        if (d1 < 0) throw std::domain_error("CycNum: not invertible (unexpected)");
        if (d1 == 0) {
            Rational c = r1[0];
            CycNum out = zero(conductor_);
            for (size_t i = 0; i < s1.size() && i < out.coeffs_.size(); ++i)
                out.coeffs_[i] = s1[i] / c;
            return out;
        }
        int d0 = deg(r0);
        // r0 = q*r1 + r2
        QPoly rem = r0, q(d0 - d1 + 1, Rational(0));
        for (int i = d0 - d1; i >= 0; --i) {
            if (rem[i + d1].is_zero()) continue;
            Rational c = rem[i + d1] / r1[d1];
            q[i] = c;
            for (int j = 0; j <= d1; ++j) rem[i + j] -= c * r1[j];
        }
        QPoly s2(std::max(s0.size(), s1.size() + q.size()), Rational(0));
        for (size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
        for (size_t i = 0; i < s1.size(); ++i)
            for (size_t j = 0; j < q.size(); ++j)
                if (!q[j].is_zero() && !s1[i].is_zero()) s2[i + j] -= q[j] * s1[i];
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
}

CycNum CycNum::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    CycNum acc = one(conductor_), base = *this;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

bool CycNum::operator==(const CycNum& o) const {
    if (conductor_ != o.conductor_) {
        auto [x, y] = coerce(*this, o);
        return x == y;
    }
    return coeffs_ == o.coeffs_;
}

std::optional<std::pair<int, int>> CycNum::as_signed_root() const {
    for (int s : {1, -1})
        for (int k = 0; k < conductor_; ++k) {
            CycNum cand = root_of_unity(conductor_, k);
            if (s < 0) cand = -cand;
            if (*this == cand) return std::make_pair(s, k);
        }
    return std::nullopt;
}

std::complex<double> CycNum::to_complex() const {
    std::complex<double> z = 0, zeta = std::polar(1.0, 2.0 * M_PI / conductor_);
    std::complex<double> p = 1;
    for (const auto& c : coeffs_) {
        if (!c.is_zero()) z += c.to_double() * p;
        p *= zeta;
    }
    return z;
}

std::string CycNum::str() const {
    std::string out;
    bool any = false;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        if (any) out += " + ";
        out += coeffs_[i].str();
        if (i > 0) out += "*z" + std::to_string(conductor_) + "^" + std::to_string(i);
        any = true;
    }
    return any ? out : "0";
}

} // namespace weil
