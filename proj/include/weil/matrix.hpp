#pragma once

#include <complex>
#include <vector>

#include "weil/cyclo.hpp"

namespace weil {

// Field kernels for the dense linear algebra. ExactField drives the
// authoritative computation; FloatField backs the float-shadow oracle.
struct ExactField {
    using Elem = CycNum;
    static Elem zero(int conductor) { return CycNum::zero(conductor); }
    static Elem one(int conductor) { return CycNum::one(conductor); }
    static bool is_zero(const Elem& e) { return e.is_zero(); }
    static Elem div(const Elem& a, const Elem& b) { return a * b.inverse(); }
    static Elem inv(const Elem& a) { return a.inverse(); }
    static Elem conj(const Elem& a) { return a.conj(); }
};

struct FloatField {
    using Elem = std::complex<double>;
    static constexpr double kTol = 1e-8;
    static Elem zero(int) { return {0.0, 0.0}; }
    static Elem one(int) { return {1.0, 0.0}; }
    static bool is_zero(const Elem& e) { return std::abs(e) < kTol; }
    static Elem div(const Elem& a, const Elem& b) { return a / b; }
    static Elem inv(const Elem& a) { return 1.0 / a; }
    static Elem conj(const Elem& a) { return std::conj(a); }
};

template <class K>
class Mat {
public:
    using Elem = typename K::Elem;

    Mat() : rows_(0), cols_(0), conductor_(1) {}
    Mat(int rows, int cols, int conductor)
        : rows_(rows), cols_(cols), conductor_(conductor),
          a_(size_t(rows) * cols, K::zero(conductor)) {}

    static Mat identity(int n, int conductor) {
        Mat m(n, n, conductor);
        for (int i = 0; i < n; ++i) m.at(i, i) = K::one(conductor);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int conductor() const { return conductor_; }

    Elem& at(int r, int c) { return a_[size_t(r) * cols_ + c]; }
    const Elem& at(int r, int c) const { return a_[size_t(r) * cols_ + c]; }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Mat: product dimension mismatch");
        Mat r(rows_, o.cols_, conductor_);
        if constexpr (std::is_same_v<K, ExactField>) {
            // accumulate raw power-basis convolutions, reduce once per entry
            int deg = (int)CycNum::zero(conductor_).coeffs().size();
            std::vector<std::vector<Rational>> conv(o.cols_,
                                                    std::vector<Rational>(2 * deg - 1));
            for (int i = 0; i < rows_; ++i) {
                for (auto& c : conv)
                    for (auto& e : c) e = Rational(0);
                for (int k = 0; k < cols_; ++k) {
                    const Elem& x = at(i, k);
                    if (x.is_zero()) continue;
                    const auto& xc = x.coeffs();
                    for (int j = 0; j < o.cols_; ++j) {
                        const Elem& y = o.at(k, j);
                        if (y.is_zero()) continue;
                        const auto& yc = y.coeffs();
                        auto& cj = conv[j];
                        for (int p = 0; p < deg; ++p) {
                            if (xc[p].is_zero()) continue;
                            for (int q = 0; q < deg; ++q) {
                                if (yc[q].is_zero()) continue;
                                cj[p + q] += xc[p] * yc[q];
                            }
                        }
                    }
                }
                for (int j = 0; j < o.cols_; ++j)
                    r.at(i, j) = CycNum::from_convolution(conductor_, conv[j]);
            }
        } else {
            for (int i = 0; i < rows_; ++i)
                for (int k = 0; k < cols_; ++k) {
                    const Elem& x = at(i, k);
                    if (K::is_zero(x)) continue;
                    for (int j = 0; j < o.cols_; ++j) {
                        if (K::is_zero(o.at(k, j))) continue;
                        r.at(i, j) += x * o.at(k, j);
                    }
                }
        }
        return r;
    }

    Mat operator+(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat: sum dimension mismatch");
        Mat r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }

    Mat operator-(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat: diff dimension mismatch");
        Mat r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }

    Mat scaled(const Elem& s) const {
        Mat r = *this;
        for (auto& e : r.a_) e *= s;
        return r;
    }

    Elem trace() const {
        Elem t = K::zero(conductor_);
        for (int i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
        return t;
    }

    bool is_zero() const {
        for (const auto& e : a_)
            if (!K::is_zero(e)) return false;
        return true;
    }

    bool operator==(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (size_t i = 0; i < a_.size(); ++i)
            if (!K::is_zero(a_[i] - o.a_[i])) return false;
        return true;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat conj_transpose() const {
        Mat r(cols_, rows_, conductor_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = K::conj(at(i, j));
        return r;
    }

    Mat transpose() const {
        Mat r(cols_, rows_, conductor_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    // Row echelon reduction, Bareiss-style: fraction-free cross-multiplication
    // with exact division by the previous pivot. Pivots are the first nonzero
    // entry in column order, so the result is deterministic. Returns pivot
    // column indices; *this becomes the reduced matrix.
    std::vector<int> echelonize() {
        std::vector<int> pivots;
        int r = 0;
        Elem prev_inv = K::one(conductor_);
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int pr = -1;
            for (int i = r; i < rows_; ++i)
                if (!K::is_zero(at(i, c))) { pr = i; break; }
            if (pr < 0) continue;
            if (pr != r)
                for (int j = 0; j < cols_; ++j) std::swap(at(pr, j), at(r, j));
            const Elem piv = at(r, c);
            for (int i = r + 1; i < rows_; ++i) {
                Elem f = at(i, c);
                if (K::is_zero(f)) {
                    for (int j = c; j < cols_; ++j) at(i, j) = (piv * at(i, j)) * prev_inv;
                } else {
                    for (int j = c; j < cols_; ++j)
                        at(i, j) = (piv * at(i, j) - f * at(r, j)) * prev_inv;
                }
            }
            prev_inv = K::inv(piv);
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    // scale each row so its entries have integral coordinates (exact kernel
    // only); the row space and nullspace are unchanged
    void make_rows_integral() {
        if constexpr (std::is_same_v<K, ExactField>) {
            for (int i = 0; i < rows_; ++i) {
                BigInt l(1);
                for (int j = 0; j < cols_; ++j)
                    for (const auto& co : at(i, j).coeffs())
                        if (!co.is_integer()) {
                            BigInt g = BigInt::gcd(l, co.den());
                            l = l / g * co.den();
                        }
                if (l.is_one()) continue;
                CycNum s = CycNum::from_rational(conductor_, Rational(l));
                for (int j = 0; j < cols_; ++j) at(i, j) *= s;
            }
        }
    }

    int rank() const {
        Mat m = *this;
        return (int)m.echelonize().size();
    }

    // Exact basis of the right nullspace. rank + returned.size() == cols().
    std::vector<Mat> nullspace() const {
        Mat m = *this;
        std::vector<int> piv = m.echelonize();
        std::vector<bool> is_pivot(cols_, false);
        for (int c : piv) is_pivot[c] = true;
        std::vector<Mat> basis;
        for (int fc = 0; fc < cols_; ++fc) {
            if (is_pivot[fc]) continue;
            Mat v(cols_, 1, conductor_);
            v.at(fc, 0) = K::one(conductor_);
            // back substitution over the echelon rows
            for (int pr = (int)piv.size() - 1; pr >= 0; --pr) {
                int pc = piv[pr];
                Elem s = K::zero(conductor_);
                for (int j = pc + 1; j < cols_; ++j)
                    if (!K::is_zero(m.at(pr, j)) && !K::is_zero(v.at(j, 0)))
                        s += m.at(pr, j) * v.at(j, 0);
                v.at(pc, 0) = K::div(-s, m.at(pr, pc));
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Indices of a maximal set of linearly independent columns (leftmost).
    std::vector<int> pivot_columns() const {
        Mat m = *this;
        return m.echelonize();
    }

    // Solve A X = B for X; throws if A is not invertible.
    Mat solve(const Mat& b) const {
        if (rows_ != cols_) throw std::invalid_argument("Mat::solve: matrix not square");
        if (b.rows_ != rows_) throw std::invalid_argument("Mat::solve: rhs dimension mismatch");
        Mat aug(rows_, cols_ + b.cols_, conductor_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            for (int j = 0; j < b.cols_; ++j) aug.at(i, cols_ + j) = b.at(i, j);
        }
        std::vector<int> piv = aug.echelonize();
        if ((int)piv.size() != cols_ || piv.back() >= cols_)
            throw std::domain_error("Mat::solve: singular matrix");
        Mat x(cols_, b.cols_, conductor_);
        for (int k = 0; k < b.cols_; ++k)
            for (int i = cols_ - 1; i >= 0; --i) {
                Elem s = aug.at(i, cols_ + k);
                for (int j = i + 1; j < cols_; ++j) s -= aug.at(i, j) * x.at(j, k);
                x.at(i, k) = K::div(s, aug.at(i, i));
            }
        return x;
    }

    Mat inverse() const { return solve(identity(rows_, conductor_)); }

private:
    int rows_, cols_, conductor_;
    std::vector<Elem> a_;
};

using CycMatrix = Mat<ExactField>;
using FloatMatrix = Mat<FloatField>;

inline FloatMatrix to_float(const CycMatrix& m) {
    FloatMatrix f(m.rows(), m.cols(), 1);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) f.at(i, j) = m.at(i, j).to_complex();
    return f;
}

} // namespace weil
