#pragma once

// Exact arithmetic in Q(sqrt(D)) and logarithmic heights.
//
// A QuadElem represents x + y*sqrt(d) with exact rational x, y and a
// canonical radicand: the squarefree part of the constructed D is extracted
// at construction time (square factors are absorbed into y), and rational
// elements are normalized to y = 0, d = 1. Equality is therefore structural.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "recpow/real.hpp"

namespace recpow {

namespace detail {

// Squarefree decomposition n = s^2 * f with f squarefree, for moderate n
// (trial division; sufficient for discriminants of desk-scale recurrences).
inline void squarefree_decompose(const mpz_class& n, mpz_class& s, mpz_class& f) {
    s = 1;
    f = 1;
    mpz_class m = n;
    if (m == 0) return;
    for (mpz_class d = 2; d * d <= m && d <= 2100000; ++d) {
        if (m % d == 0) {
            int count = 0;
            while (m % d == 0) {
                m /= d;
                ++count;
            }
            for (int i = 0; i + 1 < count; i += 2) s *= d;
            if (count % 2 == 1) f *= d;
        }
    }
    // leftover: 1, a prime, a semiprime, or a perfect square of a large prime
    if (m > 1) {
        if (mpz_perfect_square_p(m.get_mpz_t())) {
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
            s *= r;
        } else {
            f *= m;
        }
    }
}

} // namespace detail

class QuadElem {
public:
    QuadElem() : x_(0), y_(0), d_(1) {}

    QuadElem(mpq_class rational) : x_(std::move(rational)), y_(0), d_(1) {
        x_.canonicalize();
    }

    QuadElem(long v) : x_(v), y_(0), d_(1) {}

    QuadElem(mpq_class x, mpq_class y, mpz_class radicand) : x_(std::move(x)), y_(std::move(y)) {
        if (radicand < 0) throw std::invalid_argument("QuadElem: negative radicand");
        x_.canonicalize();
        y_.canonicalize();
        mpz_class s, f;
        detail::squarefree_decompose(radicand, s, f);
        y_ *= s;
        if (f == 1 || y_ == 0) {
            x_ += y_ * (f == 1 ? 1 : 0); // f == 1: sqrt part is rational
            if (f == 1) x_.canonicalize();
            y_ = 0;
            d_ = 1;
        } else {
            d_ = f;
        }
    }

    const mpq_class& x() const { return x_; }
    const mpq_class& y() const { return y_; }
    const mpz_class& radicand() const { return d_; }

    bool is_rational() const { return d_ == 1; }
    bool is_zero() const { return x_ == 0 && y_ == 0; }

    QuadElem conjugate() const {
        QuadElem r = *this;
        r.y_ = -r.y_;
        return r;
    }

    // field norm x^2 - y^2 d (rational)
    mpq_class norm() const { return x_ * x_ - y_ * y_ * d_; }

    int sign() const {
        if (y_ == 0) return sgn(x_);
        if (x_ == 0) return sgn(y_);
        if (sgn(x_) == sgn(y_)) return sgn(x_);
        // opposite signs: compare x^2 against y^2 d
        mpq_class lhs = x_ * x_, rhs = y_ * y_ * d_;
        int c = cmp(lhs, rhs);
        if (c == 0) return 0; // impossible for canonical d > 1, but harmless
        return c > 0 ? sgn(x_) : sgn(y_);
    }

    QuadElem inverse() const {
        if (is_zero()) throw std::domain_error("QuadElem: inverse of zero");
        mpq_class n = norm();
        QuadElem c = conjugate();
        c.x_ /= n;
        c.y_ /= n;
        c.x_.canonicalize();
        c.y_.canonicalize();
        return c;
    }

    friend bool operator==(const QuadElem& a, const QuadElem& b) {
        return a.d_ == b.d_ && a.x_ == b.x_ && a.y_ == b.y_;
    }

    friend QuadElem operator+(const QuadElem& a, const QuadElem& b) {
        mpz_class d = merged_radicand(a, b);
        return make_raw(a.x_ + b.x_, a.y_ + b.y_, d);
    }
    friend QuadElem operator-(const QuadElem& a, const QuadElem& b) {
        mpz_class d = merged_radicand(a, b);
        return make_raw(a.x_ - b.x_, a.y_ - b.y_, d);
    }
    friend QuadElem operator-(const QuadElem& a) {
        QuadElem r = a;
        r.x_ = -r.x_;
        r.y_ = -r.y_;
        return r;
    }
    friend QuadElem operator*(const QuadElem& a, const QuadElem& b) {
        mpz_class d = merged_radicand(a, b);
        return make_raw(a.x_ * b.x_ + a.y_ * b.y_ * d, a.x_ * b.y_ + a.y_ * b.x_, d);
    }
    friend QuadElem operator/(const QuadElem& a, const QuadElem& b) { return a * b.inverse(); }

    QuadElem pow(long n) const {
        if (n < 0) return inverse().pow(-n);
        QuadElem result(mpq_class(1));
        QuadElem base = *this;
        unsigned long k = static_cast<unsigned long>(n);
        while (k > 0) {
            if (k & 1ul) result = result * base;
            base = base * base;
            k >>= 1;
        }
        return result;
    }

    std::string str() const {
        std::string out = x_.get_str();
        if (y_ != 0) {
            out += (y_ > 0 ? " + " : " - ");
            mpq_class ay = ::abs(y_);
            out += ay.get_str() + "*sqrt(" + d_.get_str() + ")";
        }
        return out;
    }

private:
    static mpz_class merged_radicand(const QuadElem& a, const QuadElem& b) {
        if (a.d_ == b.d_ || b.is_rational()) return a.d_;
        if (a.is_rational()) return b.d_;
        throw std::invalid_argument("QuadElem: mixed radicands " + a.d_.get_str() + " and " +
                                    b.d_.get_str());
    }

    // internal: d already canonical, only renormalize the rational case
    static QuadElem make_raw(mpq_class x, mpq_class y, mpz_class d) {
        QuadElem r;
        x.canonicalize();
        y.canonicalize();
        r.x_ = std::move(x);
        r.y_ = std::move(y);
        r.d_ = (r.y_ == 0) ? mpz_class(1) : std::move(d);
        return r;
    }

    mpq_class x_, y_;
    mpz_class d_;
};

// ---------------------------------------------------------------------------

inline HighPrecReal to_real(const QuadElem& e, long bits) {
    if (bits < kMinPrecision) throw std::invalid_argument("to_real: bits >= 16 required");
    HighPrecReal xr = HighPrecReal::from_rational(e.x(), bits);
    if (e.is_rational()) return xr;
    HighPrecReal yr = HighPrecReal::from_rational(e.y(), bits);
    HighPrecReal sd = sqrt(HighPrecReal::from_integer(e.radicand(), bits));
    return xr + yr * sd;
}

// Primitive integer polynomial with positive leading coefficient vanishing
// at e. degree 1: c[0] x + c[1]; degree 2: c[0] x^2 + c[1] x + c[2].
struct MinimalPolynomial {
    int degree = 1;
    std::array<mpz_class, 3> c{};
};

inline MinimalPolynomial minimal_polynomial(const QuadElem& e) {
    MinimalPolynomial m;
    if (e.is_rational()) {
        m.degree = 1;
        m.c[0] = e.x().get_den();
        m.c[1] = -e.x().get_num();
        return m;
    }
    // (X - x)^2 = y^2 d  =>  X^2 - 2x X + (x^2 - y^2 d)
    mpq_class lin = -2 * e.x();
    mpq_class cst = e.norm();
    mpz_class den;
    mpz_lcm(den.get_mpz_t(), lin.get_den().get_mpz_t(), cst.get_den().get_mpz_t());
    mpz_class a0 = den;
    mpz_class a1 = mpz_class(lin.get_num() * (den / lin.get_den()));
    mpz_class a2 = mpz_class(cst.get_num() * (den / cst.get_den()));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a0.get_mpz_t(), a1.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a2.get_mpz_t());
    m.degree = 2;
    m.c[0] = a0 / g;
    m.c[1] = a1 / g;
    m.c[2] = a2 / g;
    return m;
}

// Absolute logarithmic height h(e), as a certified real.
inline HighPrecReal log_height(const QuadElem& e, long bits = 192) {
    if (e.is_zero()) throw std::domain_error("log_height: zero input");
    if (e.is_rational()) {
        // h(p/q) = log max(|p|, q)
        mpz_class p = e.x().get_num(), q = e.x().get_den();
        mpz_class mx = ::abs(p) > q ? mpz_class(::abs(p)) : q;
        return log(HighPrecReal::from_integer(mx, bits));
    }
    MinimalPolynomial m = minimal_polynomial(e);
    HighPrecReal one = HighPrecReal::from_long(1, bits);
    HighPrecReal term1 = log(HighPrecReal::from_integer(m.c[0], bits));
    HighPrecReal t2 = log(max_val(one, abs(to_real(e, bits))));
    HighPrecReal t3 = log(max_val(one, abs(to_real(e.conjugate(), bits))));
    HighPrecReal sum = term1 + t2 + t3;
    return sum * HighPrecReal::from_rational(mpq_class(1, 2), bits);
}

} // namespace recpow
