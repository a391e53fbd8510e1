#pragma once

// Certified high-precision reals: midpoint-radius balls over MPFR.
//
// A HighPrecReal holds a midpoint at `precision_bits` and a non-negative
// error radius at a small fixed precision, with the contract that the true
// value lies in [mid - rad, mid + rad]. Every operation rounds the radius
// outward, so intervals only ever grow. Precision is a per-value property,
// never a process-global setting.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "recpow/errors.hpp"

namespace recpow {

inline constexpr long kRadiusBits = 64;
inline constexpr long kMinPrecision = 16;

namespace detail {

// RAII mpfr_t for temporaries.
class Raw {
public:
    explicit Raw(long prec) { mpfr_init2(v_, std::max(prec, kMinPrecision)); }
    ~Raw() { mpfr_clear(v_); }
    Raw(const Raw&) = delete;
    Raw& operator=(const Raw&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

} // namespace detail

class HighPrecReal {
public:
    explicit HighPrecReal(long precision_bits = 64) {
        prec_ = std::max(precision_bits, kMinPrecision);
        mpfr_init2(mid_, prec_);
        mpfr_init2(rad_, kRadiusBits);
        mpfr_set_zero(mid_, 1);
        mpfr_set_zero(rad_, 1);
    }

    HighPrecReal(const HighPrecReal& o) {
        prec_ = o.prec_;
        mpfr_init2(mid_, prec_);
        mpfr_init2(rad_, kRadiusBits);
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }

    HighPrecReal(HighPrecReal&& o) noexcept {
        prec_ = o.prec_;
        mpfr_init2(mid_, kMinPrecision);
        mpfr_init2(rad_, kRadiusBits);
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }

    HighPrecReal& operator=(const HighPrecReal& o) {
        if (this != &o) {
            HighPrecReal tmp(o);
            swap(tmp);
        }
        return *this;
    }

    HighPrecReal& operator=(HighPrecReal&& o) noexcept {
        swap(o);
        return *this;
    }

    ~HighPrecReal() {
        mpfr_clear(mid_);
        mpfr_clear(rad_);
    }

    void swap(HighPrecReal& o) noexcept {
        std::swap(prec_, o.prec_);
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }

    long precision() const { return prec_; }
    mpfr_srcptr mid() const { return mid_; }
    mpfr_srcptr rad() const { return rad_; }
    bool is_exact() const { return mpfr_zero_p(rad_); }

    // ---- factories (exact inputs) ----

    static HighPrecReal from_integer(const mpz_class& v, long bits) {
        HighPrecReal r(bits);
        int t = mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN);
        r.account_rounding(t);
        return r;
    }

    static HighPrecReal from_rational(const mpq_class& v, long bits) {
        HighPrecReal r(bits);
        int t = mpfr_set_q(r.mid_, v.get_mpq_t(), MPFR_RNDN);
        r.account_rounding(t);
        return r;
    }

    static HighPrecReal from_long(long v, long bits) {
        HighPrecReal r(bits);
        mpfr_set_si(r.mid_, v, MPFR_RNDN); // exact: |v| < 2^63 <= representable
        return r;
    }

    static HighPrecReal from_mpfr(mpfr_srcptr v, long bits) {
        HighPrecReal r(bits);
        int t = mpfr_set(r.mid_, v, MPFR_RNDN);
        r.account_rounding(t);
        return r;
    }

    // Ball spanning [lo, hi]; endpoints given exactly.
    static HighPrecReal from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, long bits) {
        HighPrecReal r(bits);
        detail::Raw half(std::max(bits, (long)mpfr_get_prec(lo) + 4));
        mpfr_add(half.get(), lo, hi, MPFR_RNDN);
        mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDN);
        int t = mpfr_set(r.mid_, half.get(), MPFR_RNDN);
        r.account_rounding(t);
        // rad >= (hi - lo)/2 plus the midpoint's own rounding slack
        detail::Raw w(kRadiusBits);
        mpfr_sub(w.get(), hi, lo, MPFR_RNDU);
        mpfr_div_2ui(w.get(), w.get(), 1, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, w.get(), MPFR_RNDU);
        r.widen_by_half_distance(lo, hi);
        return r;
    }

    // ---- endpoints ----

    void get_lower(mpfr_ptr out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
    void get_upper(mpfr_ptr out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

    double lower_d() const {
        detail::Raw t(prec_);
        get_lower(t.get());
        return mpfr_get_d(t.get(), MPFR_RNDD);
    }
    double upper_d() const {
        detail::Raw t(prec_);
        get_upper(t.get());
        return mpfr_get_d(t.get(), MPFR_RNDU);
    }
    double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }

    // ---- certified predicates ----

    bool certainly_positive() const {
        detail::Raw lo(prec_);
        get_lower(lo.get());
        return mpfr_sgn(lo.get()) > 0;
    }
    bool certainly_negative() const {
        detail::Raw hi(prec_);
        get_upper(hi.get());
        return mpfr_sgn(hi.get()) < 0;
    }
    bool contains_zero() const { return !certainly_positive() && !certainly_negative(); }

    static bool certainly_less(const HighPrecReal& a, const HighPrecReal& b) {
        long p = std::max(a.prec_, b.prec_) + 8;
        detail::Raw ah(p), bl(p);
        a.get_upper(ah.get());
        b.get_lower(bl.get());
        return mpfr_less_p(ah.get(), bl.get());
    }
    static bool certainly_greater(const HighPrecReal& a, const HighPrecReal& b) {
        return certainly_less(b, a);
    }

    // ---- integer extraction ----

    mpz_class ceil_of_upper() const {
        detail::Raw hi(prec_ + 8);
        get_upper(hi.get());
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), hi.get(), MPFR_RNDU);
        return z;
    }
    mpz_class floor_of_lower() const {
        detail::Raw lo(prec_ + 8);
        get_lower(lo.get());
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), lo.get(), MPFR_RNDD);
        return z;
    }
    // floor(x) if it is the same for every point of the ball.
    std::optional<mpz_class> certified_floor() const {
        mpz_class flo = floor_of_lower();
        detail::Raw hi(prec_ + 8);
        get_upper(hi.get());
        mpz_class fhi;
        mpfr_get_z(fhi.get_mpz_t(), hi.get(), MPFR_RNDD);
        if (flo == fhi) return flo;
        return std::nullopt;
    }

    std::string str(size_t digits = 20) const {
        mp_exp_t e;
        char* s = mpfr_get_str(nullptr, &e, 10, digits, mid_, MPFR_RNDN);
        std::string out = std::string(s) + "e" + std::to_string(e) +
                          " (rad 2^" + std::to_string(rad_log2()) + ")";
        mpfr_free_str(s);
        return out;
    }

    long rad_log2() const {
        if (mpfr_zero_p(rad_)) return -1000000000L;
        return static_cast<long>(mpfr_get_exp(rad_));
    }

    // ---- helpers used by the operation definitions below ----

    void account_rounding(int ternary) {
        if (ternary == 0 || mpfr_zero_p(mid_)) return;
        detail::Raw ulp(kRadiusBits);
        mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_) - prec_, MPFR_RNDU);
        mpfr_add(rad_, rad_, ulp.get(), MPFR_RNDU);
    }

    void widen_by_half_distance(mpfr_srcptr lo, mpfr_srcptr hi) {
        // Ensure [mid-rad, mid+rad] covers [lo, hi] despite midpoint rounding:
        // add |mid - lo| and |hi - mid| deficits conservatively via one more ulp.
        detail::Raw d(kRadiusBits);
        mpfr_sub(d.get(), hi, mid_, MPFR_RNDU);
        if (mpfr_sgn(d.get()) > 0) {
            detail::Raw excess(kRadiusBits);
            mpfr_sub(excess.get(), d.get(), rad_, MPFR_RNDU);
            if (mpfr_sgn(excess.get()) > 0) mpfr_add(rad_, rad_, excess.get(), MPFR_RNDU);
        }
        mpfr_sub(d.get(), mid_, lo, MPFR_RNDU);
        if (mpfr_sgn(d.get()) > 0) {
            detail::Raw excess(kRadiusBits);
            mpfr_sub(excess.get(), d.get(), rad_, MPFR_RNDU);
            if (mpfr_sgn(excess.get()) > 0) mpfr_add(rad_, rad_, excess.get(), MPFR_RNDU);
        }
    }

    mpfr_ptr mid_mut() { return mid_; }
    mpfr_ptr rad_mut() { return rad_; }

private:
    mpfr_t mid_;
    mpfr_t rad_;
    long prec_ = 64;
};

// ---------------------------------------------------------------------------
// arithmetic
// ---------------------------------------------------------------------------

inline HighPrecReal operator+(const HighPrecReal& a, const HighPrecReal& b) {
    HighPrecReal r(std::max(a.precision(), b.precision()));
    int t = mpfr_add(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    mpfr_add(r.rad_mut(), a.rad(), b.rad(), MPFR_RNDU);
    r.account_rounding(t);
    return r;
}

inline HighPrecReal operator-(const HighPrecReal& a, const HighPrecReal& b) {
    HighPrecReal r(std::max(a.precision(), b.precision()));
    int t = mpfr_sub(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    mpfr_add(r.rad_mut(), a.rad(), b.rad(), MPFR_RNDU);
    r.account_rounding(t);
    return r;
}

inline HighPrecReal operator-(const HighPrecReal& a) {
    HighPrecReal r(a);
    mpfr_neg(r.mid_mut(), r.mid(), MPFR_RNDN); // exact
    return r;
}

inline HighPrecReal operator*(const HighPrecReal& a, const HighPrecReal& b) {
    HighPrecReal r(std::max(a.precision(), b.precision()));
    int t = mpfr_mul(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    // |xy - ma*mb| <= |ma| rb + |mb| ra + ra rb
    detail::Raw term(kRadiusBits), absm(kRadiusBits);
    mpfr_abs(absm.get(), a.mid(), MPFR_RNDU);
    mpfr_mul(term.get(), absm.get(), b.rad(), MPFR_RNDU);
    mpfr_add(r.rad_mut(), r.rad(), term.get(), MPFR_RNDU);
    mpfr_abs(absm.get(), b.mid(), MPFR_RNDU);
    mpfr_mul(term.get(), absm.get(), a.rad(), MPFR_RNDU);
    mpfr_add(r.rad_mut(), r.rad(), term.get(), MPFR_RNDU);
    mpfr_mul(term.get(), a.rad(), b.rad(), MPFR_RNDU);
    mpfr_add(r.rad_mut(), r.rad(), term.get(), MPFR_RNDU);
    r.account_rounding(t);
    return r;
}

inline HighPrecReal operator/(const HighPrecReal& a, const HighPrecReal& b) {
    if (b.contains_zero())
        throw PrecisionError("division by an interval containing zero");
    HighPrecReal r(std::max(a.precision(), b.precision()));
    int t = mpfr_div(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    // |x/y - ma/mb| <= (ra + |ma/mb| rb) / (|mb| - rb)
    detail::Raw q(kRadiusBits), num(kRadiusBits), den(kRadiusBits);
    mpfr_abs(q.get(), r.mid(), MPFR_RNDU);
    if (!mpfr_zero_p(q.get())) mpfr_nextabove(q.get()); // cover quotient rounding
    mpfr_mul(num.get(), q.get(), b.rad(), MPFR_RNDU);
    mpfr_add(num.get(), num.get(), a.rad(), MPFR_RNDU);
    mpfr_abs(den.get(), b.mid(), MPFR_RNDD);
    mpfr_sub(den.get(), den.get(), b.rad(), MPFR_RNDD);
    if (mpfr_sgn(den.get()) <= 0)
        throw PrecisionError("division denominator too close to zero");
    mpfr_div(num.get(), num.get(), den.get(), MPFR_RNDU);
    mpfr_add(r.rad_mut(), r.rad(), num.get(), MPFR_RNDU);
    r.account_rounding(t);
    return r;
}

inline HighPrecReal abs(const HighPrecReal& a) {
    if (a.contains_zero()) {
        // image is [0, |mid|+rad]
        long p = a.precision();
        detail::Raw hi(p + 8);
        mpfr_abs(hi.get(), a.mid(), MPFR_RNDU);
        mpfr_add(hi.get(), hi.get(), a.rad(), MPFR_RNDU);
        detail::Raw zero(p);
        mpfr_set_zero(zero.get(), 1);
        return HighPrecReal::from_endpoints(zero.get(), hi.get(), p);
    }
    HighPrecReal r(a);
    mpfr_abs(r.mid_mut(), r.mid(), MPFR_RNDN); // exact
    return r;
}

// Unary monotone functions via endpoint evaluation with directed rounding.
namespace detail {

using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

inline HighPrecReal monotone_unary(const HighPrecReal& a, UnaryFn fn, bool require_positive,
                                   bool clamp_lower_zero, const char* name) {
    long p = a.precision();
    Raw lo(p + 8), hi(p + 8);
    a.get_lower(lo.get());
    a.get_upper(hi.get());
    if (require_positive && mpfr_sgn(lo.get()) <= 0) {
        if (clamp_lower_zero && mpfr_sgn(hi.get()) >= 0 && mpfr_sgn(lo.get()) < 0) {
            mpfr_set_zero(lo.get(), 1);
        } else {
            throw PrecisionError(std::string(name) + " of an interval not certified in domain");
        }
    }
    Raw flo(p + 8), fhi(p + 8);
    fn(flo.get(), lo.get(), MPFR_RNDD);
    fn(fhi.get(), hi.get(), MPFR_RNDU);
    return HighPrecReal::from_endpoints(flo.get(), fhi.get(), p);
}

} // namespace detail

inline HighPrecReal log(const HighPrecReal& a) {
    return detail::monotone_unary(a, mpfr_log, true, false, "log");
}

inline HighPrecReal exp(const HighPrecReal& a) {
    return detail::monotone_unary(a, mpfr_exp, false, false, "exp");
}

inline HighPrecReal sqrt(const HighPrecReal& a) {
    return detail::monotone_unary(a, mpfr_sqrt, true, true, "sqrt");
}

inline HighPrecReal pow_ui(const HighPrecReal& a, unsigned long n) {
    HighPrecReal result = HighPrecReal::from_long(1, a.precision());
    HighPrecReal base(a);
    while (n > 0) {
        if (n & 1ul) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

inline HighPrecReal pow_si(const HighPrecReal& a, long n) {
    if (n >= 0) return pow_ui(a, static_cast<unsigned long>(n));
    return HighPrecReal::from_long(1, a.precision()) / pow_ui(a, static_cast<unsigned long>(-n));
}

// Interval image of max/min.
inline HighPrecReal max_val(const HighPrecReal& a, const HighPrecReal& b) {
    long p = std::max(a.precision(), b.precision());
    detail::Raw alo(p + 8), ahi(p + 8), blo(p + 8), bhi(p + 8);
    a.get_lower(alo.get());
    a.get_upper(ahi.get());
    b.get_lower(blo.get());
    b.get_upper(bhi.get());
    mpfr_max(alo.get(), alo.get(), blo.get(), MPFR_RNDD);
    mpfr_max(ahi.get(), ahi.get(), bhi.get(), MPFR_RNDU);
    return HighPrecReal::from_endpoints(alo.get(), ahi.get(), p);
}

inline HighPrecReal min_val(const HighPrecReal& a, const HighPrecReal& b) {
    long p = std::max(a.precision(), b.precision());
    detail::Raw alo(p + 8), ahi(p + 8), blo(p + 8), bhi(p + 8);
    a.get_lower(alo.get());
    a.get_upper(ahi.get());
    b.get_lower(blo.get());
    b.get_upper(bhi.get());
    mpfr_min(alo.get(), alo.get(), blo.get(), MPFR_RNDD);
    mpfr_min(ahi.get(), ahi.get(), bhi.get(), MPFR_RNDU);
    return HighPrecReal::from_endpoints(alo.get(), ahi.get(), p);
}

inline HighPrecReal log_of_integer(const mpz_class& v, long bits) {
    return log(HighPrecReal::from_integer(v, bits));
}

inline HighPrecReal log_of_long(long v, long bits) {
    return log(HighPrecReal::from_long(v, bits));
}

// Distance to the nearest integer, as a certified interval.
// Requires the input ball to be narrower than 1; otherwise returns the full
// range [0, 1/2] (callers on a precision ladder will retry with more bits).
struct NearestIntDistance {
    HighPrecReal value;
    bool tight; // false when the input interval was too wide to localize
};

inline NearestIntDistance dist_to_nearest_int(const HighPrecReal& a) {
    long p = std::max(a.precision() + 8, (long)64);
    detail::Raw lo(p), hi(p);
    a.get_lower(lo.get());
    a.get_upper(hi.get());

    detail::Raw width(p);
    mpfr_sub(width.get(), hi.get(), lo.get(), MPFR_RNDU);
    if (mpfr_cmp_ui(width.get(), 1) >= 0) {
        detail::Raw zero(p), half(p);
        mpfr_set_zero(zero.get(), 1);
        mpfr_set_ui_2exp(half.get(), 1, -1, MPFR_RNDN);
        return {HighPrecReal::from_endpoints(zero.get(), half.get(), a.precision()), false};
    }

    // Headroom so that every dyadic step below is exact.
    long p2 = p + 4;

    // Exact dyadic distance of a point to its nearest integer.
    auto point_dist = [&](mpfr_srcptr x, mpfr_ptr out) {
        detail::Raw fl(p2), frac(p2), comp(p2);
        mpfr_floor(fl.get(), x);
        mpfr_sub(frac.get(), x, fl.get(), MPFR_RNDN); // exact: result in [0,1)
        mpfr_ui_sub(comp.get(), 1, frac.get(), MPFR_RNDN); // exact at p2 bits
        mpfr_min(out, frac.get(), comp.get(), MPFR_RNDN);
    };

    // integer inside [lo, hi]  <=>  ceil(lo) <= floor(hi) as exact integers
    mpz_class zlo, zhi;
    mpfr_get_z(zlo.get_mpz_t(), lo.get(), MPFR_RNDU);
    mpfr_get_z(zhi.get_mpz_t(), hi.get(), MPFR_RNDD);
    bool has_int = zlo <= zhi;

    // half-integer inside [lo, hi]  <=>  odd integer inside [2lo, 2hi]
    detail::Raw lo2(p2), hi2(p2);
    mpfr_mul_2ui(lo2.get(), lo.get(), 1, MPFR_RNDN); // exact
    mpfr_mul_2ui(hi2.get(), hi.get(), 1, MPFR_RNDN);
    mpz_class zlo2, zhi2;
    mpfr_get_z(zlo2.get_mpz_t(), lo2.get(), MPFR_RNDU);
    mpfr_get_z(zhi2.get_mpz_t(), hi2.get(), MPFR_RNDD);
    bool has_half = zlo2 <= zhi2 && (mpz_odd_p(zlo2.get_mpz_t()) || zlo2 + 1 <= zhi2);

    detail::Raw dlo(p2), dhi(p2), dmin(p2), dmax(p2);
    point_dist(lo.get(), dlo.get());
    point_dist(hi.get(), dhi.get());
    if (has_int) {
        mpfr_set_zero(dmin.get(), 1);
    } else {
        mpfr_min(dmin.get(), dlo.get(), dhi.get(), MPFR_RNDD);
    }
    if (has_half) {
        mpfr_set_ui_2exp(dmax.get(), 1, -1, MPFR_RNDN);
    } else {
        mpfr_max(dmax.get(), dlo.get(), dhi.get(), MPFR_RNDU);
    }
    return {HighPrecReal::from_endpoints(dmin.get(), dmax.get(), a.precision()),
            !(has_int && has_half)};
}

// ---------------------------------------------------------------------------
// Dec4: a value rounded outward to four significant decimal digits.
// Bound constants are frozen in this form so that ledgers and reports are
// reproducible independent of platform and working precision.
// ---------------------------------------------------------------------------

struct Dec4 {
    long mantissa = 0; // 0, or 1000..9999 in absolute value
    int exp10 = 0;     // value = mantissa * 10^exp10

    static Dec4 round_up(const HighPrecReal& x) { return round_dir(x, true); }
    static Dec4 round_down(const HighPrecReal& x) { return round_dir(x, false); }

    static Dec4 from_parts(long mant, int e) {
        Dec4 d;
        d.mantissa = mant;
        d.exp10 = e;
        return d;
    }

    mpq_class to_rational() const {
        mpz_class pow;
        mpz_ui_pow_ui(pow.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        if (exp10 >= 0) return mpq_class(mpz_class(mantissa) * pow);
        mpq_class q(mpz_class(mantissa), pow);
        q.canonicalize();
        return q;
    }

    HighPrecReal to_real(long bits) const {
        return HighPrecReal::from_rational(to_rational(), bits);
    }

    double to_double() const { return to_rational().get_d(); }

    bool is_zero() const { return mantissa == 0; }

    std::string str() const {
        if (mantissa == 0) return "0";
        long m = mantissa < 0 ? -mantissa : mantissa;
        std::string digits = std::to_string(m); // exactly 4 digits
        std::string out = (mantissa < 0 ? "-" : "");
        out += digits.substr(0, 1) + "." + digits.substr(1);
        out += "e" + std::to_string(exp10 + 3);
        return out;
    }

    friend bool operator==(const Dec4& a, const Dec4& b) {
        return a.mantissa == b.mantissa && a.exp10 == b.exp10;
    }

private:
    static Dec4 round_dir(const HighPrecReal& x, bool up) {
        long p = x.precision() + 8;
        detail::Raw end(p);
        if (up)
            x.get_upper(end.get());
        else
            x.get_lower(end.get());
        if (mpfr_zero_p(end.get())) return Dec4{};
        // mpfr_get_str with a directed rounding mode rounds the decimal
        // representation itself in that direction.
        mp_exp_t e;
        char* s = mpfr_get_str(nullptr, &e, 10, 4, end.get(), up ? MPFR_RNDU : MPFR_RNDD);
        std::string str(s);
        mpfr_free_str(s);
        bool neg = !str.empty() && str[0] == '-';
        std::string digits = neg ? str.substr(1) : str;
        digits.resize(4, '0');
        long mant = std::stol(digits);
        Dec4 d;
        d.mantissa = neg ? -mant : mant;
        d.exp10 = static_cast<int>(e) - 4;
        if (d.mantissa == 0) d.exp10 = 0;
        return d;
    }
};

} // namespace recpow
