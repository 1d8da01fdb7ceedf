#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "nash/errors.hpp"
#include "nash/rational.hpp"

namespace nash {

/// Arbitrary-precision binary float, RAII wrapper over mpfr_t.
/// Precision is fixed per value; binary operations round to the wider
/// precision of the two operands (MPFR_RNDN).
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }

    Real(const Real& o) {
        mpfr_init2(v_, o.prec());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    Real(Real&& o) noexcept {
        mpfr_init2(v_, o.prec());
        mpfr_swap(v_, o.v_);
    }

    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.prec());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    static Real of(double x, mpfr_prec_t prec = 128) {
        Real r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }

    static Real of_long(long x, mpfr_prec_t prec = 128) {
        Real r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }

    static Real of_mpq(const mpq_class& q, mpfr_prec_t prec = 128) {
        Real r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    /// Parses the decimal form produced by to_decimal_string.
    static Real of_string(const std::string& s, mpfr_prec_t prec = 128) {
        Real r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw InputError("Real: cannot parse '" + s + "'");
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
    int cmp(double d) const { return mpfr_cmp_d(v_, d); }
    int sign() const { return mpfr_sgn(v_); }

    bool operator<(const Real& o) const { return cmp(o) < 0; }
    bool operator>(const Real& o) const { return cmp(o) > 0; }
    bool operator<=(const Real& o) const { return cmp(o) <= 0; }
    bool operator>=(const Real& o) const { return cmp(o) >= 0; }
    bool operator==(const Real& o) const { return cmp(o) == 0; }

    friend Real operator+(const Real& a, const Real& b) {
        Real r(joint(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r(joint(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r(joint(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r(joint(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }
    Real& operator/=(const Real& o) { return *this = *this / o; }

    Real abs() const {
        Real r(prec());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Real sqrt() const {
        Real r(prec());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }

    friend Real hypot(const Real& a, const Real& b) {
        Real r(joint(a, b));
        mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    friend Real max(const Real& a, const Real& b) { return a.cmp(b) >= 0 ? a : b; }

    /// Exact value as a dyadic rational.
    mpq_class to_dyadic() const {
        if (is_zero()) return mpq_class(0);
        if (!is_finite()) throw InternalError("Real: non-finite value has no rational form");
        mpz_class z;
        mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), v_);
        mpq_class q(z);
        if (e >= 0)
            mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
        else
            mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
        return q;
    }

    /// Shortest decimal string that reads back to the same value at this
    /// precision; format "0.<digits>e<exp>".
    std::string to_decimal_string() const {
        if (is_zero()) return "0";
        if (!is_finite()) throw InternalError("Real: non-finite value in serialization");
        mpfr_exp_t e = 0;
        char* raw = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
        std::string digits(raw);
        mpfr_free_str(raw);
        std::string sign;
        if (!digits.empty() && digits[0] == '-') {
            sign = "-";
            digits.erase(0, 1);
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        return sign + "0." + digits + "e" + std::to_string(static_cast<long>(e));
    }

private:
    static mpfr_prec_t joint(const Real& a, const Real& b) {
        return std::max(a.prec(), b.prec());
    }

    mpfr_t v_;
};

/// Complex number with Real components.
class Complex {
public:
    explicit Complex(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

    static Complex of(double re, double im, mpfr_prec_t prec = 128) {
        return Complex(Real::of(re, prec), Real::of(im, prec));
    }

    static Complex of_rat(const GaussRat& q, mpfr_prec_t prec = 128) {
        return Complex(Real::of_mpq(q.re(), prec), Real::of_mpq(q.im(), prec));
    }

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

    Complex operator-() const { return Complex(-re_, -im_); }
    Complex conj() const { return Complex(re_, -im_); }

    friend Complex operator+(const Complex& a, const Complex& b) {
        return Complex(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        return Complex(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return Complex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend Complex operator*(const Real& a, const Complex& b) {
        return Complex(a * b.re_, a * b.im_);
    }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real n = b.re_ * b.re_ + b.im_ * b.im_;
        if (n.is_zero()) throw PreconditionError("Complex: division by zero");
        return Complex((a.re_ * b.re_ + a.im_ * b.im_) / n,
                       (a.im_ * b.re_ - a.re_ * b.im_) / n);
    }

    Complex& operator+=(const Complex& o) { return *this = *this + o; }
    Complex& operator-=(const Complex& o) { return *this = *this - o; }
    Complex& operator*=(const Complex& o) { return *this = *this * o; }

    Complex inv() const {
        Complex one(prec());
        one.re_ = Real::of_long(1, prec());
        return one / *this;
    }

    Real abs() const { return hypot(re_, im_); }

    /// Exact value as a Gaussian rational with dyadic components.
    GaussRat to_dyadic_rat() const { return GaussRat(re_.to_dyadic(), im_.to_dyadic()); }

private:
    Real re_;
    Real im_;
};

}  // namespace nash
