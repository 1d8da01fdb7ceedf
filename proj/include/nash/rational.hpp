#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "nash/errors.hpp"

namespace nash {

/// Gaussian rational re + im*i with exact GMP rational components.
/// Values are always kept in canonical (lowest-terms) form.
class GaussRat {
public:
    GaussRat() : re_(0), im_(0) {}
    GaussRat(long v) : re_(v), im_(0) {}  // NOLINT: implicit by design
    GaussRat(int v) : re_(v), im_(0) {}   // NOLINT: implicit by design
    explicit GaussRat(const mpq_class& re) : re_(re), im_(0) {}
    GaussRat(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussRat i() { return GaussRat(mpq_class(0), mpq_class(1)); }

    /// num/den pair, canonicalized; den must be nonzero.
    static GaussRat fraction(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw InputError("GaussRat: zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return GaussRat(q);
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }

    GaussRat operator-() const { return GaussRat(-re_, -im_); }

    GaussRat operator+(const GaussRat& o) const { return GaussRat(re_ + o.re_, im_ + o.im_); }
    GaussRat operator-(const GaussRat& o) const { return GaussRat(re_ - o.re_, im_ - o.im_); }

    GaussRat operator*(const GaussRat& o) const {
        return GaussRat(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }

    GaussRat operator/(const GaussRat& o) const {
        mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
        if (n == 0) throw PreconditionError("GaussRat: division by zero");
        return GaussRat((re_ * o.re_ + im_ * o.im_) / n, (im_ * o.re_ - re_ * o.im_) / n);
    }

    GaussRat& operator+=(const GaussRat& o) { return *this = *this + o; }
    GaussRat& operator-=(const GaussRat& o) { return *this = *this - o; }
    GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
    GaussRat& operator/=(const GaussRat& o) { return *this = *this / o; }

    bool operator==(const GaussRat& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const GaussRat& o) const { return !(*this == o); }

    GaussRat conj() const { return GaussRat(re_, -im_); }

    /// Squared modulus re^2 + im^2 as an ordinary rational.
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    GaussRat inv() const { return GaussRat(1) / *this; }

    GaussRat pow(unsigned long e) const {
        GaussRat acc(1), base = *this;
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    /// Total order used only for deterministic tie-breaking, not algebra.
    int cmp(const GaussRat& o) const {
        int c = ::cmp(re_, o.re_);
        if (c != 0) return c;
        return ::cmp(im_, o.im_);
    }

    /// Canonical text form: "a/b", "c/d*i" or "a/b+c/d*i"; integer
    /// denominators of 1 are dropped, unit imaginary parts print as "i".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        if (re_ != 0) out += rat_str(re_);
        if (im_ != 0) {
            if (im_ > 0 && re_ != 0) out += "+";
            if (im_ == 1) {
                out += "i";
            } else if (im_ == -1) {
                out += "-i";
            } else {
                out += rat_str(im_) + "*i";
            }
        }
        return out;
    }

private:
    static std::string rat_str(const mpq_class& q) { return q.get_str(); }

    mpq_class re_;
    mpq_class im_;
};

inline GaussRat operator*(long a, const GaussRat& b) { return GaussRat(a) * b; }

}  // namespace nash
