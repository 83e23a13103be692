#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "freeprob/rational.hpp"

namespace freeprob {

/// Exact quadratic value a + b*sqrt(d) with rational a, b and squarefree
/// integer d >= 2 (b == 0 forces d == 1, the rational case). Mixing two
/// different radicals in one operation is an error: the calculus never
/// needs more than one radical at a time, and silently widening to a
/// number field would hide mistakes.
class Surd {
public:
    Surd() : a_(0), b_(0), d_(1) {}
    Surd(const Rational& value) : a_(value), b_(0), d_(1) { a_.canonicalize(); }
    Surd(long value) : a_(value), b_(0), d_(1) {}
    Surd(const Rational& a, const Rational& b, unsigned long d);

    static Surd sqrt_of(const Rational& value);

    const Rational& rational_part() const { return a_; }
    const Rational& radical_coeff() const { return b_; }
    unsigned long radicand() const { return d_; }

    bool is_rational() const { return b_ == 0; }
    /// Throws if the value is irrational.
    Rational as_rational() const;

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    int sign() const;

    Surd operator-() const;
    Surd& operator+=(const Surd& o);
    Surd& operator-=(const Surd& o);
    Surd& operator*=(const Surd& o);
    Surd& operator/=(const Surd& o);

    friend Surd operator+(Surd l, const Surd& r) { return l += r; }
    friend Surd operator-(Surd l, const Surd& r) { return l -= r; }
    friend Surd operator*(Surd l, const Surd& r) { return l *= r; }
    friend Surd operator/(Surd l, const Surd& r) { return l /= r; }

    friend bool operator==(const Surd& l, const Surd& r) {
        return l.a_ == r.a_ && l.b_ == r.b_ && l.d_ == r.d_;
    }
    friend bool operator!=(const Surd& l, const Surd& r) { return !(l == r); }
    friend bool operator<(const Surd& l, const Surd& r) { return (l - r).sign() < 0; }
    friend bool operator>(const Surd& l, const Surd& r) { return r < l; }
    friend bool operator<=(const Surd& l, const Surd& r) { return !(r < l); }
    friend bool operator>=(const Surd& l, const Surd& r) { return !(l < r); }

    Surd inverse() const;
    double to_double() const;
    std::string str() const;

private:
    void normalize();
    static void require_compatible(const Surd& l, const Surd& r);

    Rational a_, b_;
    unsigned long d_;
};

/// Parameter that may be +infinity (free group factor index, fdim value).
class ExtSurd {
public:
    ExtSurd() : value_(), infinite_(false) {}
    ExtSurd(const Surd& v) : value_(v), infinite_(false) {}
    ExtSurd(const Rational& v) : value_(v), infinite_(false) {}
    ExtSurd(long v) : value_(v), infinite_(false) {}
    static ExtSurd infinity() {
        ExtSurd e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    const Surd& finite() const {
        if (infinite_) throw std::domain_error("value is infinite");
        return value_;
    }

    friend bool operator==(const ExtSurd& l, const ExtSurd& r) {
        if (l.infinite_ || r.infinite_) return l.infinite_ && r.infinite_;
        return l.value_ == r.value_;
    }
    friend bool operator!=(const ExtSurd& l, const ExtSurd& r) { return !(l == r); }

    ExtSurd operator+(const ExtSurd& o) const {
        if (infinite_ || o.infinite_) return infinity();
        return ExtSurd(value_ + o.value_);
    }

    std::string str() const { return infinite_ ? "inf" : value_.str(); }

private:
    Surd value_;
    bool infinite_;
};

}  // namespace freeprob
