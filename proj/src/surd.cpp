#include "freeprob/surd.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace freeprob {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string s = text;
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto valid = [](const std::string& part) {
        if (part.empty()) return false;
        size_t i = part[0] == '-' || part[0] == '+' ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(part[i]))) return false;
        return true;
    };
    if (!valid(num) || !valid(den))
        throw std::invalid_argument("malformed rational literal '" + text + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string rational_str(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

// Writes n = s^2 * f with f squarefree (trial division; inputs are small).
void squarefree_decompose(const mpz_class& n, mpz_class& square_root, mpz_class& free_part) {
    square_root = 1;
    free_part = 1;
    mpz_class rest = n;
    for (mpz_class p = 2; p * p <= rest; ++p) {
        unsigned exp = 0;
        while (rest % p == 0) {
            rest /= p;
            ++exp;
        }
        for (unsigned i = 0; i + 1 < exp; i += 2) square_root *= p;
        if (exp % 2) free_part *= p;
    }
    free_part *= rest;
}

}  // namespace

Surd::Surd(const Rational& a, const Rational& b, unsigned long d) : a_(a), b_(b), d_(d) {
    a_.canonicalize();
    b_.canonicalize();
    normalize();
}

void Surd::normalize() {
    if (b_ == 0) {
        d_ = 1;
        return;
    }
    if (d_ == 0) {
        b_ = 0;
        d_ = 1;
        return;
    }
    mpz_class sq, fr;
    squarefree_decompose(mpz_class(static_cast<unsigned long>(d_)), sq, fr);
    b_ *= Rational(sq);
    b_.canonicalize();
    if (fr == 1) {
        a_ += b_;
        a_.canonicalize();
        b_ = 0;
        d_ = 1;
    } else {
        d_ = fr.get_ui();
    }
}

Surd Surd::sqrt_of(const Rational& value) {
    if (value < 0) throw std::invalid_argument("square root of a negative rational");
    if (value == 0) return Surd(0);
    // sqrt(p/q) = sqrt(p*q)/q
    mpz_class pq = value.get_num() * value.get_den();
    mpz_class sq, fr;
    squarefree_decompose(pq, sq, fr);
    Rational coeff(sq, value.get_den());
    coeff.canonicalize();
    if (fr == 1) return Surd(coeff);
    if (!fr.fits_ulong_p()) throw std::invalid_argument("radicand too large");
    return Surd(Rational(0), coeff, fr.get_ui());
}

Rational Surd::as_rational() const {
    if (!is_rational()) throw std::domain_error("irrational value where a rational was required");
    return a_;
}

int Surd::sign() const {
    if (b_ == 0) return sgn(a_);
    if (a_ == 0) return sgn(b_);
    int sa = sgn(a_), sb = sgn(b_);
    if (sa == sb) return sa;
    // a and b*sqrt(d) have opposite signs: compare a^2 against b^2*d.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * Rational(d_);
    int cmp_result = cmp(lhs, rhs);
    if (cmp_result == 0) return 0;  // unreachable for squarefree d >= 2
    return cmp_result > 0 ? sa : sb;
}

void Surd::require_compatible(const Surd& l, const Surd& r) {
    if (l.b_ != 0 && r.b_ != 0 && l.d_ != r.d_)
        throw std::domain_error("mixed radicals sqrt(" + std::to_string(l.d_) + ") and sqrt(" +
                                std::to_string(r.d_) + ") are out of scope");
}

Surd Surd::operator-() const {
    Surd s = *this;
    s.a_ = -s.a_;
    s.b_ = -s.b_;
    return s;
}

Surd& Surd::operator+=(const Surd& o) {
    require_compatible(*this, o);
    a_ += o.a_;
    b_ += o.b_;
    if (b_ != 0 && d_ == 1) d_ = o.d_;
    a_.canonicalize();
    b_.canonicalize();
    normalize();
    return *this;
}

Surd& Surd::operator-=(const Surd& o) { return *this += -o; }

Surd& Surd::operator*=(const Surd& o) {
    require_compatible(*this, o);
    unsigned long d = b_ != 0 ? d_ : o.d_;
    Rational na = a_ * o.a_ + b_ * o.b_ * Rational(d);
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = na;
    b_ = nb;
    d_ = d;
    a_.canonicalize();
    b_.canonicalize();
    normalize();
    return *this;
}

Surd Surd::inverse() const {
    if (is_zero()) throw std::invalid_argument("division by zero");
    if (is_rational()) return Surd(Rational(1) / a_);
    // 1/(a+b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d)
    Rational denom = a_ * a_ - b_ * b_ * Rational(d_);
    return Surd(a_ / denom, -b_ / denom, d_);
}

Surd& Surd::operator/=(const Surd& o) { return *this *= o.inverse(); }

double Surd::to_double() const {
    double v = a_.get_d();
    if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v;
}

std::string Surd::str() const {
    if (is_rational()) return rational_str(a_);
    std::ostringstream out;
    out << rational_str(a_) << "+" << rational_str(b_) << "*sqrt(" << d_ << ")";
    return out.str();
}

}  // namespace freeprob
