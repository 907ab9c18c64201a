#include "ccw/rational.hpp"

#include <cctype>

#include "ccw/errors.hpp"

namespace ccw {

Rational::Rational(long n, long d) {
    if (d == 0) throw InvalidArgument("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw InvalidArgument("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    auto valid_int = [](std::string_view t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    std::string n = s.substr(0, slash);
    std::string d = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!n.empty() && n[0] == '+') n.erase(0, 1);
    if (!valid_int(n) || !valid_int(d) || d[0] == '-')
        throw InvalidArgument("malformed rational '" + s + "'");
    mpz_class zn(n, 10), zd(d, 10);
    return Rational(zn, zd);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InvalidArgument("division by zero rational");
    v_ /= o.v_;
    return *this;
}

std::string Rational::to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& base, unsigned exp) {
    Rational out(1);
    Rational b = base;
    while (exp) {
        if (exp & 1U) out *= b;
        exp >>= 1U;
        if (exp) b *= b;
    }
    return out;
}

}  // namespace ccw
