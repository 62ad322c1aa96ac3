#include "flatbound/rational.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "flatbound/errors.hpp"

namespace flatbound {

Rational::Rational(long numerator, long denominator) {
    if (denominator == 0) throw InputError("rational with zero denominator");
    value_ = mpq_class(numerator, 1);
    value_ /= denominator;
    value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InvariantError("division by zero");
    value_ /= o.value_;
    return *this;
}

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    const std::string_view t = trim(text);
    const auto slash = t.find('/');
    const std::string_view num = slash == std::string_view::npos ? t : t.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : t.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
        throw InputError("malformed rational '" + std::string(text) +
                         "' (expected an integer or a/b; decimals are not accepted)");
    }
    mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw InputError("rational '" + std::string(text) + "' has zero denominator");
    mpq_class q(n, d);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const { return value_.get_str(10); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit(std::size_t n, std::size_t i) {
    Vec v = zeros(n);
    v.at(i) = 1;
    return v;
}

Vec ones(std::size_t n) { return Vec(n, Rational(1)); }

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw InputError("dot product of vectors with different lengths");
    mpq_class acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero() || b[i].is_zero()) continue;
        acc += a[i].raw() * b[i].raw();
    }
    return Rational(acc);
}

Rational sum(std::span<const Rational> a) {
    mpq_class acc(0);
    for (const auto& x : a) acc += x.raw();
    return Rational(acc);
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InputError("vector length mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InputError("vector length mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec operator*(const Rational& s, const Vec& a) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

bool is_zero(std::span<const Rational> a) {
    return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.is_zero(); });
}

Vec normalize_direction(const Vec& v, bool keep_sign) {
    mpz_class lcm_den(1);
    for (const auto& x : v) {
        if (!x.is_zero()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.raw().get_den_mpz_t());
    }
    std::vector<mpz_class> ints;
    ints.reserve(v.size());
    mpz_class g(0);
    for (const auto& x : v) {
        mpz_class n = x.raw().get_num() * (lcm_den / x.raw().get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        ints.push_back(n);
    }
    if (g == 0) return v;
    int lead = 0;
    for (const auto& n : ints) {
        if (n != 0) {
            lead = sgn(n);
            break;
        }
    }
    if (keep_sign) lead = 1;
    Vec out;
    out.reserve(v.size());
    for (const auto& n : ints) out.emplace_back(mpq_class(n * lead / g));
    return out;
}

bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string to_string(const Vec& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ')';
    return os.str();
}

Vec parse_csv(std::string_view text) {
    Vec out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(Rational::parse(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace flatbound
