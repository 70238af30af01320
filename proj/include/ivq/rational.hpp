#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ivq {

// Exact positive rational; keeps scale-chain arithmetic and threshold
// comparisons free of float rounding.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        normalize();
    }
    explicit Rational(std::int64_t n) : num(n), den(1) {}

    void normalize() {
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational operator*(const Rational& o) const {
        // cross-reduce before multiplying to keep intermediates small
        std::int64_t g1 = std::gcd(num < 0 ? -num : num, o.den);
        std::int64_t g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
        return Rational((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    // "18", "1.5" when the decimal terminates, otherwise "5/3".
    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        std::int64_t d = den;
        int twos = 0, fives = 0;
        while (d % 2 == 0) { d /= 2; ++twos; }
        while (d % 5 == 0) { d /= 5; ++fives; }
        if (d != 1) return std::to_string(num) + "/" + std::to_string(den);
        int digits = twos > fives ? twos : fives;
        std::int64_t scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        std::int64_t scaled = num * (scale / den);
        std::string whole = std::to_string(scaled / scale);
        std::string frac = std::to_string(scaled % scale < 0 ? -(scaled % scale) : scaled % scale);
        frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
        while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
        return whole + "." + frac;
    }
};

// Parses decimal strings ("0.7") or fractions ("7/10") exactly.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t num = std::stoll(whole.empty() || whole == "-" ? whole + "0" : whole) * den;
    std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    num = num < 0 || whole[0] == '-' ? num - f : num + f;
    return Rational(num, den);
}

// Exact c/n >= threshold comparison via cross multiplication.
inline bool ratio_at_least(std::int64_t c, std::int64_t n, const Rational& threshold) {
    return static_cast<__int128>(c) * threshold.den >= static_cast<__int128>(threshold.num) * n;
}

} // namespace ivq
