#include "spinsys/rational.hpp"

#include <cctype>

namespace spinsys {

Rat rat_from_string(const std::string& s) {
    auto bad = [&]() { fail(ErrorClass::parse, "bad rational literal: '" + s + "'"); };
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) bad();
    auto digits_only = [](const std::string& x) {
        if (x.empty()) return false;
        for (char c : x)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    bool neg = false;
    if (t[0] == '+' || t[0] == '-') {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    Rat r;
    auto slash = t.find('/');
    auto dot = t.find('.');
    if (slash != std::string::npos) {
        std::string num = t.substr(0, slash), den = t.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den)) bad();
        BigInt d(den);
        if (d == 0) bad();
        r = Rat(BigInt(num)) / d;
    } else if (dot != std::string::npos) {
        std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!digits_only(ip) || (!fp.empty() && !digits_only(fp))) bad();
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        r = Rat(BigInt(ip) * scale + (fp.empty() ? BigInt(0) : BigInt(fp))) / scale;
    } else {
        if (!digits_only(t)) bad();
        r = Rat(BigInt(t));
    }
    return neg ? -r : r;
}

Rat rat_sqrt_approx(const Rat& r) {
    if (r < 0) fail(ErrorClass::usage, "sqrt of negative rational");
    if (r == 0) return Rat(0);
    // floor(sqrt(n*d * 4^k)) / (d * 2^k) with k = 64 fractional bits
    const unsigned k = 64;
    BigInt n = numerator(r), d = denominator(r);
    BigInt scaled = n * d << (2 * k);
    BigInt root = sqrt(scaled);
    return Rat(root) / (d << k);
}

} // namespace spinsys
