#include "exlat/fq.hpp"

namespace exlat {

FqPoly poly_trim(const FqField& F, FqPoly p) {
    for (auto& x : p.c) x = F.from_int(x);
    while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
    return p;
}

FqPoly poly_from(const FqField& F, std::vector<int64_t> coeffs) {
    FqPoly p;
    p.c = std::move(coeffs);
    return poly_trim(F, std::move(p));
}

FqPoly poly_add(const FqField& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        int64_t x = i < a.c.size() ? a.c[i] : 0;
        int64_t y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = F.add(x, y);
    }
    return poly_trim(F, std::move(r));
}

FqPoly poly_sub(const FqField& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        int64_t x = i < a.c.size() ? a.c[i] : 0;
        int64_t y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = F.sub(x, y);
    }
    return poly_trim(F, std::move(r));
}

FqPoly poly_mul(const FqField& F, const FqPoly& a, const FqPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    FqPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    return poly_trim(F, std::move(r));
}

std::pair<FqPoly, FqPoly> poly_divmod(const FqField& F, const FqPoly& a, const FqPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("poly_divmod: division by zero");
    FqPoly rem = a, quot;
    if (a.deg() >= b.deg()) quot.c.assign(a.deg() - b.deg() + 1, 0);
    int64_t lead_inv = F.inv(b.c.back());
    while (!rem.is_zero() && rem.deg() >= b.deg()) {
        int shift = rem.deg() - b.deg();
        int64_t f = F.mul(rem.c.back(), lead_inv);
        quot.c[shift] = f;
        for (int i = 0; i <= b.deg(); ++i)
            rem.c[i + shift] = F.sub(rem.c[i + shift], F.mul(f, b.c[i]));
        rem = poly_trim(F, std::move(rem));
    }
    return {poly_trim(F, std::move(quot)), rem};
}

FqPoly poly_monic(const FqField& F, const FqPoly& a) {
    if (a.is_zero()) return a;
    FqPoly r = a;
    int64_t inv = F.inv(a.c.back());
    for (auto& x : r.c) x = F.mul(x, inv);
    return r;
}

FqPoly poly_gcd(const FqField& F, FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = poly_divmod(F, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, a);
}

FuncField::Elem FuncField::make(const FqPoly& num, const FqPoly& den) const {
    if (den.is_zero()) throw std::invalid_argument("FuncField: zero denominator");
    if (num.is_zero()) return zero();
    FqPoly g = poly_gcd(base, num, den);
    FqPoly n = poly_divmod(base, num, g).first;
    FqPoly d = poly_divmod(base, den, g).first;
    int64_t lead = d.c.back();
    if (lead != 1) {
        int64_t inv = base.inv(lead);
        for (auto& x : n.c) x = base.mul(x, inv);
        for (auto& x : d.c) x = base.mul(x, inv);
    }
    return {n, d};
}

FuncField::Elem FuncField::add(const Elem& a, const Elem& b) const {
    FqPoly num = poly_add(base, poly_mul(base, a.num, b.den), poly_mul(base, b.num, a.den));
    return make(num, poly_mul(base, a.den, b.den));
}

FuncField::Elem FuncField::sub(const Elem& a, const Elem& b) const {
    FqPoly num = poly_sub(base, poly_mul(base, a.num, b.den), poly_mul(base, b.num, a.den));
    return make(num, poly_mul(base, a.den, b.den));
}

FuncField::Elem FuncField::mul(const Elem& a, const Elem& b) const {
    return make(poly_mul(base, a.num, b.num), poly_mul(base, a.den, b.den));
}

FuncField::Elem FuncField::neg(const Elem& a) const {
    Elem r = a;
    for (auto& x : r.num.c) x = base.neg(x);
    return r;
}

FuncField::Elem FuncField::inv(const Elem& a) const {
    if (is_zero(a)) throw std::invalid_argument("FuncField: inverse of zero");
    return make(a.den, a.num);
}

bool FuncField::equal(const Elem& a, const Elem& b) const {
    return poly_sub(base, poly_mul(base, a.num, b.den), poly_mul(base, b.num, a.den)).is_zero();
}

} // namespace exlat
