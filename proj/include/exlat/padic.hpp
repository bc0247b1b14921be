#pragma once

// Exact arithmetic in R = Z localized at p, truncated at precision p^K.
// Every quantity we ever decide on (valuations of matrix entries, invariant
// factors, exponents of cyclic summands) stays far below K, so the truncated
// model is exact for this artifact. K is chosen per context; val >= K is
// treated as zero.

#include <cassert>
#include <cstdint>
#include <stdexcept>

namespace exlat {

// Arithmetic context: the prime p and working precision K (we compute mod p^K).
struct PCtx {
    int64_t p = 2;
    int k = 32;        // precision exponent
    int64_t pk = 0;    // p^k, cached

    PCtx() = default;
    PCtx(int64_t p_, int k_) : p(p_), k(k_) {
        pk = 1;
        for (int i = 0; i < k; ++i) {
            pk *= p;
            if (pk > (int64_t(1) << 52)) throw std::invalid_argument("PCtx: p^k too large");
        }
    }

    int64_t reduce(int64_t x) const {
        x %= pk;
        if (x < 0) x += pk;
        return x;
    }

    int64_t add(int64_t a, int64_t b) const { return reduce(a + b); }
    int64_t sub(int64_t a, int64_t b) const { return reduce(a - b); }
    int64_t mul(int64_t a, int64_t b) const {
        return int64_t((__int128)a * b % pk + pk) % pk;
    }
    int64_t neg(int64_t a) const { return reduce(-a); }

    int64_t pow_p(int v) const {
        assert(v >= 0);
        if (v >= k) return 0;
        int64_t r = 1;
        for (int i = 0; i < v; ++i) r *= p;
        return r;
    }

    // p-adic valuation of the residue; val(0) = k ("zero").
    int val(int64_t x) const {
        x = reduce(x);
        if (x == 0) return k;
        int v = 0;
        while (x % p == 0) { x /= p; ++v; }
        return v;
    }

    bool is_zero(int64_t x) const { return reduce(x) == 0; }
    bool is_unit(int64_t x) const { return reduce(x) % p != 0; }

    // x = unit * p^val; returns the unit part (mod p^(k - val)).
    int64_t unit_part(int64_t x) const {
        x = reduce(x);
        assert(x != 0);
        while (x % p == 0) x /= p;
        return x;
    }

    // Inverse of a unit mod p^k.
    int64_t inv_unit(int64_t u) const {
        u = reduce(u);
        if (!is_unit(u)) throw std::invalid_argument("inv_unit: not a unit");
        // extended euclid on (u, pk)
        int64_t a = u, b = pk, x0 = 1, x1 = 0;
        while (b != 0) {
            int64_t q = a / b;
            int64_t t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        return reduce(x0);
    }

    // Exact division a / b where val(a) >= val(b), b != 0.
    int64_t divide(int64_t a, int64_t b) const {
        a = reduce(a); b = reduce(b);
        assert(b != 0);
        int vb = val(b);
        int64_t ub = unit_part(b);
        if (a == 0) return 0;
        int va = val(a);
        assert(va >= vb);
        int64_t ua = a;
        for (int i = 0; i < vb; ++i) ua /= p;
        return mul(ua, inv_unit(ub));
    }
};

} // namespace exlat
