#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "mk/errors.hpp"

namespace mk {

/* Exact rational scalar.  mpq_class keeps values canonical under arithmetic;
 * only direct num/den construction needs an explicit canonicalize, which
 * rat_from_fraction takes care of. */
using Rat = mpq_class;

inline bool is_zero(const Rat& x) { return sgn(x) == 0; }
inline std::string scalar_str(const Rat& x) { return x.get_str(); }

inline Rat rat_from_fraction(const mpz_class& num, const mpz_class& den) {
    if (sgn(den) == 0) throw InputError("zero denominator in coefficient");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/* Prime field with a process-global modulus.  The modulus is fixed once per
 * run (screening mode uses one prime for the whole computation), so carrying
 * it in every scalar would only bloat the vectors. */
class Fp {
public:
    Fp() = default;
    Fp(long v) { // NOLINT: implicit by design, mirrors integer literals
        long r = v % static_cast<long>(p_);
        if (r < 0) r += static_cast<long>(p_);
        v_ = static_cast<std::uint32_t>(r);
    }

    static void set_modulus(std::uint32_t p);
    static std::uint32_t modulus() { return p_; }

    std::uint32_t value() const { return v_; }

    friend Fp operator+(Fp a, Fp b) { return from_raw(add(a.v_, b.v_)); }
    friend Fp operator-(Fp a, Fp b) { return from_raw(sub(a.v_, b.v_)); }
    friend Fp operator*(Fp a, Fp b) { return from_raw(mul(a.v_, b.v_)); }
    friend Fp operator/(Fp a, Fp b) { return a * b.inv(); }
    Fp operator-() const { return from_raw(v_ == 0 ? 0 : p_ - v_); }

    Fp& operator+=(Fp o) { v_ = add(v_, o.v_); return *this; }
    Fp& operator-=(Fp o) { v_ = sub(v_, o.v_); return *this; }
    Fp& operator*=(Fp o) { v_ = mul(v_, o.v_); return *this; }

    Fp inv() const;

    bool operator==(const Fp&) const = default;

private:
    static Fp from_raw(std::uint32_t v) { Fp x; x.v_ = v; return x; }
    static std::uint32_t add(std::uint32_t a, std::uint32_t b) {
        std::uint64_t s = std::uint64_t(a) + b;
        if (s >= p_) s -= p_;
        return static_cast<std::uint32_t>(s);
    }
    static std::uint32_t sub(std::uint32_t a, std::uint32_t b) {
        return b <= a ? a - b : static_cast<std::uint32_t>(a + std::uint64_t(p_) - b);
    }
    static std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
        return static_cast<std::uint32_t>(std::uint64_t(a) * b % p_);
    }

    std::uint32_t v_ = 0;
    static std::uint32_t p_;
};

inline bool is_zero(const Fp& x) { return x.value() == 0; }
inline std::string scalar_str(const Fp& x) { return std::to_string(x.value()); }

/* Reduce an exact rational into K.  For Fp this rejects fractions whose
 * denominator vanishes mod p rather than silently producing garbage. */
template <class K>
K scalar_from_fraction(const Rat& q);

template <>
inline Rat scalar_from_fraction<Rat>(const Rat& q) { return q; }

template <>
inline Fp scalar_from_fraction<Fp>(const Rat& q) {
    std::uint32_t p = Fp::modulus();
    std::uint32_t num = static_cast<std::uint32_t>(mpz_fdiv_ui(q.get_num().get_mpz_t(), p));
    std::uint32_t den = static_cast<std::uint32_t>(mpz_fdiv_ui(q.get_den().get_mpz_t(), p));
    if (den == 0)
        throw InputError("coefficient denominator divisible by the field characteristic " +
                         std::to_string(p));
    Fp n; n += Fp(static_cast<long>(num));
    Fp d(static_cast<long>(den));
    return n / d;
}

/* Which coefficient field a run uses. */
struct FieldSpec {
    bool rational = true;
    std::uint32_t p = 0;

    bool operator==(const FieldSpec&) const = default;

    std::string str() const {
        return rational ? std::string("Q") : "F " + std::to_string(p);
    }
};

} // namespace mk
