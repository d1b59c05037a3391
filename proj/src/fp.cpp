#include "mk/field.hpp"

namespace mk {

std::uint32_t Fp::p_ = 0;

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

void Fp::set_modulus(std::uint32_t p) {
    if (!is_prime_u32(p))
        throw InputError("field characteristic " + std::to_string(p) + " is not prime");
    if (p >= (1u << 31))
        throw InputError("field characteristic " + std::to_string(p) + " too large");
    p_ = p;
}

Fp Fp::inv() const {
    if (v_ == 0) throw InternalError("division by zero in F_p");
    // Extended Euclid on (v_, p_); p_ is prime so the gcd is 1.
    std::int64_t r0 = v_, r1 = p_, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1; r0 = r1; r1 = r2;
        std::int64_t s2 = s0 - q * s1; s0 = s1; s1 = s2;
    }
    if (s0 < 0) s0 += p_;
    return from_raw(static_cast<std::uint32_t>(s0));
}

} // namespace mk
