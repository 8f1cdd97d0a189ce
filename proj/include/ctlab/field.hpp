#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ctlab {

inline bool is_prime(uint32_t p) {
    if (p < 2) return false;
    for (uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Arithmetic in GF(p) for a small prime p. Elements are plain uint32_t in
// [0, p); the field object carries the modulus.
class GF {
  public:
    explicit GF(uint32_t p) : p_(p) {
        if (!is_prime(p)) throw std::domain_error("GF modulus must be prime, got " + std::to_string(p));
    }

    uint32_t p() const { return p_; }
    uint32_t reduce(int64_t x) const {
        int64_t r = x % static_cast<int64_t>(p_);
        return static_cast<uint32_t>(r < 0 ? r + p_ : r);
    }
    uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % p_; }
    uint32_t sub(uint32_t a, uint32_t b) const { return (a + p_ - b % p_) % p_; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p_);
    }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    uint32_t pow(uint32_t a, uint32_t e) const {
        uint64_t r = 1, base = a % p_;
        while (e) {
            if (e & 1) r = (r * base) % p_;
            base = (base * base) % p_;
            e >>= 1;
        }
        return static_cast<uint32_t>(r);
    }
    uint32_t inv(uint32_t a) const {
        if (a % p_ == 0) throw std::domain_error("division by zero in GF(" + std::to_string(p_) + ")");
        return pow(a % p_, p_ - 2);
    }
    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

    bool operator==(const GF& o) const { return p_ == o.p_; }

  private:
    uint32_t p_;
};

}  // namespace ctlab
