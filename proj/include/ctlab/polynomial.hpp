#pragma once

#include <optional>
#include <vector>

#include "field.hpp"

namespace ctlab {

// Polynomial over GF(p), coefficients low-to-high, length degree+1.
struct Polynomial {
    GF field;
    std::vector<uint32_t> coeffs;

    int degree_bound() const { return static_cast<int>(coeffs.size()) - 1; }

    uint32_t eval(uint32_t x) const {
        uint32_t acc = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = field.add(field.mul(acc, x), *it);
        return acc;
    }

    bool operator==(const Polynomial& o) const {
        if (!(field == o.field)) return false;
        // compare up to trailing zeros
        size_t n = std::max(coeffs.size(), o.coeffs.size());
        for (size_t i = 0; i < n; ++i) {
            uint32_t a = i < coeffs.size() ? coeffs[i] : 0;
            uint32_t b = i < o.coeffs.size() ? o.coeffs[i] : 0;
            if (a != b) return false;
        }
        return true;
    }
};

// Lagrange interpolation through the given points (x distinct). Returns the
// unique polynomial of degree < points.size().
inline Polynomial interpolate(const GF& f, const std::vector<std::pair<uint32_t, uint32_t>>& points) {
    size_t k = points.size();
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j)
            if (points[i].first % f.p() == points[j].first % f.p())
                throw std::domain_error("interpolation points must have distinct x");
    std::vector<uint32_t> acc(k, 0);
    for (size_t i = 0; i < k; ++i) {
        // basis_i(x) = prod_{j!=i} (x - x_j) / (x_i - x_j)
        std::vector<uint32_t> basis{1};
        uint32_t denom = 1;
        for (size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            uint32_t xj = points[j].first % f.p();
            std::vector<uint32_t> next(basis.size() + 1, 0);
            for (size_t d = 0; d < basis.size(); ++d) {
                next[d + 1] = f.add(next[d + 1], basis[d]);
                next[d] = f.add(next[d], f.mul(basis[d], f.neg(xj)));
            }
            basis = std::move(next);
            denom = f.mul(denom, f.sub(points[i].first % f.p(), xj));
        }
        uint32_t scale = f.div(points[i].second % f.p(), denom);
        for (size_t d = 0; d < basis.size(); ++d) acc[d] = f.add(acc[d], f.mul(basis[d], scale));
    }
    return Polynomial{f, acc};
}

}  // namespace ctlab
