#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace heckelab {

// Laurent polynomial in a formal variable p with integer coefficients.
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(std::int64_t c);  // NOLINT: constants convert implicitly
    static IntPoly monomial(std::int64_t c, int exp);
    static IntPoly p() { return monomial(1, 1); }

    const std::map<int, std::int64_t>& terms() const { return terms_; }
    std::int64_t coeff(int exp) const;
    bool is_zero() const { return terms_.empty(); }
    int min_exp() const;
    int max_exp() const;
    bool is_polynomial() const { return is_zero() || min_exp() >= 0; }

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator-() const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly& operator+=(const IntPoly& o) { return *this = *this + o; }
    IntPoly& operator-=(const IntPoly& o) { return *this = *this - o; }
    IntPoly& operator*=(const IntPoly& o) { return *this = *this * o; }
    IntPoly pow(int k) const;
    IntPoly shifted(int k) const;  // times p^k

    // Exact division; nullopt when the quotient is not a Laurent polynomial.
    std::optional<IntPoly> divide(const IntPoly& d) const;

    // Value at an integer p; nullopt if negative powers make it non-integral.
    std::optional<std::int64_t> eval(std::int64_t p) const;
    // Value mod m at p = p_res; nullopt if a negative power needs a non-invertible p.
    std::optional<std::int64_t> eval_mod(std::int64_t p_res, std::int64_t m) const;

    std::string str() const;
    bool operator==(const IntPoly& o) const { return terms_ == o.terms_; }

private:
    void clean();
    std::map<int, std::int64_t> terms_;
};

std::int64_t mod_norm(std::int64_t a, std::int64_t m);
std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m);

}  // namespace heckelab
