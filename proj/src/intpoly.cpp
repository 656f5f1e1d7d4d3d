#include "heckelab/intpoly.hpp"

#include <sstream>

namespace heckelab {

std::int64_t mod_norm(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, nt = 1, r = m, nr = mod_norm(a, m);
    while (nr != 0) {
        std::int64_t k = r / nr;
        t -= k * nt;
        std::swap(t, nt);
        r -= k * nr;
        std::swap(r, nr);
    }
    if (r != 1) return std::nullopt;
    return mod_norm(t, m);
}

IntPoly::IntPoly(std::int64_t c) {
    if (c != 0) terms_[0] = c;
}

IntPoly IntPoly::monomial(std::int64_t c, int exp) {
    IntPoly r;
    if (c != 0) r.terms_[exp] = c;
    return r;
}

std::int64_t IntPoly::coeff(int exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? 0 : it->second;
}

int IntPoly::min_exp() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int IntPoly::max_exp() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

void IntPoly::clean() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second == 0 ? terms_.erase(it) : std::next(it);
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    IntPoly r = *this;
    for (auto [e, c] : o.terms_) r.terms_[e] += c;
    r.clean();
    return r;
}

IntPoly IntPoly::operator-() const {
    IntPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + (-o); }

IntPoly IntPoly::operator*(const IntPoly& o) const {
    IntPoly r;
    for (auto [e1, c1] : terms_)
        for (auto [e2, c2] : o.terms_) r.terms_[e1 + e2] += c1 * c2;
    r.clean();
    return r;
}

IntPoly IntPoly::pow(int k) const {
    IntPoly r(1);
    for (int i = 0; i < k; ++i) r *= *this;
    return r;
}

IntPoly IntPoly::shifted(int k) const {
    IntPoly r;
    for (auto [e, c] : terms_) r.terms_[e + k] = c;
    return r;
}

std::optional<IntPoly> IntPoly::divide(const IntPoly& d) const {
    if (d.is_zero()) return std::nullopt;
    if (is_zero()) return IntPoly();
    // Strip the powers of p (units in the Laurent ring), then ordinary long division.
    const int shift = min_exp() - d.min_exp();
    IntPoly rem = shifted(-min_exp());
    const IntPoly den = d.shifted(-d.min_exp());
    const int ddeg = den.max_exp();
    const std::int64_t lead = den.coeff(ddeg);
    IntPoly q;
    while (!rem.is_zero() && rem.max_exp() >= ddeg) {
        const int e = rem.max_exp();
        const std::int64_t c = rem.coeff(e);
        if (c % lead != 0) return std::nullopt;
        IntPoly t = monomial(c / lead, e - ddeg);
        q += t;
        rem -= t * den;
    }
    if (!rem.is_zero()) return std::nullopt;
    return q.shifted(shift);
}

std::optional<std::int64_t> IntPoly::eval(std::int64_t p) const {
    // Work with a common power of p pulled out so negative exponents are exact.
    const int low = std::min(0, min_exp());
    std::int64_t acc = 0;
    for (auto [e, c] : terms_) {
        std::int64_t t = c;
        for (int k = 0; k < e - low; ++k) t *= p;
        acc += t;
    }
    std::int64_t den = 1;
    for (int k = 0; k < -low; ++k) den *= p;
    if (acc % den != 0) return std::nullopt;
    return acc / den;
}

std::optional<std::int64_t> IntPoly::eval_mod(std::int64_t p_res, std::int64_t m) const {
    std::int64_t pr = mod_norm(p_res, m);
    std::optional<std::int64_t> inv;
    if (min_exp() < 0) {
        inv = mod_inverse(pr, m);
        if (!inv) return std::nullopt;
    }
    std::int64_t acc = 0;
    for (auto [e, c] : terms_) {
        const std::int64_t base = e >= 0 ? pr : *inv;
        std::int64_t t = mod_norm(c, m);
        for (int k = 0; k < (e >= 0 ? e : -e); ++k) t = t * base % m;
        acc = (acc + t) % m;
    }
    return acc;
}

std::string IntPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto [e, c] = *it;
        std::int64_t a = c < 0 ? -c : c;
        if (first)
            s << (c < 0 ? "-" : "");
        else
            s << (c < 0 ? " - " : " + ");
        first = false;
        if (e == 0) {
            s << a;
            continue;
        }
        if (a != 1) s << a << "*";
        s << "p";
        if (e != 1) s << "^" << (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
    }
    return s.str();
}

}  // namespace heckelab
