#pragma once

// The crossed product R x_phi Z of an automorphism system, in closed form:
// sums of [r, k] with [r1, k1][r2, k2] = [r1 phi^k1(r2), k1 + k2].

#include "cpr/cpring.hpp"
#include "cpr/exactlin.hpp"
#include "cpr/rsystem.hpp"

#include <map>
#include <string>

namespace cpr {

class CrossedElement {
public:
    explicit CrossedElement(SystemPtr sys);  // throws NotAutomorphism without phi

    const SystemPtr& system() const { return sys_; }
    const std::map<int, Vec>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add(int k, const Vec& r);

    CrossedElement operator+(const CrossedElement& o) const;
    CrossedElement operator-(const CrossedElement& o) const;
    CrossedElement scaled(const Rational& c) const;
    bool operator==(const CrossedElement& o) const;

private:
    SystemPtr sys_;
    std::map<int, Vec> terms_;
};

CrossedElement crossed_term(const SystemPtr& sys, const Vec& r, int k);
CrossedElement cross_mul(const CrossedElement& a, const CrossedElement& b);  // throws SystemMismatch
Matrix phi_power(const RSystem& sys, int k);

// iota_R(r) -> [r, 0], iota_Q(q) -> [q, -1], iota_P(p) -> [p, 1], extended
// over the word decomposition of each basis element of the representative.
// The context must be an automorphism system with J = R.
CrossedElement cp_to_crossed(const CpElement& x);  // throws ContextMismatch
CrossedElement toeplitz_to_crossed(const ToeplitzElement& x);

std::string crossed_to_string(const CrossedElement& x);

} // namespace cpr
