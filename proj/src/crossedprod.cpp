#include "cpr/crossedprod.hpp"

#include "cpr/errors.hpp"

#include <sstream>

namespace cpr {

CrossedElement::CrossedElement(SystemPtr sys) : sys_(std::move(sys)) {
    if (!sys_ || !sys_->phi) throw NotAutomorphism("crossed products need an automorphism system");
}

void CrossedElement::add(int k, const Vec& r) {
    if (r.size() != sys_->ring.dim()) throw DimensionMismatch("crossed coefficient has the wrong length");
    auto [it, fresh] = terms_.emplace(k, r);
    if (!fresh) it->second = cpr::add(it->second, r);
    if (cpr::is_zero(it->second)) terms_.erase(it);
}

namespace {

void same_system(const CrossedElement& a, const CrossedElement& b) {
    if (a.system() != b.system()) throw SystemMismatch("crossed elements over different systems");
}

} // namespace

CrossedElement CrossedElement::operator+(const CrossedElement& o) const {
    same_system(*this, o);
    CrossedElement out = *this;
    for (const auto& [k, r] : o.terms_) out.add(k, r);
    return out;
}

CrossedElement CrossedElement::operator-(const CrossedElement& o) const { return *this + o.scaled(-1); }

CrossedElement CrossedElement::scaled(const Rational& c) const {
    CrossedElement out(sys_);
    for (const auto& [k, r] : terms_) out.add(k, cpr::scaled(r, c));
    return out;
}

bool CrossedElement::operator==(const CrossedElement& o) const {
    same_system(*this, o);
    return terms_ == o.terms_;
}

Matrix phi_power(const RSystem& sys, int k) {
    if (!sys.phi) throw NotAutomorphism("system has no automorphism");
    std::size_t n = sys.ring.dim();
    Matrix base = *sys.phi;
    if (k < 0) {
        auto inv = inverse(base);
        if (!inv) throw NotAutomorphism("phi is not invertible");
        base = *inv;
    }
    Matrix out = Matrix::identity(n);
    for (int i = 0; i < std::abs(k); ++i) out = base * out;
    return out;
}

CrossedElement crossed_term(const SystemPtr& sys, const Vec& r, int k) {
    CrossedElement out(sys);
    out.add(k, r);
    return out;
}

CrossedElement cross_mul(const CrossedElement& a, const CrossedElement& b) {
    same_system(a, b);
    const RSystem& sys = *a.system();
    CrossedElement out(a.system());
    std::map<int, Matrix> powers;
    for (const auto& [k1, r1] : a.terms()) {
        auto it = powers.find(k1);
        if (it == powers.end()) it = powers.emplace(k1, phi_power(sys, k1)).first;
        for (const auto& [k2, r2] : b.terms()) out.add(k1 + k2, sys.ring.mul(r1, it->second.apply(r2)));
    }
    return out;
}

CrossedElement toeplitz_to_crossed(const ToeplitzElement& x) {
    const ToeplitzRing& ring = *x.ring();
    const SystemPtr& sys = ring.tower().system_ptr();
    std::size_t n = sys->ring.dim();
    CrossedElement out(sys);
    for (const auto& [g, v] : x.components()) {
        const ComponentSpace& cs = ring.component(g);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (sgn(v[i]) == 0) continue;
            auto [qa, pa] = cs.pure[i];
            if (g.m == 0 && g.n == 0) {
                out.add(0, scaled(unit_vec(n, qa), v[i]));
                continue;
            }
            if (!sys->ring.unital) throw NotAutomorphism("crossed products are formed over unital rings");
            CrossedElement term = crossed_term(sys, scaled(sys->ring.unit, v[i]), 0);
            if (g.m > 0)
                for (int l : ring.tower().space(Side::Q, g.m).words[qa])
                    term = cross_mul(term, crossed_term(sys, unit_vec(n, static_cast<std::size_t>(l)), -1));
            if (g.n > 0)
                for (int l : ring.tower().space(Side::P, g.n).words[pa])
                    term = cross_mul(term, crossed_term(sys, unit_vec(n, static_cast<std::size_t>(l)), 1));
            out = out + term;
        }
    }
    return out;
}

CrossedElement cp_to_crossed(const CpElement& x) {
    if (!x.ctx) throw ContextMismatch("element without a context");
    const RSystem& sys = x.ctx->ring()->system();
    if (sys.provenance != Provenance::automorphism || !sys.phi)
        throw ContextMismatch("the crossed product needs an automorphism system");
    if (!(x.ctx->ideal().ideal == Subspace::full(sys.ring.dim())))
        throw ContextMismatch("the crossed product is the relative ring for J = R");
    if (x.rep.ring() != x.ctx->ring()) throw ContextMismatch("element from a different Toeplitz ring");
    return toeplitz_to_crossed(x.rep);
}

std::string crossed_to_string(const CrossedElement& x) {
    if (x.is_zero()) return "0";
    const auto& labels = x.system()->ring.labels;
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, r] : x.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "[";
        bool inner = true;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (sgn(r[i]) == 0) continue;
            if (!inner) os << (sgn(r[i]) > 0 ? " + " : " - ");
            else if (sgn(r[i]) < 0) os << "-";
            inner = false;
            Rational a = abs(r[i]);
            if (a != 1) os << a.get_str() << "*";
            os << labels[i];
        }
        os << ", " << k << "]";
    }
    return os.str();
}

} // namespace cpr
