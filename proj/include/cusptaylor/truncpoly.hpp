#ifndef CUSPTAYLOR_TRUNCPOLY_HPP
#define CUSPTAYLOR_TRUNCPOLY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cusptaylor/quadratic.hpp"

namespace cusptaylor {

/// Element of R_l = (O_K/lO_K)[t]/(t^l): a dense length-l coefficient vector,
/// coefficient i belonging to t^i.  Components are kept normalized to [0, l),
/// so the byte image of (av, bv) is a canonical key for cycle-detection maps.
class TruncPoly {
  public:
    TruncPoly() = default;
    TruncPoly(std::int64_t l, FieldSpec f) : l_(l), field_(f), av_(l, 0), bv_(l, 0) {
        if (l < 3 || l % 2 == 0) throw std::invalid_argument("TruncPoly: modulus must be an odd prime");
    }
    static TruncPoly one(std::int64_t l, FieldSpec f) {
        TruncPoly p(l, f);
        p.av_[0] = 1;
        return p;
    }

    std::int64_t modulus() const { return l_; }
    FieldSpec field() const { return field_; }
    std::int64_t size() const { return l_; }

    ResidueElt coeff(std::int64_t i) const { return ResidueElt(av_[i], bv_[i], l_, field_); }
    void set_coeff(std::int64_t i, const ResidueElt &c) {
        av_[i] = c.a;
        bv_[i] = c.b;
    }
    ResidueElt eval0() const { return coeff(0); }

    bool is_zero() const {
        for (std::int64_t i = 0; i < l_; ++i)
            if (av_[i] || bv_[i]) return false;
        return true;
    }

    friend bool operator==(const TruncPoly &p, const TruncPoly &q) {
        return p.l_ == q.l_ && p.field_ == q.field_ && p.av_ == q.av_ && p.bv_ == q.bv_;
    }
    friend bool operator!=(const TruncPoly &p, const TruncPoly &q) { return !(p == q); }

    friend TruncPoly operator+(const TruncPoly &p, const TruncPoly &q) {
        p.check_compat(q);
        TruncPoly r(p.l_, p.field_);
        for (std::int64_t i = 0; i < p.l_; ++i) {
            r.av_[i] = (p.av_[i] + q.av_[i]) % p.l_;
            r.bv_[i] = (p.bv_[i] + q.bv_[i]) % p.l_;
        }
        return r;
    }
    friend TruncPoly operator-(const TruncPoly &p, const TruncPoly &q) {
        p.check_compat(q);
        TruncPoly r(p.l_, p.field_);
        for (std::int64_t i = 0; i < p.l_; ++i) {
            r.av_[i] = (p.av_[i] - q.av_[i] + p.l_) % p.l_;
            r.bv_[i] = (p.bv_[i] - q.bv_[i] + p.l_) % p.l_;
        }
        return r;
    }
    friend TruncPoly operator*(const ResidueElt &c, const TruncPoly &p) {
        if (c.l != p.l_) throw std::invalid_argument("modulus mismatch");
        TruncPoly r(p.l_, p.field_);
        const std::int64_t d = p.field_.d, l = p.l_;
        for (std::int64_t i = 0; i < l; ++i) {
            r.av_[i] = (c.a * p.av_[i] + d * (c.b * p.bv_[i] % l)) % l;
            r.bv_[i] = (c.a * p.bv_[i] + c.b * p.av_[i]) % l;
        }
        return r;
    }

    /// Convolution with every term of degree >= l discarded.  Products of
    /// residues stay well below 2^63, so the inner sums accumulate raw and
    /// reduce once per output coefficient.
    friend TruncPoly trunc_mul(const TruncPoly &p, const TruncPoly &q) {
        p.check_compat(q);
        const std::int64_t l = p.l_, d = p.field_.d;
        TruncPoly r(l, p.field_);
        for (std::int64_t k = 0; k < l; ++k) {
            std::int64_t sa = 0, sb = 0;
            for (std::int64_t i = 0; i <= k; ++i) {
                sa += p.av_[i] * q.av_[k - i] + d * (p.bv_[i] * q.bv_[k - i] % l);
                sb += p.av_[i] * q.bv_[k - i] + p.bv_[i] * q.av_[k - i];
            }
            r.av_[k] = sa % l;
            r.bv_[k] = sb % l;
        }
        return r;
    }

    /// Formal derivative.  Descends to R_l since d/dt t^l = l t^{l-1} = 0, so
    /// the output coefficient of t^{l-1} is always 0.
    friend TruncPoly trunc_derivative(const TruncPoly &p) {
        TruncPoly r(p.l_, p.field_);
        for (std::int64_t i = 1; i < p.l_; ++i) {
            r.av_[i - 1] = i * p.av_[i] % p.l_;
            r.bv_[i - 1] = i * p.bv_[i] % p.l_;
        }
        return r;
    }

    /// First index with a nonzero coefficient, or nullopt for the zero polynomial.
    std::optional<std::int64_t> first_nonzero() const {
        for (std::int64_t i = 0; i < l_; ++i)
            if (av_[i] || bv_[i]) return i;
        return std::nullopt;
    }

    std::string str() const {
        std::string s;
        for (std::int64_t i = 0; i < l_; ++i) {
            if (!av_[i] && !bv_[i]) continue;
            if (!s.empty()) s += " + ";
            s += coeff(i).str();
            if (i == 1) s += "*t";
            if (i > 1) s += "*t^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

    const std::vector<std::int64_t> &raw_a() const { return av_; }
    const std::vector<std::int64_t> &raw_b() const { return bv_; }

    template <typename H>
    void feed_hash(H &&h) const {
        for (std::int64_t i = 0; i < l_; ++i) {
            h(static_cast<std::uint64_t>(av_[i]));
            h(static_cast<std::uint64_t>(bv_[i]));
        }
    }

  private:
    void check_compat(const TruncPoly &q) const {
        if (l_ != q.l_) throw std::invalid_argument("modulus mismatch");
        check_same_field(field_, q.field_);
    }

    std::int64_t l_ = 0;
    FieldSpec field_ = FieldSpec::rational();
    std::vector<std::int64_t> av_, bv_;
};

}  // namespace cusptaylor

#endif
