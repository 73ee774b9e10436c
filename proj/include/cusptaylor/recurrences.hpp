#ifndef CUSPTAYLOR_RECURRENCES_HPP
#define CUSPTAYLOR_RECURRENCES_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cusptaylor/quadratic.hpp"
#include "cusptaylor/truncpoly.hpp"

namespace cusptaylor {

// ---------------------------------------------------------------------------
// Bivariate polynomials in Q = E4 and R = E6.
// ---------------------------------------------------------------------------

/// Polynomial in Q, R keyed by (a, b) -> coefficient of R^a Q^b.  A form of
/// weight k is a combination of monomials with 6a + 4b = k.  Coefficients are
/// rational so the Serre derivative (which divides by 2 and 3) stays exact;
/// the B_n themselves are integral.
class QRPoly {
  public:
    using Key = std::pair<int, int>;  // (R exponent, Q exponent)

    QRPoly() = default;
    static QRPoly constant(const mpq_class &c) {
        QRPoly p;
        if (c != 0) p.terms_[{0, 0}] = c;
        return p;
    }
    static QRPoly monomial(int a, int b, const mpq_class &c) {
        QRPoly p;
        if (c != 0) p.terms_[{a, b}] = c;
        return p;
    }

    const std::map<Key, mpq_class> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    mpq_class coeff(int a, int b) const {
        auto it = terms_.find({a, b});
        return it == terms_.end() ? mpq_class(0) : it->second;
    }

    void add_term(int a, int b, const mpq_class &c) {
        if (c == 0) return;
        auto &slot = terms_[{a, b}];
        slot += c;
        if (slot == 0) terms_.erase({a, b});
    }

    friend QRPoly operator+(const QRPoly &p, const QRPoly &q) {
        QRPoly r = p;
        for (const auto &[k, c] : q.terms_) r.add_term(k.first, k.second, c);
        return r;
    }
    friend QRPoly operator-(const QRPoly &p, const QRPoly &q) {
        QRPoly r = p;
        for (const auto &[k, c] : q.terms_) r.add_term(k.first, k.second, -c);
        return r;
    }
    friend QRPoly operator*(const mpq_class &c, const QRPoly &p) {
        QRPoly r;
        if (c == 0) return r;
        for (const auto &[k, v] : p.terms_) r.terms_[k] = c * v;
        return r;
    }
    friend QRPoly mul_Q(const QRPoly &p) {  // multiply by Q
        QRPoly r;
        for (const auto &[k, v] : p.terms_) r.terms_[{k.first, k.second + 1}] = v;
        return r;
    }
    friend bool operator==(const QRPoly &p, const QRPoly &q) { return p.terms_ == q.terms_; }

    /// Weight of a homogeneous polynomial; throws if terms mix weights.
    int weight() const {
        if (terms_.empty()) return 0;
        int w = -1;
        for (const auto &[k, v] : terms_) {
            int wk = 6 * k.first + 4 * k.second;
            if (w == -1) w = wk;
            else if (w != wk) throw std::invalid_argument("QRPoly: not weight-homogeneous");
        }
        return w;
    }
    bool is_homogeneous(int k) const {
        for (const auto &[key, v] : terms_)
            if (6 * key.first + 4 * key.second != k) return false;
        return true;
    }

  private:
    std::map<Key, mpq_class> terms_;
};

/// Serre derivative on a weight-homogeneous polynomial in Q, R:
/// theta(R^a Q^b) = -a/2 R^{a-1} Q^{b+2} - b/3 R^{a+1} Q^{b-1},
/// mapping weight k to weight k + 2 (from theta Q = -R/3, theta R = -Q^2/2).
inline QRPoly theta_action(const QRPoly &p, int weight_k) {
    if (!p.is_homogeneous(weight_k))
        throw std::invalid_argument("theta_action: input not homogeneous of the stated weight");
    QRPoly r;
    for (const auto &[k, c] : p.terms()) {
        auto [a, b] = k;
        if (a) r.add_term(a - 1, b + 2, mpq_class(-a) / 2 * c);
        if (b) r.add_term(a + 1, b - 1, mpq_class(-b) / 3 * c);
    }
    return r;
}

/// B_0..B_nmax with B_{n+1} = 12 theta B_n - n(n+11) Q B_{n-1}.  B_n has
/// weight 2n and integer coefficients.
inline std::vector<QRPoly> bseq(int nmax) {
    std::vector<QRPoly> B;
    B.reserve(nmax + 1);
    B.push_back(QRPoly::constant(1));
    if (nmax >= 1) B.push_back(QRPoly());
    for (int n = 1; n < nmax; ++n) {
        QRPoly next = mpq_class(12) * theta_action(B[n], 2 * n);
        next = next - mpq_class(n) * mpq_class(n + 11) * mul_Q(B[n - 1]);
        B.push_back(std::move(next));
    }
    return B;
}

// ---------------------------------------------------------------------------
// Univariate polynomials over O_K and the three-term recursion engine.
// ---------------------------------------------------------------------------

/// Dense polynomial in t with QuadElt coefficients.
class QuadPoly {
  public:
    QuadPoly() : field_(FieldSpec::rational()) {}
    explicit QuadPoly(FieldSpec f) : field_(f) {}
    QuadPoly(std::vector<QuadElt> coeffs, FieldSpec f) : coeffs_(std::move(coeffs)), field_(f) {
        for (const auto &c : coeffs_) check_same_field(c.field, field_);
        trim();
    }
    static QuadPoly constant(QuadElt c) {
        FieldSpec f = c.field;
        return QuadPoly({std::move(c)}, f);
    }

    FieldSpec field() const { return field_; }
    std::size_t degree_bound() const { return coeffs_.size(); }  // number of stored coeffs
    const std::vector<QuadElt> &coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    QuadElt coeff(std::size_t i) const {
        return i < coeffs_.size() ? coeffs_[i] : QuadElt(mpz_class(0), mpz_class(0), field_);
    }
    QuadElt eval0() const { return coeff(0); }

    friend QuadPoly operator+(const QuadPoly &p, const QuadPoly &q) {
        check_same_field(p.field_, q.field_);
        QuadPoly r(p.field_);
        r.coeffs_.resize(std::max(p.coeffs_.size(), q.coeffs_.size()),
                         QuadElt(mpz_class(0), mpz_class(0), p.field_));
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = p.coeff(i) + q.coeff(i);
        r.trim();
        return r;
    }
    friend QuadPoly operator*(const QuadPoly &p, const QuadPoly &q) {
        check_same_field(p.field_, q.field_);
        QuadPoly r(p.field_);
        if (p.is_zero() || q.is_zero()) return r;
        r.coeffs_.assign(p.coeffs_.size() + q.coeffs_.size() - 1,
                         QuadElt(mpz_class(0), mpz_class(0), p.field_));
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs_.size(); ++j)
                r.coeffs_[i + j] = r.coeffs_[i + j] + p.coeffs_[i] * q.coeffs_[j];
        r.trim();
        return r;
    }
    friend QuadPoly operator*(const QuadElt &c, const QuadPoly &p) {
        QuadPoly r(p.field_);
        r.coeffs_.reserve(p.coeffs_.size());
        for (const auto &x : p.coeffs_) r.coeffs_.push_back(c * x);
        r.trim();
        return r;
    }
    friend QuadPoly operator*(const mpz_class &c, const QuadPoly &p) {
        return QuadElt(c, 0, p.field_) * p;
    }
    friend bool operator==(const QuadPoly &p, const QuadPoly &q) {
        return p.field_ == q.field_ && p.coeffs_ == q.coeffs_;
    }

    QuadPoly derivative() const {
        QuadPoly r(field_);
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            r.coeffs_.push_back(mpz_class(static_cast<long>(i)) * coeffs_[i]);
        r.trim();
        return r;
    }

    TruncPoly reduce_mod(std::int64_t l) const {
        TruncPoly r(l, field_);
        for (std::size_t i = 0; i < coeffs_.size() && i < static_cast<std::size_t>(l); ++i)
            r.set_coeff(i, reduce(coeffs_[i], l));
        return r;
    }

    /// Exponents present with nonzero coefficient.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) s.push_back(i);
        return s;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
    std::vector<QuadElt> coeffs_;
    FieldSpec field_;
};

/// Coefficients of the three-term rule
///   q_{n+1} = (a1 + n a2) q_n + a3 q_n' + n(n+11) a4 q_{n-1},
/// with q_0 = 1 and q_1 = a1.  All four exact sequences in play (p_n at i,
/// q_n at omega, the Lemma p_n with parameters m1, m2, and the general CM
/// q_{n,z}) are instances of this rule.
struct ThreeTermRule {
    QuadPoly a1, a2, a3, a4;
    FieldSpec field;

    QuadPoly step(const QuadPoly &prev, const QuadPoly &cur, long n) const {
        QuadPoly lin = a1 + QuadElt(mpz_class(n), 0, field) * a2;
        QuadPoly next = lin * cur + a3 * cur.derivative();
        mpz_class f = mpz_class(n) * (n + 11);
        next = next + QuadElt(f, 0, field) * (a4 * prev);
        return next;
    }
};

/// Streaming evaluator holding only (q_{n-1}, q_n); coefficient growth makes
/// storing the history prohibitive.
class ExactSeqStream {
  public:
    explicit ExactSeqStream(ThreeTermRule rule)
        : rule_(std::move(rule)),
          prev_(rule_.field),
          cur_(QuadPoly::constant(QuadElt(mpz_class(1), 0, rule_.field))),
          n_(0) {}

    long index() const { return n_; }
    const QuadPoly &current() const { return cur_; }  // q_n

    void advance() {
        if (n_ == 0) {
            prev_ = cur_;
            cur_ = rule_.a1;
        } else {
            QuadPoly next = rule_.step(prev_, cur_, n_);
            prev_ = std::move(cur_);
            cur_ = std::move(next);
        }
        ++n_;
    }

    /// q_n for one-off use.
    static QuadPoly at(const ThreeTermRule &rule, long n) {
        ExactSeqStream s(rule);
        while (s.index() < n) s.advance();
        return s.current();
    }

  private:
    ThreeTermRule rule_;
    QuadPoly prev_, cur_;
    long n_;
};

inline QuadPoly make_t_poly(FieldSpec f, const QuadElt &c0, const QuadElt &c1) {
    return QuadPoly({c0, c1}, f);
}

/// Rule for p_n(t): p_{n+1} = -2nt p_n + 6(t^2-1) p_n' - n(n+11) p_{n-1}.
inline ThreeTermRule pseq_rule() {
    FieldSpec f = FieldSpec::rational();
    auto Z = [&](long v) { return QuadElt(mpz_class(v), 0, f); };
    ThreeTermRule r;
    r.field = f;
    r.a1 = QuadPoly(f);
    r.a2 = make_t_poly(f, Z(0), Z(-2));
    r.a3 = QuadPoly({Z(-6), Z(0), Z(6)}, f);
    r.a4 = QuadPoly::constant(Z(-1));
    return r;
}

/// Rule for q_n(t): q_{n+1} = -2nt^2 q_n + 4(t^3-1) q_n' - n(n+11) t q_{n-1}.
inline ThreeTermRule qseq_omega_rule() {
    FieldSpec f = FieldSpec::rational();
    auto Z = [&](long v) { return QuadElt(mpz_class(v), 0, f); };
    ThreeTermRule r;
    r.field = f;
    r.a1 = QuadPoly(f);
    r.a2 = QuadPoly({Z(0), Z(0), Z(-2)}, f);
    r.a3 = QuadPoly({Z(-4), Z(0), Z(0), Z(4)}, f);
    r.a4 = make_t_poly(f, Z(0), Z(-1));
    return r;
}

/// Lemma rule with parameters m1, m2:
///   p_{n+1} = (2(m1-m2)n + 12 m1) t p_n + 6 m2 (t^2-1) p_n'
///             - n(n+11) [m2(m2-6m1) + (4 m1 m2 + m1^2) t^2] p_{n-1}.
inline ThreeTermRule general_pseq_rule(const QuadElt &m1, const QuadElt &m2) {
    check_same_field(m1.field, m2.field);
    FieldSpec f = m1.field;
    auto Z = [&](long v) { return QuadElt(mpz_class(v), 0, f); };
    ThreeTermRule r;
    r.field = f;
    r.a1 = make_t_poly(f, Z(0), mpz_class(12) * m1);
    r.a2 = make_t_poly(f, Z(0), mpz_class(2) * (m1 - m2));
    r.a3 = QuadPoly({mpz_class(-6) * m2, Z(0), mpz_class(6) * m2}, f);
    QuadElt c0 = -(m2 * (m2 - mpz_class(6) * m1));
    QuadElt c2 = -(mpz_class(4) * (m1 * m2) + m1 * m1);
    r.a4 = QuadPoly({c0, Z(0), c2}, f);
    return r;
}

inline QuadPoly general_pseq(const QuadElt &m1, const QuadElt &m2, long n) {
    return ExactSeqStream::at(general_pseq_rule(m1, m2), n);
}

inline std::vector<mpz_class> pseq_constants(long nmax) {
    ExactSeqStream s(pseq_rule());
    std::vector<mpz_class> out;
    for (long n = 0; n <= nmax; ++n) {
        out.push_back(s.current().eval0().a);
        s.advance();
    }
    return out;
}

inline std::vector<mpz_class> qseq_omega_constants(long nmax) {
    ExactSeqStream s(qseq_omega_rule());
    std::vector<mpz_class> out;
    for (long n = 0; n <= nmax; ++n) {
        out.push_back(s.current().eval0().a);
        s.advance();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reduced recursion in R_l, with the index taken mod l.
// ---------------------------------------------------------------------------

/// The same three-term rule pushed into R_l.  The linear coefficient
/// (a1 + n a2) and the factor n(n+11) depend only on n mod l, so both are
/// precomputed per residue class.
class ModThreeTermRule {
  public:
    ModThreeTermRule(const ThreeTermRule &rule, std::int64_t l)
        : l_(l), field_(rule.field), a3_(rule.a3.reduce_mod(l)), a4_(rule.a4.reduce_mod(l)) {
        TruncPoly a1 = rule.a1.reduce_mod(l), a2 = rule.a2.reduce_mod(l);
        lin_.reserve(l);
        fac_.reserve(l);
        for (std::int64_t n = 0; n < l; ++n) {
            lin_.push_back(a1 + ResidueElt(n, 0, l, field_) * a2);
            fac_.push_back(n * (n + 11) % l);
        }
        a1_ = a1;
    }

    std::int64_t modulus() const { return l_; }
    FieldSpec field() const { return field_; }
    const TruncPoly &a1() const { return a1_; }
    const TruncPoly &a3() const { return a3_; }
    const TruncPoly &a4() const { return a4_; }
    TruncPoly a2() const { return lin_[1] - a1_; }

    TruncPoly step(const TruncPoly &prev, const TruncPoly &cur, std::int64_t n) const {
        std::int64_t r = n % l_;
        TruncPoly next = trunc_mul(lin_[r], cur) + trunc_mul(a3_, trunc_derivative(cur));
        if (fac_[r] != 0)
            next = next + ResidueElt(fac_[r], 0, l_, field_) * trunc_mul(a4_, prev);
        return next;
    }

  private:
    std::int64_t l_;
    FieldSpec field_;
    TruncPoly a1_, a3_, a4_;
    std::vector<TruncPoly> lin_;
    std::vector<std::int64_t> fac_;
};

/// Streaming q-bar_n in R_l.
class ModSeqStream {
  public:
    explicit ModSeqStream(const ModThreeTermRule &rule)
        : rule_(&rule),
          prev_(rule.modulus(), rule.field()),
          cur_(TruncPoly::one(rule.modulus(), rule.field())),
          n_(0) {}

    std::int64_t index() const { return n_; }
    const TruncPoly &current() const { return cur_; }

    void advance() {
        if (n_ == 0) {
            prev_ = cur_;
            cur_ = rule_->a1();
        } else {
            TruncPoly next = rule_->step(prev_, cur_, n_);
            prev_ = std::move(cur_);
            cur_ = std::move(next);
        }
        ++n_;
    }

  private:
    const ModThreeTermRule *rule_;
    TruncPoly prev_, cur_;
    std::int64_t n_;
};

}  // namespace cusptaylor

#endif
