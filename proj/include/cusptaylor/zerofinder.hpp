#ifndef CUSPTAYLOR_ZEROFINDER_HPP
#define CUSPTAYLOR_ZEROFINDER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cusptaylor/coefficients.hpp"
#include "cusptaylor/eisenstein.hpp"

namespace cusptaylor {

enum class ZeroKind { line_re0, line_rehalf, arc, interior_pair, elliptic_forced };

inline const char *zero_kind_name(ZeroKind k) {
    switch (k) {
        case ZeroKind::line_re0: return "line_re0";
        case ZeroKind::line_rehalf: return "line_rehalf";
        case ZeroKind::arc: return "arc";
        case ZeroKind::interior_pair: return "interior_pair";
        default: return "elliptic_forced";
    }
}

struct ZeroRecord {
    int m = 0;
    Cplx location;
    ZeroKind kind = ZeroKind::line_re0;
    double residual = 0;  // |E_m(z)| / 12^m
    bool confirmed = true;
    std::optional<Cplx> mirror;  // -conj(location) for interior pairs
};

struct SearchRegion {
    double y_max = 0;      // 0: pick from the 12^m limit heuristic
    double grid_step = 0.01;
    double tolerance = 1e-6;

    double effective_ymax() const {
        // E_m - 12^m decays like 1/y (E2* term); 11/(2pi) ln 13 + 1 keeps the
        // deviation under half of 12^m, checked post hoc by the scan itself.
        return y_max > 0 ? y_max : std::max(3.5, 11.0 / (2 * M_PI) * std::log(13.0) + 1.0);
    }
};

namespace detail {

inline double brent_refine(const std::function<double(double)> &f, double a, double b,
                           double fa, double fb, double tol) {
    // plain bisection; the restrictions are smooth and the interval is tiny
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        double mid = (a + b) / 2, fm = f(mid);
        if ((fa < 0) != (fm < 0)) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    (void)fb;
    return (a + b) / 2;
}

inline void scan_restriction(const std::function<double(double)> &f, double lo, double hi,
                             double step, double tol,
                             const std::function<void(double)> &on_zero) {
    double prev_x = lo, prev_f = f(lo);
    for (double x = lo + step; x <= hi + step / 2; x += step) {
        double fx = f(std::min(x, hi));
        if (prev_f == 0.0) on_zero(prev_x);
        else if ((prev_f < 0) != (fx < 0))
            on_zero(brent_refine(f, prev_x, std::min(x, hi), prev_f, fx, tol));
        prev_x = std::min(x, hi);
        prev_f = fx;
    }
}

}  // namespace detail

/// Zeros on the three real-valued restrictions: Re z = 0 (y >= 1),
/// Re z = -1/2 (y >= sqrt3/2), and the arc z = e^{i theta},
/// theta in (pi/2, 2pi/3].  The corner i is booked on the Re = 0 line and
/// omega on the arc; the forced elliptic zeros (E_m(i) = 0 for odd m,
/// E_m(omega) = 0 for m != 0 mod 3) are emitted exactly.
inline std::vector<ZeroRecord> boundary_zeros(int m, const SeriesContext &ctx,
                                              const SearchRegion &region = {}) {
    std::vector<ZeroRecord> out;
    const double ymax = region.effective_ymax();
    const double scale = std::pow(12.0, m);
    const Cplx omega(-0.5, std::sqrt(3.0) / 2);
    auto residual_at = [&](Cplx z) { return std::abs(eval_calE(m, z, ctx)) / scale; };

    if (m % 2 == 1) {
        ZeroRecord r;
        r.m = m;
        r.location = Cplx(0, 1);
        r.kind = ZeroKind::elliptic_forced;
        r.residual = residual_at(r.location);
        out.push_back(r);
    }
    if (m % 3 != 0) {
        ZeroRecord r;
        r.m = m;
        r.location = omega;
        r.kind = ZeroKind::elliptic_forced;
        r.residual = residual_at(r.location);
        out.push_back(r);
    }

    const double merge_eps = 1e-4;
    auto near_elliptic = [&](Cplx z) {
        return std::abs(z - Cplx(0, 1)) < merge_eps || std::abs(z - omega) < merge_eps;
    };

    auto add = [&](Cplx z, ZeroKind kind) {
        if (near_elliptic(z)) return;  // numeric duplicate of a forced zero
        ZeroRecord r;
        r.m = m;
        r.location = z;
        r.kind = kind;
        r.residual = residual_at(z);
        r.confirmed = r.residual < region.tolerance;
        out.push_back(r);
    };

    auto f_re0 = [&](double y) { return eval_calE(m, Cplx(0, y), ctx).real(); };
    detail::scan_restriction(f_re0, 1.0 + 1e-9, ymax, region.grid_step, 1e-7,
                             [&](double y) { add(Cplx(0, y), ZeroKind::line_re0); });

    auto f_half = [&](double y) { return eval_calE(m, Cplx(-0.5, y), ctx).real(); };
    detail::scan_restriction(f_half, std::sqrt(3.0) / 2 + 1e-9, ymax, region.grid_step, 1e-7,
                             [&](double y) { add(Cplx(-0.5, y), ZeroKind::line_rehalf); });

    auto f_arc = [&](double th) {
        Cplx z = std::polar(1.0, th);
        return (std::polar(1.0, m * th) * eval_calE(m, z, ctx)).real();
    };
    detail::scan_restriction(f_arc, M_PI / 2 + 1e-9, 2 * M_PI / 3 - 1e-9, region.grid_step / 2,
                             1e-9, [&](double th) { add(std::polar(1.0, th), ZeroKind::arc); });
    return out;
}

/// Interior zeros: coarse |E_m| grid over the open left half of the domain,
/// local minima below threshold refined by damped Newton on (Re, Im) with a
/// finite-difference Jacobian, results mirrored through z -> -conj(z).
inline std::vector<ZeroRecord> interior_zeros(int m, const SeriesContext &ctx,
                                              const SearchRegion &region = {}) {
    std::vector<ZeroRecord> out;
    const double ymax = region.effective_ymax();
    const double scale = std::pow(12.0, m);
    const double step = region.grid_step;
    const double seed_threshold = 0.05;
    const Cplx omega(-0.5, std::sqrt(3.0) / 2);

    auto newton = [&](Cplx z0) -> std::optional<Cplx> {
        Cplx z = z0;
        const double h = 1e-6;
        for (int it = 0; it < 60; ++it) {
            Cplx f = eval_calE(m, z, ctx);
            if (std::abs(f) / scale < 1e-13) return z;
            Cplx fx = (eval_calE(m, z + h, ctx) - f) / h;
            Cplx fy = (eval_calE(m, z + Cplx(0, h), ctx) - f) / h;
            // solve [Re fx, Re fy; Im fx, Im fy] d = -(Re f, Im f)
            double det = fx.real() * fy.imag() - fy.real() * fx.imag();
            if (std::abs(det) < 1e-30) return std::nullopt;
            double dx = (-f.real() * fy.imag() + f.imag() * fy.real()) / det;
            double dy = (-fx.real() * f.imag() + fx.imag() * f.real()) / det;
            double damp = 1.0;
            if (std::hypot(dx, dy) > 0.05) damp = 0.05 / std::hypot(dx, dy);
            z += damp * Cplx(dx, dy);
            if (z.imag() < 0.5) return std::nullopt;
        }
        return std::abs(eval_calE(m, z, ctx)) / scale < 1e-10 ? std::optional<Cplx>(z)
                                                              : std::nullopt;
    };

    std::vector<Cplx> found;
    for (double x = -0.5 + step; x < -1e-9; x += step) {
        double y0 = std::sqrt(std::max(0.0, 1.0 - x * x));
        for (double y = y0 + step; y <= ymax; y += step) {
            double v = std::abs(eval_calE(m, Cplx(x, y), ctx)) / scale;
            if (v >= seed_threshold) continue;
            auto z = newton(Cplx(x, y));
            if (!z) continue;
            // discard boundary hits and duplicates
            if (std::abs(z->real()) < 1e-4 || std::abs(z->real() + 0.5) < 1e-4 ||
                std::abs(std::abs(*z) - 1.0) < 1e-4)
                continue;
            if (z->real() > 0) *z = -std::conj(*z);
            bool dup = false;
            for (const Cplx &w : found)
                if (std::abs(w - *z) < 1e-4) dup = true;
            if (!dup) found.push_back(*z);
        }
    }
    for (const Cplx &z : found) {
        ZeroRecord r;
        r.m = m;
        r.location = z;
        r.kind = ZeroKind::interior_pair;
        r.residual = std::abs(eval_calE(m, z, ctx)) / scale;
        r.mirror = -std::conj(z);
        out.push_back(r);
    }
    return out;
}

/// All zeros of E_m in the fundamental domain: boundary zeros counted once,
/// interior zeros counted with their mirrors.
inline std::vector<ZeroRecord> find_zeros(int m, const SeriesContext &ctx = {},
                                          const SearchRegion &region = {}) {
    std::vector<ZeroRecord> out = boundary_zeros(m, ctx, region);
    for (const auto &r : interior_zeros(m, ctx, region)) out.push_back(r);
    return out;
}

inline std::size_t zero_count(const std::vector<ZeroRecord> &zeros) {
    std::size_t n = 0;
    for (const auto &r : zeros) n += (r.kind == ZeroKind::interior_pair) ? 2 : 1;
    return n;
}

struct SignChangeCertificate {
    int m;
    Cplx z1, z2;
    double value1, value2;
    double margin;  // min |value| over the tail bound
    bool valid;
};

/// Evaluates the real-valued restriction of E_m at two points on the same
/// boundary component and certifies opposite strict signs with margin above
/// 1000x the series tail bound, which pins a zero between them.
inline SignChangeCertificate sign_change_certificate(int m, Cplx z1, Cplx z2,
                                                     const SeriesContext &ctx = {}) {
    auto restricted = [&](Cplx z) -> double {
        bool on_re0 = std::abs(z.real()) < 1e-12;
        bool on_half = std::abs(z.real() + 0.5) < 1e-12;
        bool on_arc = std::abs(std::abs(z) - 1.0) < 1e-12;
        if (on_re0 || on_half) return eval_calE(m, z, ctx).real();
        if (on_arc) {
            double th = std::arg(z);
            return (std::polar(1.0, m * th) * eval_calE(m, z, ctx)).real();
        }
        throw std::invalid_argument("sign_change_certificate: endpoint not on a real-valued restriction");
    };
    SignChangeCertificate cert;
    cert.m = m;
    cert.z1 = z1;
    cert.z2 = z2;
    cert.value1 = restricted(z1);
    cert.value2 = restricted(z2);
    double tail = ctx.eisenstein_tail(std::min(z1.imag(), z2.imag())) * std::pow(12.0, m);
    cert.margin = std::min(std::abs(cert.value1), std::abs(cert.value2)) / std::max(tail, 1e-300);
    cert.valid = (cert.value1 < 0) != (cert.value2 < 0) && cert.margin > 1e3;
    return cert;
}

}  // namespace cusptaylor

#endif
