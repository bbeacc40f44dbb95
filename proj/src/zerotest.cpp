#include "biham/zerotest.hpp"

#include <cmath>
#include <stdexcept>

namespace biham {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

std::pair<Rational, Rational> ZeroTestConfig::interval_for(const std::string& symbol) const {
    auto it = intervals.find(symbol);
    if (it != intervals.end()) return it->second;
    return {Rational(1, 2), Rational(3, 2)};
}

void ZeroTestConfig::validate() const {
    if (samples < 4) throw std::invalid_argument("zero test needs at least 4 sample points");
    if (precision < 64) throw std::invalid_argument("zero test needs at least 64 bits");
    for (const auto& [s, iv] : intervals)
        if (!(iv.first < iv.second))
            throw std::invalid_argument("empty sampling interval for symbol " + s);
}

Rational sample_value(const ZeroTestConfig& cfg, const std::string& symbol, int index) {
    uint64_t h = splitmix64(cfg.seed ^ fnv1a(symbol) ^ (0x5851f42d4c957f2dull * (uint64_t(index) + 1)));
    long bits = static_cast<long>(h >> 11); // top 53 bits
    Rational frac(bits, 1l << 53);
    auto [lo, hi] = cfg.interval_for(symbol);
    return lo + (hi - lo) * frac;
}

EvalPoint sample_point(const ZeroTestConfig& cfg, const std::vector<std::string>& symbols,
                       int index, std::map<std::string, Rational>* rationals) {
    EvalPoint pt;
    pt.precision = cfg.precision;
    for (const auto& s : symbols) {
        Rational v = sample_value(cfg, s, index);
        if (rationals) rationals->insert_or_assign(s, v);
        pt.set_rational(s, v);
    }
    return pt;
}

Verdict is_identically_zero(const Expr& e, const ZeroTestConfig& cfg) {
    cfg.validate();
    Verdict out;
    if (is_rational(e)) {
        if (rat_value(e).is_zero()) {
            out.kind = VerdictKind::Zero;
            out.confidence = 1.0;
        } else {
            out.kind = VerdictKind::NonZero;
            out.witness = Witness{{}, Complex::from_rational(rat_value(e), cfg.precision)};
        }
        return out;
    }

    const auto& symbols = free_symbols(e);
    Real tau = Real::pow2(-cfg.tol_exp(), cfg.precision);
    Real one = Real::from_long(1, cfg.precision);

    for (int i = 0; i < cfg.samples; ++i) {
        std::map<std::string, Rational> rats;
        EvalPoint pt = sample_point(cfg, symbols, i, &rats);
        EvalResult r;
        try {
            r = evaluate(e, pt);
        } catch (const SingularEvaluation&) {
            ++out.singular_points;
            continue;
        }
        ++out.samples_used;
        Real bound = tau * (one + r.max_magnitude);
        if (bound < r.value.magnitude()) {
            out.kind = VerdictKind::NonZero;
            out.witness = Witness{std::move(rats), std::move(r.value)};
            return out;
        }
    }
    if (out.samples_used == 0) {
        out.kind = VerdictKind::Inconclusive;
        return out;
    }
    out.kind = VerdictKind::Zero;
    out.confidence = 1.0 - std::ldexp(1.0, -std::min(out.samples_used, 60));
    return out;
}

} // namespace biham
