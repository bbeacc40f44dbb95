#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "biham/eval.hpp"

namespace biham {

inline constexpr uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

/// Configuration of the probabilistic zero test: N deterministic sample
/// points drawn per symbol from [lo, hi] (default [1/2, 3/2]), evaluated
/// at P bits, compared against tau = 2^-tol relative to the largest
/// intermediate magnitude.
struct ZeroTestConfig {
    int samples = 16;
    mpfr_prec_t precision = 256;
    long tolerance_exp = 0; // 0 means precision/2
    uint64_t seed = kDefaultSeed;
    std::map<std::string, std::pair<Rational, Rational>> intervals;

    long tol_exp() const { return tolerance_exp > 0 ? tolerance_exp : precision / 2; }
    std::pair<Rational, Rational> interval_for(const std::string& symbol) const;
    void validate() const;
};

enum class VerdictKind { Zero, NonZero, Inconclusive };

struct Witness {
    std::map<std::string, Rational> point;
    Complex value; // value of the tested expression at the point
};

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double confidence = 0.0;          // meaningful for Zero
    std::optional<Witness> witness;   // present for NonZero
    int samples_used = 0;
    int singular_points = 0;

    bool zero() const { return kind == VerdictKind::Zero; }
    bool nonzero() const { return kind == VerdictKind::NonZero; }
};

/// Deterministic sample for (seed, symbol, index): an exact dyadic
/// rational in the symbol's interval. Distinct symbols get unrelated
/// streams, so coordinates never collide in practice.
Rational sample_value(const ZeroTestConfig& cfg, const std::string& symbol, int index);

/// Sample point for all free symbols of an expression.
EvalPoint sample_point(const ZeroTestConfig& cfg, const std::vector<std::string>& symbols,
                       int index, std::map<std::string, Rational>* rationals = nullptr);

/// Probabilistic identity test. Zero means the value stayed below
/// tau*(1 + max intermediate magnitude) at every non-singular sample
/// point; NonZero carries a reproducible witness. Inconclusive only when
/// every sample point was singular. Rational constants short-circuit.
Verdict is_identically_zero(const Expr& e, const ZeroTestConfig& cfg);

} // namespace biham
