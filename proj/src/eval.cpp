#include "biham/eval.hpp"

#include <unordered_map>

namespace biham {

namespace {

struct Evaluator {
    const EvalPoint& point;
    std::unordered_map<const Node*, Complex> memo;
    Real max_mag;

    explicit Evaluator(const EvalPoint& p) : point(p), max_mag(p.precision) {}

    Complex eval(const Expr& e) {
        auto it = memo.find(e.get());
        if (it != memo.end()) return it->second;
        Complex v = compute(e);
        max_mag = max_mag.max(v.magnitude());
        memo.emplace(e.get(), v);
        return v;
    }

    Complex compute(const Expr& e) {
        const mpfr_prec_t p = point.precision;
        switch (e->kind) {
        case Kind::Rational:
            return Complex::from_rational(e->value, p);
        case Kind::Symbol: {
            auto it = point.values.find(e->name);
            if (it == point.values.end())
                throw std::invalid_argument("unassigned symbol " + e->name);
            return it->second;
        }
        case Kind::Sum: {
            Complex acc(p);
            for (const auto& k : e->kids) acc = acc + eval(k);
            return acc;
        }
        case Kind::Product: {
            Complex acc = Complex::from_rational(Rational(1), p);
            for (const auto& k : e->kids) acc = acc * eval(k);
            return acc;
        }
        case Kind::Power: {
            Complex b = eval(e->kids.front());
            try {
                return complex_pow(b, e->value);
            } catch (const std::domain_error& ex) {
                throw SingularEvaluation(render(e), ex.what());
            }
        }
        case Kind::Exp:
            return complex_exp(eval(e->kids.front()));
        case Kind::Log: {
            Complex x = eval(e->kids.front());
            try {
                return complex_log(x);
            } catch (const std::domain_error& ex) {
                throw SingularEvaluation(render(e), ex.what());
            }
        }
        case Kind::ArcTanh: {
            Complex x = eval(e->kids.front());
            try {
                return complex_arctanh(x);
            } catch (const std::domain_error& ex) {
                throw SingularEvaluation(render(e), ex.what());
            }
        }
        }
        throw std::logic_error("unreachable");
    }
};

} // namespace

EvalResult evaluate(const Expr& e, const EvalPoint& point) {
    if (point.precision < 64)
        throw std::invalid_argument("evaluation precision must be at least 64 bits");
    Evaluator ev(point);
    Complex v = ev.eval(e);
    return EvalResult{std::move(v), std::move(ev.max_mag)};
}

} // namespace biham
