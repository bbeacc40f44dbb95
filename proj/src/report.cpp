#include "biham/report.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

namespace biham {

const char* status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
    case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

CheckStatus Report::overall() const {
    bool inconclusive = false;
    for (const auto& it : items_) {
        if (it.status == CheckStatus::Fail) return CheckStatus::Fail;
        if (it.status == CheckStatus::Inconclusive) inconclusive = true;
    }
    return inconclusive ? CheckStatus::Inconclusive : CheckStatus::Pass;
}

std::string Report::render_text() const {
    std::ostringstream os;
    for (const auto& it : items_) {
        std::string tag = status_name(it.status);
        for (auto& c : tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        os << "[" << tag << "] " << it.name;
        if (!it.detail.empty()) os << " (" << it.detail << ")";
        os << "  " << it.millis << " ms\n";
        if (!it.identity.empty()) os << "    identity: " << it.identity << "\n";
        if (it.witness) {
            os << "    witness:";
            for (const auto& [s, v] : it.witness->point) os << " " << s << "=" << v.str();
            os << "\n    value: " << it.witness->value.str(32) << "\n";
        }
    }
    os << "overall: " << status_name(overall()) << "\n";
    return os.str();
}

std::string Report::render_json(uint64_t seed, long precision) const {
    nlohmann::json j;
    j["status"] = status_name(overall());
    char seedbuf[20];
    std::snprintf(seedbuf, sizeof(seedbuf), "%016llx", static_cast<unsigned long long>(seed));
    j["seed"] = std::string("0x") + seedbuf;
    j["precision"] = precision;
    j["checks"] = nlohmann::json::array();
    for (const auto& it : items_) {
        nlohmann::json c;
        c["name"] = it.name;
        c["status"] = status_name(it.status);
        c["identity"] = it.identity;
        // Timings vary run to run; the JSON report is required to be
        // byte-identical for identical inputs and seed.
        c["millis"] = 0;
        if (it.witness) {
            nlohmann::json w = nlohmann::json::object();
            for (const auto& [s, v] : it.witness->point) {
                Real r = Real::from_rational(v, precision > 0 ? precision : 256);
                w[s] = Complex(r, Real(r.prec())).str(32);
            }
            c["witness"] = w;
        }
        j["checks"].push_back(c);
    }
    return j.dump(2) + "\n";
}

namespace {
long elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}
} // namespace

CheckStatus check_zero(Report& report, const ZeroTestConfig& cfg, const std::string& name,
                       const std::vector<std::pair<std::string, Expr>>& residuals) {
    auto t0 = std::chrono::steady_clock::now();
    CheckItem item;
    item.name = name;
    std::string inconclusive_label;
    Expr first;
    for (const auto& [label, e] : residuals) {
        if (!first) first = e;
        Verdict v = is_identically_zero(e, cfg);
        if (v.nonzero()) {
            item.status = CheckStatus::Fail;
            item.identity = render(e);
            item.detail = label;
            item.witness = v.witness;
            item.millis = elapsed_ms(t0);
            report.add(std::move(item));
            return CheckStatus::Fail;
        }
        if (v.kind == VerdictKind::Inconclusive && item.status != CheckStatus::Inconclusive) {
            item.status = CheckStatus::Inconclusive;
            item.identity = render(e);
            item.detail = label + " (all sample points singular)";
        }
    }
    if (item.status == CheckStatus::Pass) {
        item.identity = first ? render(first) : "0";
        if (!residuals.empty()) item.detail = residuals.front().first;
    }
    item.millis = elapsed_ms(t0);
    CheckStatus st = item.status;
    report.add(std::move(item));
    return st;
}

CheckStatus check_nonzero(Report& report, const ZeroTestConfig& cfg, const std::string& name,
                          const Expr& e) {
    auto t0 = std::chrono::steady_clock::now();
    CheckItem item;
    item.name = name;
    item.identity = render(e);
    Verdict v = is_identically_zero(e, cfg);
    if (v.nonzero())
        item.status = CheckStatus::Pass;
    else if (v.zero())
        item.status = CheckStatus::Fail;
    else
        item.status = CheckStatus::Inconclusive;
    item.millis = elapsed_ms(t0);
    CheckStatus st = item.status;
    report.add(std::move(item));
    return st;
}

void add_skipped(Report& report, const std::string& name, const std::string& why) {
    CheckItem item;
    item.name = name;
    item.status = CheckStatus::Skipped;
    item.detail = why;
    report.add(std::move(item));
}

} // namespace biham
