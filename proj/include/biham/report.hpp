#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biham/zerotest.hpp"

namespace biham {

enum class CheckStatus { Pass, Fail, Inconclusive, Skipped };

const char* status_name(CheckStatus s);

struct CheckItem {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string identity;             // rendered expression that was tested
    std::optional<Witness> witness;   // failing point, when one exists
    std::string detail;               // component label etc., text output only
    long millis = 0;
};

/// Ordered list of named check verdicts. Overall status is fail iff any
/// check fails; inconclusive when nothing failed but something was
/// inconclusive.
class Report {
public:
    void add(CheckItem item) { items_.push_back(std::move(item)); }
    const std::vector<CheckItem>& items() const { return items_; }

    CheckStatus overall() const;
    bool all_passed() const { return overall() == CheckStatus::Pass; }

    std::string render_text() const;
    /// Stable-keyed JSON per the report schema; byte-identical across runs
    /// for identical inputs and seed (timings are not serialized).
    std::string render_json(uint64_t seed, long precision) const;

private:
    std::vector<CheckItem> items_;
};

/// Runs the zero test over ordered labelled residuals and appends one
/// check item: pass when every residual is identically zero, fail with
/// the first witness otherwise.
CheckStatus check_zero(Report& report, const ZeroTestConfig& cfg, const std::string& name,
                       const std::vector<std::pair<std::string, Expr>>& residuals);

/// Appends a check that passes only when the expression is certified
/// NOT identically zero (nondegeneracy-style conditions).
CheckStatus check_nonzero(Report& report, const ZeroTestConfig& cfg, const std::string& name,
                          const Expr& e);

void add_skipped(Report& report, const std::string& name, const std::string& why);

} // namespace biham
