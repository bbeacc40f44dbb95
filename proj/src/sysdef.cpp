#include "biham/sysdef.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace biham {

namespace {

struct Value {
    std::string scalar;
    std::vector<Value> list;
    bool is_list = false;
};

struct Entry {
    std::string key;
    Value value;
    int line;
};

struct RawFile {
    std::string filename;
    // section -> ordered entries
    std::vector<std::pair<std::string, std::vector<Entry>>> sections;

    const std::vector<Entry>* section(const std::string& name) const {
        for (const auto& [s, es] : sections)
            if (s == name) return &es;
        return nullptr;
    }
};

[[noreturn]] void fail(const std::string& file, int line, const std::string& msg) {
    throw DefinitionError(file, line, msg);
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// removes a trailing comment, respecting double quotes
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

Value parse_value(const std::string& file, int line, const std::string& text) {
    std::string t = strip(text);
    if (t.empty()) fail(file, line, "empty value");
    Value v;
    if (t.front() == '[') {
        if (t.back() != ']') fail(file, line, "unbalanced brackets in value");
        v.is_list = true;
        std::string inner = t.substr(1, t.size() - 2);
        int depth = 0;
        bool quoted = false;
        std::string cur;
        for (char c : inner) {
            if (c == '"') quoted = !quoted;
            if (!quoted) {
                if (c == '[') ++depth;
                if (c == ']') --depth;
                if (c == ',' && depth == 0) {
                    if (!strip(cur).empty()) v.list.push_back(parse_value(file, line, cur));
                    cur.clear();
                    continue;
                }
            }
            cur += c;
        }
        if (!strip(cur).empty()) v.list.push_back(parse_value(file, line, cur));
        return v;
    }
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') fail(file, line, "unterminated string");
        v.scalar = t.substr(1, t.size() - 2);
        return v;
    }
    v.scalar = t;
    return v;
}

RawFile parse_raw(const std::string& text, const std::string& filename) {
    RawFile out;
    out.filename = filename;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::string section;
    while (std::getline(is, line)) {
        ++lineno;
        int start_line = lineno;
        std::string t = strip(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos) {
            section = strip(t.substr(1, t.size() - 2));
            if (section.empty()) fail(filename, lineno, "empty section name");
            out.sections.emplace_back(section, std::vector<Entry>{});
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) fail(filename, lineno, "expected key = value");
        std::string key = strip(t.substr(0, eq));
        std::string value = strip(t.substr(eq + 1));
        // bracket lists may continue over several lines
        auto depth_of = [](const std::string& s) {
            int d = 0;
            bool quoted = false;
            for (char c : s) {
                if (c == '"') quoted = !quoted;
                if (!quoted && c == '[') ++d;
                if (!quoted && c == ']') --d;
            }
            return d;
        };
        int depth = depth_of(value);
        while (depth > 0 && std::getline(is, line)) {
            ++lineno;
            std::string more = strip_comment(line);
            value += " " + strip(more);
            depth = depth_of(value);
        }
        if (depth != 0) fail(filename, start_line, "unbalanced brackets in value");
        if (key.empty()) fail(filename, start_line, "missing key");
        if (section.empty()) fail(filename, start_line, "entry before any [section]");
        out.sections.back().second.push_back(Entry{key, parse_value(filename, start_line, value), start_line});
    }
    return out;
}

// ---- typed readers -------------------------------------------------------

Expr read_expr(const std::string& file, const Entry& e) {
    if (e.value.is_list) fail(file, e.line, e.key + " must be an expression string");
    try {
        return parse(e.value.scalar);
    } catch (const ParseError& pe) {
        fail(file, e.line, e.key + ": " + pe.what() + " at byte " + std::to_string(pe.offset));
    }
}

Rational read_rational(const std::string& file, const Entry& e) {
    if (e.value.is_list) fail(file, e.line, e.key + " must be a rational");
    try {
        return Rational::from_string(e.value.scalar);
    } catch (const std::exception& ex) {
        fail(file, e.line, e.key + ": " + ex.what());
    }
}

long read_long(const std::string& file, const Entry& e) {
    Rational r = read_rational(file, e);
    if (!r.fits_long()) fail(file, e.line, e.key + " must be an integer");
    return r.to_long();
}

std::vector<std::string> read_name_list(const std::string& file, const Entry& e) {
    if (!e.value.is_list) fail(file, e.line, e.key + " must be a list of names");
    std::vector<std::string> out;
    for (const auto& v : e.value.list) {
        if (v.is_list) fail(file, e.line, e.key + " must be a flat list of names");
        out.push_back(v.scalar);
    }
    return out;
}

SymMatrix read_matrix(const std::string& file, const Entry& e, size_t n) {
    if (!e.value.is_list) fail(file, e.line, e.key + " must be a matrix");
    if (e.value.list.size() != n)
        fail(file, e.line, e.key + " must have " + std::to_string(n) + " rows");
    std::vector<std::vector<Expr>> rows;
    for (const auto& row : e.value.list) {
        if (!row.is_list || row.list.size() != n)
            fail(file, e.line, e.key + " rows must have " + std::to_string(n) + " entries");
        std::vector<Expr> r;
        for (const auto& cell : row.list) {
            if (cell.is_list) fail(file, e.line, e.key + " entries must be expression strings");
            try {
                r.push_back(parse(cell.scalar));
            } catch (const ParseError& pe) {
                fail(file, e.line, e.key + ": " + pe.what() + " at byte " + std::to_string(pe.offset));
            }
        }
        rows.push_back(std::move(r));
    }
    return SymMatrix::from_rows(std::move(rows));
}

const Entry* find(const std::vector<Entry>& es, const std::string& key) {
    for (const auto& e : es)
        if (e.key == key) return &e;
    return nullptr;
}

const Entry& require(const std::string& file, const std::vector<Entry>& es,
                     const std::string& section, const std::string& key) {
    const Entry* e = find(es, key);
    if (!e) fail(file, 0, "[" + section + "] is missing key '" + key + "'");
    return *e;
}

void check_scope(const std::string& file, const Expr& e, const std::vector<std::string>& allowed,
                 const std::string& what) {
    for (const auto& s : free_symbols(e)) {
        bool known = false;
        for (const auto& a : allowed)
            if (a == s) known = true;
        if (!known) fail(file, 0, what + " uses unknown symbol '" + s + "'");
    }
}

void check_scope(const std::string& file, const SymMatrix& m,
                 const std::vector<std::string>& allowed, const std::string& what) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) check_scope(file, m.at(i, j), allowed, what);
}

} // namespace

SystemDefinition parse_definition_text(const std::string& text, const std::string& filename) {
    RawFile raw = parse_raw(text, filename);

    static const std::set<std::string> known_sections{"system",     "transform", "inverse",
                                                      "flatcoords", "candidates", "zerotest"};
    for (const auto& [s, es] : raw.sections)
        if (!known_sections.count(s)) fail(filename, 0, "unknown section [" + s + "]");

    const auto* system = raw.section("system");
    if (!system) fail(filename, 0, "missing [system] section");

    SystemDefinition def;
    def.coords = read_name_list(filename, require(filename, *system, "system", "coords"));
    if (def.coords.empty() || def.coords.size() > 4)
        fail(filename, 0, "coords must list between 1 and 4 names");
    if (std::set<std::string>(def.coords.begin(), def.coords.end()).size() != def.coords.size())
        fail(filename, 0, "coordinate names must be pairwise distinct");
    const size_t n = def.coords.size();

    def.eta = read_matrix(filename, require(filename, *system, "system", "eta"), n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!is_rational(def.eta.at(i, j)))
                fail(filename, 0, "eta entries must be rational constants");
    def.g = read_matrix(filename, require(filename, *system, "system", "g"), n);
    check_scope(filename, def.g, def.coords, "g");
    def.h = read_expr(filename, require(filename, *system, "system", "h"));
    def.f = read_expr(filename, require(filename, *system, "system", "f"));
    check_scope(filename, def.h, def.coords, "h");
    check_scope(filename, def.f, def.coords, "f");

    for (int i = 1;; ++i) {
        const Entry* h1 = find(*system, "h" + std::to_string(i));
        const Entry* f1 = find(*system, "f" + std::to_string(i));
        if (!h1 && !f1) break;
        if (!h1 || !f1)
            fail(filename, (h1 ? h1 : f1)->line,
                 "h" + std::to_string(i) + " and f" + std::to_string(i) + " must come together");
        Expr he = read_expr(filename, *h1);
        Expr fe = read_expr(filename, *f1);
        check_scope(filename, he, def.coords, "h" + std::to_string(i));
        check_scope(filename, fe, def.coords, "f" + std::to_string(i));
        def.extra_flows.emplace_back(std::move(he), std::move(fe));
    }

    static const std::set<std::string> system_keys_base{"coords", "eta", "g", "h", "f"};
    for (const auto& e : *system) {
        if (system_keys_base.count(e.key)) continue;
        bool flow_key = false;
        for (size_t i = 1; i <= def.extra_flows.size(); ++i)
            if (e.key == "h" + std::to_string(i) || e.key == "f" + std::to_string(i)) flow_key = true;
        if (!flow_key) fail(filename, e.line, "unknown key '" + e.key + "' in [system]");
    }

    for (size_t i = 1; i <= n; ++i) def.vcoords.push_back("v" + std::to_string(i));

    if (const auto* tr = raw.section("transform")) {
        Rational a = read_rational(filename, require(filename, *tr, "transform", "a"));
        Rational b = read_rational(filename, require(filename, *tr, "transform", "b"));
        Rational p = read_rational(filename, require(filename, *tr, "transform", "p"));
        Rational q = read_rational(filename, require(filename, *tr, "transform", "q"));
        try {
            def.transform = LinearReciprocalTransform{a, b, p, q};
        } catch (const std::invalid_argument& ex) {
            fail(filename, (*tr)[0].line, ex.what());
        }
        if (const Entry* vn = find(*tr, "vcoords")) {
            auto names = read_name_list(filename, *vn);
            if (names.size() != n) fail(filename, vn->line, "vcoords must list one name per coordinate");
            std::set<std::string> seen(names.begin(), names.end());
            if (seen.size() != names.size())
                fail(filename, vn->line, "vcoords must be pairwise distinct");
            for (const auto& c : def.coords)
                if (seen.count(c)) fail(filename, vn->line, "vcoords must not collide with coords");
            def.vcoords = std::move(names);
        }
        for (const auto& e : *tr)
            if (e.key != "a" && e.key != "b" && e.key != "p" && e.key != "q" && e.key != "vcoords")
                fail(filename, e.line, "unknown key '" + e.key + "' in [transform]");
    }

    if (const auto* inv = raw.section("inverse")) {
        std::vector<Expr> map(n, num(0));
        std::vector<bool> seen(n, false);
        for (const auto& e : *inv) {
            bool matched = false;
            for (size_t i = 0; i < n; ++i)
                if (e.key == def.coords[i]) {
                    map[i] = read_expr(filename, e);
                    seen[i] = true;
                    matched = true;
                }
            if (!matched) fail(filename, e.line, "'" + e.key + "' is not a coordinate");
        }
        for (size_t i = 0; i < n; ++i)
            if (!seen[i]) fail(filename, 0, "[inverse] is missing coordinate " + def.coords[i]);
        for (const auto& e : map) check_scope(filename, e, def.vcoords, "[inverse]");
        def.inverse = std::move(map);
    }

    if (const auto* fc = raw.section("flatcoords")) {
        const Entry& uhat = require(filename, *fc, "flatcoords", "uhat");
        if (!uhat.value.is_list || uhat.value.list.size() != n)
            fail(filename, uhat.line, "uhat must list one expression per coordinate");
        TranslationData td{{}, SymMatrix(n, n)};
        for (const auto& v : uhat.value.list) {
            if (v.is_list) fail(filename, uhat.line, "uhat entries must be expression strings");
            try {
                td.uhat.push_back(parse(v.scalar));
            } catch (const ParseError& pe) {
                fail(filename, uhat.line, std::string("uhat: ") + pe.what());
            }
        }
        for (const auto& e : td.uhat) check_scope(filename, e, def.coords, "uhat");
        td.ghat = read_matrix(filename, require(filename, *fc, "flatcoords", "ghat"), n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!is_rational(td.ghat.at(i, j)))
                    fail(filename, 0, "ghat entries must be rational constants");
        for (const auto& e : *fc)
            if (e.key != "uhat" && e.key != "ghat")
                fail(filename, e.line, "unknown key '" + e.key + "' in [flatcoords]");
        def.flatcoords = std::move(td);
    }

    def.hbar1.assign(def.extra_flows.size(), std::nullopt);
    def.fbar1.assign(def.extra_flows.size(), std::nullopt);
    if (const auto* cand = raw.section("candidates")) {
        for (const auto& e : *cand) {
            if (e.key == "hbar") {
                def.hbar = read_expr(filename, e);
                check_scope(filename, *def.hbar, def.vcoords, "hbar");
            } else if (e.key == "fbar") {
                def.fbar = read_expr(filename, e);
                check_scope(filename, *def.fbar, def.vcoords, "fbar");
            } else {
                bool matched = false;
                for (size_t i = 1; i <= def.extra_flows.size(); ++i) {
                    if (e.key == "hbar" + std::to_string(i)) {
                        def.hbar1[i - 1] = read_expr(filename, e);
                        check_scope(filename, *def.hbar1[i - 1], def.vcoords, e.key);
                        matched = true;
                    } else if (e.key == "fbar" + std::to_string(i)) {
                        def.fbar1[i - 1] = read_expr(filename, e);
                        check_scope(filename, *def.fbar1[i - 1], def.vcoords, e.key);
                        matched = true;
                    }
                }
                if (!matched) fail(filename, e.line, "unknown key '" + e.key + "' in [candidates]");
            }
        }
    }

    if (const auto* zt = raw.section("zerotest")) {
        for (const auto& e : *zt) {
            if (e.key == "precision") {
                def.zerotest.precision = read_long(filename, e);
            } else if (e.key == "samples") {
                def.zerotest.samples = static_cast<int>(read_long(filename, e));
            } else if (e.key == "tolexp") {
                def.zerotest.tolerance_exp = read_long(filename, e);
            } else if (e.key == "seed") {
                if (e.value.is_list) fail(filename, e.line, "seed must be a hex string");
                try {
                    def.zerotest.seed = std::stoull(e.value.scalar, nullptr, 16);
                } catch (const std::exception&) {
                    fail(filename, e.line, "seed must be a hex string");
                }
            } else if (e.key.rfind("interval.", 0) == 0) {
                std::string symbol = e.key.substr(9);
                if (!e.value.is_list || e.value.list.size() != 2 || e.value.list[0].is_list ||
                    e.value.list[1].is_list)
                    fail(filename, e.line, "interval must be [lo, hi]");
                try {
                    Rational lo = Rational::from_string(e.value.list[0].scalar);
                    Rational hi = Rational::from_string(e.value.list[1].scalar);
                    def.zerotest.intervals[symbol] = {lo, hi};
                } catch (const std::exception& ex) {
                    fail(filename, e.line, std::string("interval: ") + ex.what());
                }
            } else {
                fail(filename, e.line, "unknown key '" + e.key + "' in [zerotest]");
            }
        }
        try {
            def.zerotest.validate();
        } catch (const std::exception& ex) {
            fail(filename, 0, ex.what());
        }
    }

    return def;
}

SystemDefinition parse_definition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DefinitionError(path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_definition_text(ss.str(), path);
}

} // namespace biham
