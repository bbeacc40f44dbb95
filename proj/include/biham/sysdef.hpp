#pragma once

#include "biham/reciprocal.hpp"

namespace biham {

/// Parsed system-definition file.
struct SystemDefinition {
    std::vector<std::string> coords;
    SymMatrix eta;
    SymMatrix g;
    Expr h;
    Expr f;
    std::vector<std::pair<Expr, Expr>> extra_flows; // (h1, f1), (h2, f2), ...

    std::optional<LinearReciprocalTransform> transform;
    std::vector<std::string> vcoords;          // defaults to v1..vn
    std::optional<std::vector<Expr>> inverse;  // u^i(v), coordinate order

    std::optional<TranslationData> flatcoords;

    std::optional<Expr> hbar, fbar;
    std::vector<std::optional<Expr>> hbar1, fbar1; // per extra flow

    ZeroTestConfig zerotest;
};

struct DefinitionError : std::runtime_error {
    std::string file;
    int line;
    DefinitionError(std::string f, int l, const std::string& msg)
        : std::runtime_error(f + ":" + std::to_string(l) + ": " + msg),
          file(std::move(f)), line(l) {}
};

/// Parses the sectioned key-value definition format. Sections: [system],
/// [transform], [inverse], [flatcoords], [candidates], [zerotest].
/// Throws DefinitionError with file and line on any problem.
SystemDefinition parse_definition_text(const std::string& text, const std::string& filename);
SystemDefinition parse_definition_file(const std::string& path);

} // namespace biham
