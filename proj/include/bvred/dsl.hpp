#pragma once

#include "bvred/gauge.hpp"
#include "bvred/homology.hpp"

namespace bvred {

// A parsed .bv file. The grammar is documented in docs/format.md; short form:
//
//   system <name> {
//     fields x1 x2;
//     weights x1=1 x2=1;
//     algebra dim 1 { f = 0; }            # or f[a,b,c] = q; entries
//     action e1 = x1*d(x1) - x2*d(x2);
//     potential S = x1*x2;
//     potential2 S2 = x1^2*x2^2;          # optional second invariant
//     character chi = (0);
//     oneform alpha = (x2, x1);           # optional closed 1-form
//     constraint p : Y(dim 1, action 0) = (x1*x2) at 1;
//     window degree -4..2 weight 0..8;    # or: window degree -4..2 bound 6;
//     targets thm-a master-equation;
//   }
struct SystemFile {
    GaugeSystem gs;
    std::optional<Element> potential2;       // over gs.base
    std::optional<std::vector<Element>> oneform;
    std::optional<Rational> constraintValue; // regular value for the BC square
    Window window;
    bool windowDeclared = false;
    std::vector<std::string> targets;

    std::string print() const; // canonical form; parse(print()) == *this
    bool sameContent(const SystemFile& other) const;

    // declaration-order permutation of the fields (and constraint targets),
    // for the determinism checks
    SystemFile permuted() const;
};

struct ParseDiagnostic {
    int line = 0;
    int col = 0;
    std::string message;
};

struct ParseResult {
    std::optional<SystemFile> file;
    std::vector<ParseDiagnostic> errors; // syntax and semantic, located

    bool ok() const { return file.has_value() && errors.empty(); }
};

ParseResult parseSystem(const std::string& text);

// throwing convenience wrapper
SystemFile parseSystemOrThrow(const std::string& text);

} // namespace bvred
