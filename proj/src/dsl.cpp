#include "bvred/dsl.hpp"

#include "bvred/derham.hpp"

#include <sstream>

namespace bvred {

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;
    Token cur;

    explicit Lexer(const std::string& s) : src(s) { next(); }

    void advance() {
        if (pos < src.size()) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void next() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n')
                    advance();
            } else if (isspace(uint8_t(c))) {
                advance();
            } else {
                break;
            }
        }
        cur = Token{};
        cur.line = line;
        cur.col = col;
        if (pos >= src.size()) {
            cur.kind = Token::End;
            return;
        }
        char c = src[pos];
        if (isalpha(uint8_t(c)) || c == '_') {
            cur.kind = Token::Ident;
            while (pos < src.size() && (isalnum(uint8_t(src[pos])) || src[pos] == '_')) {
                cur.text += src[pos];
                advance();
            }
        } else if (isdigit(uint8_t(c))) {
            cur.kind = Token::Number;
            while (pos < src.size() && isdigit(uint8_t(src[pos]))) {
                cur.text += src[pos];
                advance();
            }
        } else {
            cur.kind = Token::Punct;
            cur.text = std::string(1, c);
            advance();
            // two-dot range
            if (cur.text == "." && pos < src.size() && src[pos] == '.') {
                cur.text = "..";
                advance();
            }
        }
    }
};

struct ParseAbort {
    ParseDiagnostic diag;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseAbort{{t.line, t.col, msg}};
}

struct Parser {
    Lexer lex;
    explicit Parser(const std::string& s) : lex(s) {}

    const Token& peek() const { return lex.cur; }
    Token take() {
        Token t = lex.cur;
        lex.next();
        return t;
    }
    bool at(const std::string& punct) const {
        return lex.cur.kind == Token::Punct && lex.cur.text == punct;
    }
    bool atIdent(const std::string& word) const {
        return lex.cur.kind == Token::Ident && lex.cur.text == word;
    }
    void expect(const std::string& punct) {
        if (!at(punct))
            fail(lex.cur, "expected '" + punct + "'");
        take();
    }
    std::string ident(const std::string& what) {
        if (lex.cur.kind != Token::Ident)
            fail(lex.cur, "expected " + what);
        return take().text;
    }
    long integer() {
        bool neg = false;
        if (at("-")) {
            take();
            neg = true;
        }
        if (lex.cur.kind != Token::Number)
            fail(lex.cur, "expected an integer");
        long v = std::stol(take().text);
        return neg ? -v : v;
    }
    Rational rational() {
        long n = integer();
        if (at("/")) {
            take();
            long d = integer();
            return Rational(n, d);
        }
        return Rational(n);
    }

    // polynomial over the given table
    Element expr(const TablePtr& table) {
        Element out = term(table);
        while (at("+") || at("-")) {
            bool minus = take().text == "-";
            Element t = term(table);
            out = minus ? out - t : out + t;
        }
        return out;
    }
    Element term(const TablePtr& table) {
        Element out = factor(table);
        while (at("*")) {
            take();
            out = out * factor(table);
        }
        return out;
    }
    Element factor(const TablePtr& table) {
        bool neg = false;
        while (at("-")) {
            take();
            neg = !neg;
        }
        Element p = primary(table);
        if (at("^")) {
            take();
            long e = integer();
            if (e < 0)
                fail(peek(), "negative exponent");
            Element out(table, Rational(1));
            for (long k = 0; k < e; ++k)
                out = out * p;
            p = out;
        }
        return neg ? -p : p;
    }
    Element primary(const TablePtr& table) {
        if (peek().kind == Token::Number) {
            Token t = take();
            Rational q(std::stol(t.text));
            if (at("/")) {
                take();
                if (peek().kind != Token::Number)
                    fail(peek(), "expected a denominator");
                q /= Rational(std::stol(take().text));
            }
            return Element(table, q);
        }
        if (peek().kind == Token::Ident) {
            Token t = take();
            auto idx = table->tryIndex(t.text);
            if (!idx)
                fail(t, "unknown variable '" + t.text + "'");
            return Element::generator(table, *idx);
        }
        if (at("(")) {
            take();
            Element e = expr(table);
            expect(")");
            return e;
        }
        fail(peek(), "expected a polynomial");
    }

    // sum of poly * d(var) terms
    std::vector<Element> vectorField(const TablePtr& table) {
        std::vector<Element> comps(table->size(), Element(table));
        if (peek().kind == Token::Number && peek().text == "0") {
            take();
            return comps;
        }
        bool first = true;
        for (;;) {
            bool minus = false;
            if (at("+") || at("-")) {
                minus = take().text == "-";
            } else if (!first) {
                break;
            }
            first = false;
            // a product of factors, exactly one of which is d(var)
            Element coeff(table, Rational(1));
            std::optional<uint32_t> target;
            for (;;) {
                while (at("-")) {
                    take();
                    minus = !minus;
                }
                if (atIdent("d")) {
                    Token dtok = take();
                    expect("(");
                    Token var = take();
                    if (var.kind != Token::Ident)
                        fail(var, "expected a variable in d(...)");
                    auto idx = table->tryIndex(var.text);
                    if (!idx)
                        fail(var, "unknown variable '" + var.text + "'");
                    if (target)
                        fail(dtok, "two d(...) factors in one term");
                    target = idx;
                    expect(")");
                } else {
                    Element p = primary(table);
                    if (at("^")) {
                        take();
                        long e = integer();
                        Element out(table, Rational(1));
                        for (long k = 0; k < e; ++k)
                            out = out * p;
                        p = out;
                    }
                    coeff = coeff * p;
                }
                if (at("*")) {
                    take();
                    continue;
                }
                break;
            }
            if (!target)
                fail(peek(), "vector-field term without a d(...) factor");
            comps[*target] = comps[*target] + (minus ? -coeff : coeff);
            if (!(at("+") || at("-")))
                break;
        }
        return comps;
    }

    std::string dashedWord() {
        std::string w = ident("a target name");
        while (at("-")) {
            take();
            if (peek().kind == Token::Ident || peek().kind == Token::Number)
                w += "-" + take().text;
            else
                fail(peek(), "dangling '-' in a name");
        }
        return w;
    }
};

} // namespace

ParseResult parseSystem(const std::string& text) {
    ParseResult result;
    try {
        Parser P(text);
        if (!P.atIdent("system"))
            fail(P.peek(), "expected 'system'");
        P.take();
        std::string name = P.ident("a system name");
        P.expect("{");

        std::vector<std::string> fields;
        std::map<std::string, int> weights;
        bool haveWeights = false;
        uint32_t algebraDim = 0;
        LieAlgebra algebra = LieAlgebra::abelian(0);
        // single pass; 'fields' must precede the polynomial stanzas
        SystemFile sf;
        std::optional<Element> potential, potential2;
        std::optional<std::vector<Element>> oneform;
        std::vector<Rational> character;
        std::optional<GaugeSystem::Constraint> constraint;
        std::optional<Rational> constraintValue;
        std::vector<std::vector<Element>> action;
        TablePtr base;
        Window window;
        bool windowDeclared = false;
        std::vector<std::string> targets;

        auto requireBase = [&](const Token& t) {
            if (!base)
                fail(t, "'fields' must be declared before this stanza");
        };

        while (!P.at("}")) {
            if (P.peek().kind != Token::Ident)
                fail(P.peek(), "expected a stanza keyword");
            Token kw = P.take();
            const std::string& k = kw.text;
            if (k == "fields") {
                while (P.peek().kind == Token::Ident)
                    fields.push_back(P.take().text);
                P.expect(";");
                std::vector<Generator> gens;
                for (const auto& f : fields) {
                    Generator g;
                    g.name = f;
                    g.degree = 0;
                    g.flavor = Flavor::Field;
                    gens.push_back(g);
                }
                base = makeTable(std::move(gens));
                action.assign(algebraDim, std::vector<Element>(fields.size(), Element(base)));
            } else if (k == "weights") {
                requireBase(kw);
                haveWeights = true;
                while (P.peek().kind == Token::Ident) {
                    Token var = P.take();
                    if (!base->tryIndex(var.text))
                        fail(var, "unknown field '" + var.text + "'");
                    P.expect("=");
                    weights[var.text] = int(P.integer());
                }
                P.expect(";");
            } else if (k == "algebra") {
                if (!P.atIdent("dim"))
                    fail(P.peek(), "expected 'dim'");
                P.take();
                algebraDim = uint32_t(P.integer());
                algebra = LieAlgebra::abelian(algebraDim);
                P.expect("{");
                while (!P.at("}")) {
                    Token f = P.take();
                    if (f.kind != Token::Ident || f.text != "f")
                        fail(f, "expected an 'f' entry");
                    if (P.at("[")) {
                        P.take();
                        long a = P.integer();
                        P.expect(",");
                        long b = P.integer();
                        P.expect(",");
                        long c = P.integer();
                        P.expect("]");
                        P.expect("=");
                        Rational v = P.rational();
                        if (a < 1 || b < 1 || c < 1 || a > algebraDim || b > algebraDim ||
                            c > algebraDim)
                            fail(f, "structure-constant index out of range");
                        algebra.set(uint32_t(a - 1), uint32_t(b - 1), uint32_t(c - 1), v);
                    } else {
                        P.expect("=");
                        if (P.integer() != 0)
                            fail(f, "'f = <nonzero>' is not a structure table");
                    }
                    P.expect(";");
                }
                P.take(); // }
                P.expect(";");
                if (base)
                    action.assign(algebraDim,
                                  std::vector<Element>(fields.size(), Element(base)));
            } else if (k == "action") {
                requireBase(kw);
                Token e = P.take();
                if (e.kind != Token::Ident || e.text.size() < 2 || e.text[0] != 'e')
                    fail(e, "expected a basis label e1..em");
                uint32_t a = uint32_t(std::stoul(e.text.substr(1)));
                if (a < 1 || a > algebraDim)
                    fail(e, "basis label out of range (declare 'algebra dim' first)");
                P.expect("=");
                action.at(a - 1) = P.vectorField(base);
                P.expect(";");
            } else if (k == "potential") {
                requireBase(kw);
                P.ident("a potential name");
                P.expect("=");
                potential = P.expr(base);
                P.expect(";");
            } else if (k == "potential2") {
                requireBase(kw);
                P.ident("a potential name");
                P.expect("=");
                potential2 = P.expr(base);
                P.expect(";");
            } else if (k == "character") {
                P.ident("chi");
                P.expect("=");
                P.expect("(");
                character.clear();
                if (!P.at(")")) {
                    character.push_back(P.rational());
                    while (P.at(",")) {
                        P.take();
                        character.push_back(P.rational());
                    }
                }
                P.expect(")");
                P.expect(";");
            } else if (k == "oneform") {
                requireBase(kw);
                P.ident("a 1-form name");
                P.expect("=");
                P.expect("(");
                std::vector<Element> comps;
                comps.push_back(P.expr(base));
                while (P.at(",")) {
                    P.take();
                    comps.push_back(P.expr(base));
                }
                P.expect(")");
                P.expect(";");
                oneform = std::move(comps);
            } else if (k == "constraint") {
                requireBase(kw);
                P.ident("a constraint name");
                P.expect(":");
                if (P.ident("Y") != "Y")
                    fail(kw, "expected 'Y'");
                P.expect("(");
                if (P.ident("dim") != "dim")
                    fail(kw, "expected 'dim'");
                long ydim = P.integer();
                P.expect(",");
                if (P.ident("action") != "action")
                    fail(kw, "expected 'action'");
                GaugeSystem::Constraint cons;
                std::vector<Generator> ygens;
                for (long j = 0; j < ydim; ++j) {
                    Generator g;
                    g.name = "y" + std::to_string(j + 1);
                    g.degree = 0;
                    g.flavor = Flavor::Field;
                    ygens.push_back(g);
                }
                cons.yBase = makeTable(std::move(ygens));
                cons.yAction.assign(algebraDim,
                                    std::vector<Element>(size_t(ydim), Element(cons.yBase)));
                if (P.peek().kind == Token::Number && P.peek().text == "0") {
                    P.take(); // trivial action
                } else {
                    P.expect("(");
                    while (!P.at(")")) {
                        Token e = P.take();
                        if (e.kind != Token::Ident || e.text[0] != 'e')
                            fail(e, "expected a basis label");
                        uint32_t a = uint32_t(std::stoul(e.text.substr(1)));
                        P.expect("=");
                        cons.yAction.at(a - 1) = P.vectorField(cons.yBase);
                        P.expect(";");
                    }
                    P.take();
                }
                P.expect(")");
                P.expect("=");
                P.expect("(");
                cons.components.push_back(P.expr(base));
                while (P.at(",")) {
                    P.take();
                    cons.components.push_back(P.expr(base));
                }
                P.expect(")");
                if (P.atIdent("at")) {
                    P.take();
                    constraintValue = P.rational();
                }
                P.expect(";");
                if (long(cons.components.size()) != ydim)
                    fail(kw, "constraint needs one component per Y coordinate");
                constraint = std::move(cons);
            } else if (k == "window") {
                if (P.ident("degree") != "degree")
                    fail(kw, "expected 'degree'");
                window.degMin = int(P.integer());
                P.expect("..");
                window.degMax = int(P.integer());
                if (P.atIdent("weight")) {
                    P.take();
                    window.weightMin = int(P.integer());
                    P.expect("..");
                    window.weightMax = int(P.integer());
                } else if (P.atIdent("bound")) {
                    P.take();
                    window.bound = int(P.integer());
                }
                P.expect(";");
                windowDeclared = true;
            } else if (k == "targets") {
                while (P.peek().kind == Token::Ident)
                    targets.push_back(P.dashedWord());
                P.expect(";");
            } else {
                fail(kw, "unknown stanza '" + k + "'");
            }
        }
        P.take(); // }
        if (!base)
            fail(P.peek(), "system without a 'fields' stanza");

        std::vector<std::optional<int>> wts(fields.size());
        if (haveWeights)
            for (size_t i = 0; i < fields.size(); ++i) {
                auto it = weights.find(fields[i]);
                if (it != weights.end())
                    wts[i] = it->second;
            }
        GaugeSystem gs = makeGaugeSystem(name, fields, wts, algebra);
        for (uint32_t a = 0; a < algebraDim; ++a)
            for (uint32_t i = 0; i < gs.fieldCount(); ++i)
                gs.action[a][i] = remapByName(action[a][i], gs.base);
        if (potential)
            gs.potential = remapByName(*potential, gs.base);
        if (!character.empty()) {
            if (character.size() != algebraDim)
                throw ParseAbort{{1, 1, "character needs one entry per basis element"}};
            gs.character = character;
        }
        if (constraint) {
            GaugeSystem::Constraint cons = *constraint;
            for (auto& comp : cons.components)
                comp = remapByName(comp, gs.base);
            gs.constraint = std::move(cons);
        }
        sf.gs = std::move(gs);
        if (potential2)
            sf.potential2 = remapByName(*potential2, sf.gs.base);
        if (oneform) {
            std::vector<Element> comps;
            for (auto& c : *oneform)
                comps.push_back(remapByName(c, sf.gs.base));
            if (comps.size() != sf.gs.fieldCount())
                throw ParseAbort{{1, 1, "oneform needs one component per field"}};
            sf.oneform = std::move(comps);
        }
        sf.constraintValue = constraintValue;
        sf.window = window;
        sf.windowDeclared = windowDeclared;
        sf.targets = std::move(targets);

        // semantic validation, with the violated identity printed
        for (const auto& v : validateGaugeSystem(sf.gs))
            result.errors.push_back({1, 1, v.identity});
        if (sf.oneform) {
            SemiFreeCdga baseModel{sf.gs.base, Derivation::zero(sf.gs.base, 1)};
            if (!closedOneFormCheck(baseModel, *sf.oneform))
                result.errors.push_back(
                    {1, 1, "one-form not closed: d_i alpha_j != d_j alpha_i"});
        }
        if (result.errors.empty())
            result.file = std::move(sf);
    } catch (const ParseAbort& a) {
        result.errors.push_back(a.diag);
    } catch (const Error& e) {
        result.errors.push_back({1, 1, e.what()});
    }
    return result;
}

SystemFile parseSystemOrThrow(const std::string& text) {
    auto r = parseSystem(text);
    if (!r.ok()) {
        std::ostringstream os;
        for (const auto& e : r.errors)
            os << e.line << ":" << e.col << ": " << e.message << "\n";
        throw Error("parse failed:\n" + os.str());
    }
    return *r.file;
}

namespace {

std::string polyStr(const Element& e) {
    return e.str();
}

std::string vectorFieldStr(const std::vector<Element>& comps, const GeneratorTable& t) {
    std::string out;
    bool any = false;
    for (uint32_t i = 0; i < comps.size(); ++i) {
        if (comps[i].zero())
            continue;
        if (any)
            out += " + ";
        any = true;
        out += "(" + polyStr(comps[i]) + ")*d(" + t.gen(i).name + ")";
    }
    return any ? out : "0";
}

} // namespace

std::string SystemFile::print() const {
    std::ostringstream os;
    os << "system " << gs.name << " {\n";
    os << "  fields";
    for (uint32_t i = 0; i < gs.fieldCount(); ++i)
        os << " " << gs.base->gen(i).name;
    os << ";\n";
    bool anyW = false;
    for (const auto& w : gs.fieldWeights)
        anyW = anyW || w.has_value();
    if (anyW) {
        os << "  weights";
        for (uint32_t i = 0; i < gs.fieldCount(); ++i)
            if (gs.fieldWeights[i])
                os << " " << gs.base->gen(i).name << "=" << *gs.fieldWeights[i];
        os << ";\n";
    }
    os << "  algebra dim " << gs.algebra.dim << " {";
    bool anyF = false;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        for (uint32_t b = a + 1; b < gs.algebra.dim; ++b)
            for (uint32_t c = 0; c < gs.algebra.dim; ++c)
                if (gs.algebra.at(a, b, c) != 0) {
                    os << " f[" << a + 1 << "," << b + 1 << "," << c + 1
                       << "] = " << gs.algebra.at(a, b, c).str() << ";";
                    anyF = true;
                }
    if (!anyF)
        os << " f = 0;";
    os << " };\n";
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        os << "  action e" << a + 1 << " = " << vectorFieldStr(gs.action[a], *gs.base)
           << ";\n";
    if (!gs.potential.zero())
        os << "  potential S = " << polyStr(gs.potential) << ";\n";
    if (potential2)
        os << "  potential2 S2 = " << polyStr(*potential2) << ";\n";
    bool anyChi = false;
    for (const auto& q : gs.character)
        anyChi = anyChi || q != 0;
    if (anyChi) {
        os << "  character chi = (";
        for (uint32_t a = 0; a < gs.algebra.dim; ++a)
            os << (a ? ", " : "") << gs.character[a].str();
        os << ");\n";
    }
    if (oneform) {
        os << "  oneform alpha = (";
        for (size_t i = 0; i < oneform->size(); ++i)
            os << (i ? ", " : "") << polyStr((*oneform)[i]);
        os << ");\n";
    }
    if (gs.constraint) {
        const auto& cons = *gs.constraint;
        os << "  constraint p : Y(dim " << cons.yBase->size() << ", action ";
        bool trivial = true;
        for (const auto& row : cons.yAction)
            for (const auto& c : row)
                trivial = trivial && c.zero();
        if (trivial) {
            os << "0";
        } else {
            os << "(";
            for (uint32_t a = 0; a < gs.algebra.dim; ++a)
                os << "e" << a + 1 << " = " << vectorFieldStr(cons.yAction[a], *cons.yBase)
                   << "; ";
            os << ")";
        }
        os << ") = (";
        for (size_t j = 0; j < cons.components.size(); ++j)
            os << (j ? ", " : "") << polyStr(cons.components[j]);
        os << ")";
        if (constraintValue)
            os << " at " << constraintValue->str();
        os << ";\n";
    }
    if (windowDeclared) {
        os << "  window degree " << window.degMin << ".." << window.degMax;
        if (window.bound)
            os << " bound " << *window.bound;
        else if (window.weightMin)
            os << " weight " << *window.weightMin << ".." << *window.weightMax;
        os << ";\n";
    }
    if (!targets.empty()) {
        os << "  targets";
        for (const auto& t : targets)
            os << " " << t;
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

bool SystemFile::sameContent(const SystemFile& other) const {
    if (gs.name != other.gs.name || gs.fieldCount() != other.gs.fieldCount())
        return false;
    for (uint32_t i = 0; i < gs.fieldCount(); ++i)
        if (gs.base->gen(i).name != other.gs.base->gen(i).name ||
            gs.fieldWeights[i] != other.gs.fieldWeights[i])
            return false;
    if (gs.algebra.dim != other.gs.algebra.dim || gs.algebra.f != other.gs.algebra.f)
        return false;
    auto same = [&](const Element& a, const Element& b) {
        return remapByName(a, other.gs.base) == b;
    };
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        for (uint32_t i = 0; i < gs.fieldCount(); ++i)
            if (!same(gs.action[a][i], other.gs.action[a][i]))
                return false;
    if (!same(gs.potential, other.gs.potential))
        return false;
    if (gs.character != other.gs.character)
        return false;
    if (potential2.has_value() != other.potential2.has_value())
        return false;
    if (potential2 && !same(*potential2, *other.potential2))
        return false;
    if (oneform.has_value() != other.oneform.has_value())
        return false;
    if (oneform) {
        for (size_t i = 0; i < oneform->size(); ++i)
            if (!same((*oneform)[i], (*other.oneform)[i]))
                return false;
    }
    if (gs.constraint.has_value() != other.gs.constraint.has_value())
        return false;
    if (gs.constraint) {
        const auto& a = *gs.constraint;
        const auto& b = *other.gs.constraint;
        if (a.components.size() != b.components.size())
            return false;
        for (size_t j = 0; j < a.components.size(); ++j)
            if (!same(a.components[j], b.components[j]))
                return false;
        for (uint32_t x = 0; x < gs.algebra.dim; ++x)
            for (size_t j = 0; j < a.components.size(); ++j)
                if (!(remapByName(a.yAction[x][j], b.yBase) == b.yAction[x][j]))
                    return false;
    }
    if (constraintValue != other.constraintValue)
        return false;
    if (windowDeclared != other.windowDeclared)
        return false;
    if (windowDeclared) {
        if (window.degMin != other.window.degMin || window.degMax != other.window.degMax ||
            window.weightMin != other.window.weightMin ||
            window.weightMax != other.window.weightMax ||
            window.bound != other.window.bound)
            return false;
    }
    return targets == other.targets;
}

SystemFile SystemFile::permuted() const {
    SystemFile out;
    std::vector<std::string> fields;
    std::vector<std::optional<int>> wts;
    for (uint32_t i = gs.fieldCount(); i-- > 0;) {
        fields.push_back(gs.base->gen(i).name);
        wts.push_back(gs.fieldWeights[i]);
    }
    GaugeSystem g2 = makeGaugeSystem(gs.name, fields, wts, gs.algebra);
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        for (uint32_t i = 0; i < gs.fieldCount(); ++i)
            g2.action[a][g2.base->index(gs.base->gen(i).name)] =
                remapByName(gs.action[a][i], g2.base);
    g2.potential = remapByName(gs.potential, g2.base);
    g2.character = gs.character;
    if (gs.constraint) {
        GaugeSystem::Constraint cons = *gs.constraint;
        for (auto& c : cons.components)
            c = remapByName(c, g2.base);
        g2.constraint = std::move(cons);
    }
    out.gs = std::move(g2);
    if (potential2)
        out.potential2 = remapByName(*potential2, out.gs.base);
    if (oneform) {
        std::vector<Element> comps(oneform->size(), Element(out.gs.base));
        for (uint32_t i = 0; i < oneform->size(); ++i)
            comps[out.gs.base->index(gs.base->gen(i).name)] =
                remapByName((*oneform)[i], out.gs.base);
        out.oneform = std::move(comps);
    }
    out.constraintValue = constraintValue;
    out.window = window;
    out.windowDeclared = windowDeclared;
    out.targets = targets;
    return out;
}

} // namespace bvred
