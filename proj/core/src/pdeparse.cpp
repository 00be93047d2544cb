#include "fexpand/pdeparse.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace fex {

namespace {

enum class Tok : std::uint8_t {
    Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen,
    Equals, Under, LBracket, RBracket, Comma, End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Tok::Number, s.substr(start, i - start), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Tok::Ident, s.substr(start, i - start), start});
            continue;
        }
        Tok k;
        switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '=': k = Tok::Equals; break;
        case '_': k = Tok::Under; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case ',': k = Tok::Comma; break;
        default:
            throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, s.substr(start, 1), start});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, bool extended) : toks_(std::move(toks)), extended_(extended) {}

    // Hooks provided by the caller.
    std::function<Expr(const Token&)> on_ident;
    std::function<Expr(const Token&, const std::map<Sym, unsigned>&)> on_deriv;
    std::function<Expr(const Token&, Expr)> on_call; // kernel application
    std::function<Sym(const Token&)> on_subscript_letter;

    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    Token expect(Tok k, const std::string& what) {
        if (peek().kind != k) throw ParseError(peek().pos, "expected " + what);
        return next();
    }

    Expr parse_expression() {
        bool neg = false;
        if (accept(Tok::Minus))
            neg = true;
        else
            accept(Tok::Plus);
        Expr acc = parse_term();
        if (neg) acc = make_prod({make_int(-1), acc});
        std::vector<Expr> parts{acc};
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool minus = next().kind == Tok::Minus;
            Expr t = parse_term();
            parts.push_back(minus ? make_prod({make_int(-1), t}) : t);
        }
        return make_sum(std::move(parts));
    }

    Expr parse_term() {
        Expr acc = parse_factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            bool div = next().kind == Tok::Slash;
            if (div && !extended_)
                throw ParseError(toks_[pos_ - 1].pos, "division is not allowed in equations");
            Expr f = parse_factor();
            acc = div ? make_prod({acc, make_pow(f, -1)}) : make_prod({acc, f});
        }
        return acc;
    }

    Expr parse_factor() {
        Expr b = parse_base();
        if (accept(Tok::Caret)) return make_pow(b, parse_exponent());
        return b;
    }

    int parse_exponent() {
        if (extended_ && accept(Tok::LParen)) {
            bool neg = accept(Tok::Minus);
            Token n = expect(Tok::Number, "integer exponent");
            expect(Tok::RParen, "')'");
            int v = std::stoi(n.text);
            return neg ? -v : v;
        }
        Token n = expect(Tok::Number, "integer exponent");
        return std::stoi(n.text);
    }

    Expr parse_base() {
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            next();
            return make_const(Rational(BigInt(t.text)));
        }
        if (t.kind == Tok::LParen) {
            next();
            Expr e = parse_expression();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (t.kind == Tok::Ident) {
            Token id = next();
            if (id.text == "D" && peek().kind == Tok::LBracket) return parse_d_alias();
            // declared names may themselves contain an underscore (a_0, b_m1)
            if (peek().kind == Tok::Under && compound_ident_check &&
                pos_ + 1 < toks_.size() &&
                (toks_[pos_ + 1].kind == Tok::Ident || toks_[pos_ + 1].kind == Tok::Number)) {
                std::string full = id.text + "_" + toks_[pos_ + 1].text;
                if (compound_ident_check(full)) {
                    pos_ += 2;
                    return on_ident(Token{Tok::Ident, full, id.pos});
                }
            }
            if (peek().kind == Tok::Under) {
                next();
                Token sub = expect(Tok::Ident, "derivative subscript");
                std::map<Sym, unsigned> orders;
                for (char c : sub.text) {
                    if (!std::isalpha(static_cast<unsigned char>(c)))
                        throw ParseError(sub.pos, "subscript must be variable letters");
                    Token letter{Tok::Ident, std::string(1, c), sub.pos};
                    orders[on_subscript_letter(letter)] += 1;
                }
                return on_deriv(id, orders);
            }
            if (extended_ && on_call && peek().kind == Tok::LParen && is_kernel_name(id.text)) {
                next();
                Expr arg = parse_expression();
                expect(Tok::RParen, "')'");
                return on_call(id, arg);
            }
            return on_ident(id);
        }
        throw ParseError(t.pos, "expected a number, identifier or '('");
    }

    Expr parse_d_alias() {
        Token lb = expect(Tok::LBracket, "'['");
        Token dep = expect(Tok::Ident, "dependent variable");
        std::map<Sym, unsigned> orders;
        bool any = false;
        while (accept(Tok::Comma)) {
            Token v = expect(Tok::Ident, "variable");
            if (v.text.size() != 1)
                throw ParseError(v.pos, "derivative variables are single letters");
            orders[on_subscript_letter(v)] += 1;
            any = true;
        }
        expect(Tok::RBracket, "']'");
        if (!any) throw ParseError(lb.pos, "D[...] needs at least one variable");
        return on_deriv(dep, orders);
    }

    std::function<bool(const std::string&)> kernel_name_check;
    std::function<bool(const std::string&)> compound_ident_check;
    bool is_kernel_name(const std::string& n) const {
        return kernel_name_check && kernel_name_check(n);
    }

private:
    std::vector<Token> toks_;
    bool extended_;
    std::size_t pos_ = 0;
};

} // namespace

PdeSpec parse_pde(const std::string& text, const std::vector<std::string>& declared_params) {
    auto toks = lex(text);

    // Pre-scan: the identifier carrying subscripts (or heading D[...]) is the
    // dependent variable; subscript letters are the independent variables.
    std::string dep_name;
    std::set<std::string> indep_names;
    auto note_dep = [&](const Token& t) {
        if (dep_name.empty())
            dep_name = t.text;
        else if (dep_name != t.text)
            throw ParseError(t.pos, "two dependent variables: " + dep_name + " and " + t.text);
    };
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (toks[i].kind == Tok::Ident && toks[i + 1].kind == Tok::Under) {
            note_dep(toks[i]);
            if (i + 2 < toks.size() && toks[i + 2].kind == Tok::Ident)
                for (char c : toks[i + 2].text)
                    if (std::isalpha(static_cast<unsigned char>(c)))
                        indep_names.insert(std::string(1, c));
        }
        if (toks[i].kind == Tok::Ident && toks[i].text == "D" &&
            toks[i + 1].kind == Tok::LBracket && i + 2 < toks.size() &&
            toks[i + 2].kind == Tok::Ident) {
            note_dep(toks[i + 2]);
            for (std::size_t j = i + 3; j + 1 < toks.size() && toks[j].kind == Tok::Comma; j += 2)
                if (toks[j + 1].kind == Tok::Ident) indep_names.insert(toks[j + 1].text);
        }
    }
    if (dep_name.empty())
        throw ParseError(text.size(), "equation has no derivative of the dependent variable");

    PdeSpec spec;
    spec.dependent = symtab::intern(dep_name, SymKind::DependentVar);
    for (auto& n : indep_names) // std::set: sorted by name, t before x
        spec.independents.push_back(symtab::intern(n, SymKind::IndependentVar));

    std::map<std::string, Sym> params;
    for (auto& p : declared_params) {
        auto existing = symtab::find(p);
        Sym s = existing ? *existing : symtab::intern(p, SymKind::FreeConstant);
        params.emplace(p, s);
        spec.params.insert(s);
    }

    Parser parser(toks, /*extended=*/false);
    parser.on_subscript_letter = [&](const Token& t) -> Sym {
        auto it = std::find_if(spec.independents.begin(), spec.independents.end(),
                               [&](Sym s) { return s.name() == t.text; });
        if (it == spec.independents.end())
            throw ParseError(t.pos, "unknown variable " + t.text);
        return *it;
    };
    parser.on_deriv = [&](const Token& id, const std::map<Sym, unsigned>& orders) -> Expr {
        if (id.text != dep_name)
            throw ParseError(id.pos, "derivative of non-dependent symbol " + id.text);
        return make_deriv_atom(spec.dependent, orders);
    };
    parser.on_ident = [&](const Token& id) -> Expr {
        if (id.text == dep_name) return make_sym(spec.dependent);
        if (auto it = params.find(id.text); it != params.end()) return make_sym(it->second);
        if (indep_names.count(id.text))
            throw ParseError(id.pos, "explicit independent variable " + id.text +
                                         " (equation must be autonomous)");
        throw ParseError(id.pos, "unknown identifier " + id.text +
                                     " (declare parameters explicitly)");
    };

    spec.lhs = parser.parse_expression();
    parser.expect(Tok::Equals, "'='");
    Token z = parser.expect(Tok::Number, "0");
    if (z.text != "0") throw ParseError(z.pos, "right-hand side must be 0");
    parser.expect(Tok::End, "end of input");
    return spec;
}

namespace {

const std::map<std::string, std::string>& greek() {
    static const std::map<std::string, std::string> g = {
        {"alpha", "\\alpha"},   {"beta", "\\beta"},   {"gamma", "\\gamma"},
        {"delta", "\\delta"},   {"epsilon", "\\epsilon"}, {"lambda", "\\lambda"},
        {"mu", "\\mu"},         {"rho", "\\rho"},     {"sigma", "\\sigma"},
        {"xi", "\\xi"},         {"eps", "\\epsilon"},
    };
    return g;
}

std::string latex_name(const std::string& n) {
    auto it = greek().find(n);
    return it == greek().end() ? n : it->second;
}

void latex(std::ostream& os, const Expr& e, int prec) {
    switch (e->kind) {
    case ExprKind::Const: {
        bool frac = den(e->value) != 1;
        bool paren = prec >= 2 && e->value < 0;
        if (paren) os << "\\left(";
        if (frac)
            os << "\\frac{" << num(e->value).str() << "}{" << den(e->value).str() << "}";
        else
            os << num(e->value).str();
        if (paren) os << "\\right)";
        break;
    }
    case ExprKind::SymRef:
        os << latex_name(e->sym.name());
        break;
    case ExprKind::Sum: {
        if (prec >= 2) os << "\\left(";
        bool first = true;
        for (auto& k : e->kids) {
            std::ostringstream t;
            latex(t, k, 1);
            std::string s = t.str();
            if (!first && !s.empty() && s[0] != '-') os << "+";
            os << s;
            first = false;
        }
        if (prec >= 2) os << "\\right)";
        break;
    }
    case ExprKind::Prod:
        if (prec >= 3) os << "\\left(";
        for (auto& k : e->kids) latex(os, k, 2);
        if (prec >= 3) os << "\\right)";
        break;
    case ExprKind::Pow:
        latex(os, e->kids[0], 3);
        os << "^{" << e->exponent << "}";
        break;
    case ExprKind::KernelApp:
        os << "\\" << e->sym.name() << "\\left(";
        latex(os, e->kids[0], 0);
        os << "\\right)";
        break;
    case ExprKind::DMarker:
        os << latex_name(e->sym.name()) << "^{(" << e->order << ")}";
        break;
    case ExprKind::DerivAtom: {
        os << latex_name(e->sym.name()) << "_{";
        for (auto& [v, k] : e->orders)
            for (unsigned i = 0; i < k; ++i) os << v.name();
        os << "}";
        break;
    }
    }
}

} // namespace

std::string print_pde(const PdeSpec& p, PrintStyle style) {
    if (style == PrintStyle::Ascii) return to_string(p.lhs) + " = 0";
    std::ostringstream os;
    latex(os, p.lhs, 0);
    os << "=0";
    return os.str();
}

Expr parse_expr(const std::string& text, const ExprParseContext& ctx) {
    auto toks = lex(text);
    Parser parser(toks, /*extended=*/true);
    parser.kernel_name_check = [&](const std::string& n) { return ctx.kernels.count(n) != 0; };
    parser.compound_ident_check = [&](const std::string& n) { return ctx.idents.count(n) != 0; };
    parser.on_call = [&](const Token& id, Expr arg) -> Expr {
        return make_kernel_app(ctx.kernels.at(id.text), std::move(arg));
    };
    parser.on_ident = [&](const Token& id) -> Expr {
        auto it = ctx.idents.find(id.text);
        if (it == ctx.idents.end())
            throw ParseError(id.pos, "unknown identifier " + id.text);
        return make_sym(it->second);
    };
    parser.on_deriv = [&](const Token& id, const std::map<Sym, unsigned>&) -> Expr {
        throw ParseError(id.pos, "derivatives are not allowed here");
    };
    parser.on_subscript_letter = [&](const Token& t) -> Sym {
        throw ParseError(t.pos, "derivatives are not allowed here");
    };
    Expr e = parser.parse_expression();
    parser.expect(Tok::End, "end of input");
    return e;
}

} // namespace fex
