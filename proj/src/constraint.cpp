#include "hadad/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

struct RuleLexer {
    const std::string& text;
    const std::string& source;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size()) {
            if (std::isspace((unsigned char)text[pos])) {
                ++pos;
            } else if (text[pos] == '#') {
                while (pos < text.size() && text[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos && i < text.size(); ++i)
            if (text[i] == '\n')
                ++line;
        throw SyntaxError(source + " line " + std::to_string(line) + ": " + msg);
    }

    bool eof() {
        skip_space();
        return pos >= text.size();
    }

    bool eat(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat_arrow() {
        skip_space();
        if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
            pos += 2;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!eat(c))
            fail(std::string("expected ") + what);
    }

    std::string ident() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
            ++pos;
        if (pos == start)
            fail("expected identifier");
        return text.substr(start, pos - start);
    }

    bool peek_is(char c) {
        skip_space();
        return pos < text.size() && text[pos] == c;
    }
};

TermId parse_term(RuleLexer& lex, Symbols& sym) {
    lex.skip_space();
    if (lex.pos >= lex.text.size())
        lex.fail("expected term");
    char c = lex.text[lex.pos];
    if (c == '"') {
        ++lex.pos;
        std::size_t start = lex.pos;
        while (lex.pos < lex.text.size() && lex.text[lex.pos] != '"')
            ++lex.pos;
        if (lex.pos >= lex.text.size())
            lex.fail("unterminated string constant");
        std::string s = lex.text.substr(start, lex.pos - start);
        ++lex.pos;
        return sym.terms.name_const(s);
    }
    if (std::isdigit((unsigned char)c)) {
        std::size_t start = lex.pos;
        while (lex.pos < lex.text.size() && std::isdigit((unsigned char)lex.text[lex.pos]))
            ++lex.pos;
        return sym.terms.dim_const(std::stoll(lex.text.substr(start, lex.pos - start)));
    }
    return sym.terms.var(lex.ident());
}

Atom parse_atom(RuleLexer& lex, Symbols& sym, const std::string& pred_name) {
    Atom a;
    lex.expect('(', "'('");
    std::vector<TermId> args;
    args.push_back(parse_term(lex, sym));
    while (lex.eat(','))
        args.push_back(parse_term(lex, sym));
    lex.expect(')', "')'");
    a.pred = sym.preds.intern(pred_name, args.size());
    a.args = std::move(args);
    return a;
}

void collect_vars(const TermTable& terms, const std::vector<Atom>& atoms,
                  std::set<TermId>& out) {
    for (const Atom& a : atoms)
        for (TermId t : a.args)
            if (terms.is_var(t))
                out.insert(t);
}

}

std::vector<Constraint> parse_constraints(Symbols& sym, const std::string& text,
                                          const std::string& source) {
    std::vector<Constraint> out;
    RuleLexer lex{text, source};
    while (!lex.eof()) {
        Constraint c;
        c.id = source + ":" + std::to_string(out.size());

        while (true) {
            std::string name = lex.ident();
            c.premise.push_back(parse_atom(lex, sym, name));
            if (!lex.eat(','))
                break;
        }
        if (!lex.eat_arrow())
            lex.fail("expected '->'");

        bool saw_atom = false, saw_equality = false;
        while (true) {
            lex.skip_space();
            if (lex.pos >= lex.text.size())
                lex.fail("expected conclusion");
            std::size_t mark = lex.pos;
            // A conclusion item is either pred(...) or term = term.
            if (lex.peek_is('"') || std::isdigit((unsigned char)lex.text[lex.pos])) {
                TermId lhs = parse_term(lex, sym);
                lex.expect('=', "'='");
                c.equalities.emplace_back(lhs, parse_term(lex, sym));
                saw_equality = true;
            } else {
                std::string name = lex.ident();
                if (lex.peek_is('(')) {
                    c.conclusion.push_back(parse_atom(lex, sym, name));
                    saw_atom = true;
                } else if (lex.eat('=')) {
                    c.equalities.emplace_back(sym.terms.var(name), parse_term(lex, sym));
                    saw_equality = true;
                } else {
                    lex.pos = mark;
                    lex.fail("expected atom or equality");
                }
            }
            if (!lex.eat(','))
                break;
        }
        lex.expect(';', "';'");

        if (saw_atom && saw_equality)
            lex.fail("a rule concludes either atoms or equalities, not both");
        c.kind = saw_equality ? ConstraintKind::Egd : ConstraintKind::Tgd;

        std::set<TermId> premise_vars, conclusion_vars;
        collect_vars(sym.terms, c.premise, premise_vars);
        if (c.kind == ConstraintKind::Egd) {
            for (const auto& [l, r] : c.equalities)
                for (TermId t : {l, r})
                    if (sym.terms.is_var(t) && !premise_vars.count(t))
                        lex.fail("equality variable " + sym.terms.show(t) +
                                 " does not occur in the premise");
        } else {
            collect_vars(sym.terms, c.conclusion, conclusion_vars);
            for (TermId v : conclusion_vars)
                if (!premise_vars.count(v))
                    c.existentials.push_back(v);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Constraint> load_constraint_file(Symbols& sym, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open constraint file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_constraints(sym, ss.str(), path);
}

std::vector<Constraint> load_packs(Symbols& sym, const std::vector<std::string>& names) {
    std::vector<Constraint> out;
    for (const std::string& name : names) {
        std::vector<Constraint> part = load_pack(sym, name);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}
