#include "qfun/qcir.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qfun {

const char* to_string(QcirErrorKind kind) {
    switch (kind) {
    case QcirErrorKind::Syntax: return "syntax error";
    case QcirErrorKind::UndefinedGate: return "undefined gate";
    case QcirErrorKind::RedefinedName: return "redefined name";
    case QcirErrorKind::FreeVariable: return "free variable";
    case QcirErrorKind::CyclicGate: return "cyclic gate";
    }
    return "error";
}

QcirError::QcirError(QcirErrorKind kind, std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + to_string(kind) + ": " +
            message),
      kind_(kind), line_(line), column_(column) {}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct Token {
    enum Kind { Ident, LParen, RParen, Comma, Equals, Minus, End } kind;
    std::string text;
    std::size_t column;
};

struct Ref {
    bool negated;
    std::string name;
    std::size_t line, column;
};

enum class Op { And, Or, Xor, Ite };

struct GateDef {
    std::string name;
    Op op;
    std::vector<Ref> inputs;
    std::size_t line, column;
};

class LineLexer {
public:
    LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    Token next() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        const std::size_t col = pos_ + 1;
        if (pos_ == line_.size()) return {Token::End, "", col};
        const char c = line_[pos_];
        if (ident_char(c)) {
            const auto start = pos_;
            while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
            return {Token::Ident, std::string(line_.substr(start, pos_ - start)), col};
        }
        ++pos_;
        switch (c) {
        case '(': return {Token::LParen, "(", col};
        case ')': return {Token::RParen, ")", col};
        case ',': return {Token::Comma, ",", col};
        case '=': return {Token::Equals, "=", col};
        case '-': return {Token::Minus, "-", col};
        default: break;
        }
        throw QcirError(QcirErrorKind::Syntax, line_no_, col, std::string("unexpected character '") + c + "'");
    }

    Token expect(Token::Kind kind, const char* what) {
        Token t = next();
        if (t.kind != kind) throw QcirError(QcirErrorKind::Syntax, line_no_, t.column, std::string("expected ") + what);
        return t;
    }

    /// Parenthesised, comma-separated list after the opening '(' was consumed.
    std::vector<Ref> literal_list(bool allow_negation) {
        std::vector<Ref> out;
        Token t = next();
        if (t.kind == Token::RParen) return out;
        for (;;) {
            bool neg = false;
            std::size_t col = t.column;
            if (t.kind == Token::Minus) {
                if (!allow_negation) throw QcirError(QcirErrorKind::Syntax, line_no_, t.column, "negation not allowed here");
                neg = true;
                t = next();
            }
            if (t.kind != Token::Ident) throw QcirError(QcirErrorKind::Syntax, line_no_, t.column, "expected identifier");
            out.push_back(Ref{neg, t.text, line_no_, col});
            t = next();
            if (t.kind == Token::RParen) return out;
            if (t.kind != Token::Comma) throw QcirError(QcirErrorKind::Syntax, line_no_, t.column, "expected ',' or ')'");
            t = next();
        }
    }

    void expect_end() {
        Token t = next();
        if (t.kind != Token::End) throw QcirError(QcirErrorKind::Syntax, line_no_, t.column, "trailing input");
    }

private:
    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(Aig& aig) : aig_(aig) {}

    QcirProblem run(std::string_view text) {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(start, end - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            ++line_no;
            statement(line, line_no);
            start = end + 1;
        }
        if (!output_) throw QcirError(QcirErrorKind::Syntax, line_no, 1, "missing output statement");
        return finish();
    }

private:
    void statement(std::string_view line, std::size_t line_no) {
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos) return;
        if (line[first] == '#') return;  // header or comment

        LineLexer lex(line, line_no);
        Token head = lex.next();
        if (head.kind != Token::Ident) throw QcirError(QcirErrorKind::Syntax, line_no, head.column, "expected a statement");
        const std::string kw = lower(head.text);
        Token after = lex.next();

        if (after.kind == Token::LParen && (kw == "forall" || kw == "exists")) {
            if (output_ || !gates_.empty())
                throw QcirError(QcirErrorKind::Syntax, line_no, head.column, "quantifier after the prefix section");
            const auto refs = lex.literal_list(false);
            lex.expect_end();
            std::vector<Var> vars;
            for (const auto& r : refs) {
                if (var_ids_.count(r.name) != 0)
                    throw QcirError(QcirErrorKind::RedefinedName, r.line, r.column, "variable '" + r.name + "' bound twice");
                const Var v = aig_.var_named(r.name);
                var_ids_.emplace(r.name, v);
                vars.push_back(v);
            }
            prefix_.push(kw == "forall" ? Quantifier::Forall : Quantifier::Exists, vars);
            return;
        }
        if (after.kind == Token::LParen && kw == "output") {
            if (output_) throw QcirError(QcirErrorKind::Syntax, line_no, head.column, "second output statement");
            const auto refs = lex.literal_list(true);
            lex.expect_end();
            if (refs.size() != 1) throw QcirError(QcirErrorKind::Syntax, line_no, head.column, "output takes one literal");
            output_ = refs[0];
            return;
        }
        if (after.kind == Token::LParen && kw == "free")
            throw QcirError(QcirErrorKind::Syntax, line_no, head.column, "free variables are not supported");
        if (after.kind != Token::Equals) throw QcirError(QcirErrorKind::Syntax, line_no, after.column, "expected '='");

        Token op_tok = lex.expect(Token::Ident, "gate type");
        const std::string op_name = lower(op_tok.text);
        Op op;
        if (op_name == "and") op = Op::And;
        else if (op_name == "or") op = Op::Or;
        else if (op_name == "xor") op = Op::Xor;
        else if (op_name == "ite") op = Op::Ite;
        else throw QcirError(QcirErrorKind::Syntax, line_no, op_tok.column, "unknown gate type '" + op_tok.text + "'");
        lex.expect(Token::LParen, "'('");
        auto inputs = lex.literal_list(true);
        lex.expect_end();
        if (op == Op::Xor && inputs.size() != 2)
            throw QcirError(QcirErrorKind::Syntax, line_no, op_tok.column, "xor takes exactly two literals");
        if (op == Op::Ite && inputs.size() != 3)
            throw QcirError(QcirErrorKind::Syntax, line_no, op_tok.column, "ite takes exactly three literals");
        if (var_ids_.count(head.text) != 0 || gate_index_.count(head.text) != 0)
            throw QcirError(QcirErrorKind::RedefinedName, line_no, head.column, "name '" + head.text + "' already defined");
        gate_index_.emplace(head.text, gates_.size());
        gates_.push_back(GateDef{head.text, op, std::move(inputs), line_no, head.column});
    }

    NodeRef build(const GateDef& g, const std::vector<NodeRef>& in) {
        switch (g.op) {
        case Op::And: return aig_.mk_and(in);
        case Op::Or: return aig_.mk_or(in);
        case Op::Xor: return aig_.mk_xor(in[0], in[1]);
        case Op::Ite: return aig_.mk_ite(in[0], in[1], in[2]);
        }
        return kFalse;
    }

    /// Resolves every gate; forward references are allowed as long as the
    /// definitions are acyclic.
    QcirProblem finish() {
        std::vector<NodeRef> value(gates_.size());
        std::vector<char> state(gates_.size(), 0);  // 0 new, 1 open, 2 done
        auto lit_of = [&](const Ref& r) -> std::optional<NodeRef> {
            if (auto it = var_ids_.find(r.name); it != var_ids_.end()) {
                const NodeRef v = aig_.mk_var(it->second);
                return r.negated ? !v : v;
            }
            auto g = gate_index_.find(r.name);
            if (g == gate_index_.end())
                throw QcirError(QcirErrorKind::FreeVariable, r.line, r.column, "'" + r.name + "' is neither quantified nor a gate");
            if (state[g->second] != 2) return std::nullopt;
            return r.negated ? !value[g->second] : value[g->second];
        };

        for (std::size_t root = 0; root < gates_.size(); ++root) {
            if (state[root] == 2) continue;
            std::vector<std::size_t> stack{root};
            state[root] = 1;
            while (!stack.empty()) {
                const auto gi = stack.back();
                const auto& g = gates_[gi];
                std::vector<NodeRef> in;
                bool ready = true;
                for (const auto& r : g.inputs) {
                    auto lit = lit_of(r);
                    if (lit) {
                        in.push_back(*lit);
                        continue;
                    }
                    const auto dep = gate_index_.at(r.name);
                    if (state[dep] == 1)
                        throw QcirError(QcirErrorKind::CyclicGate, r.line, r.column, "gate '" + r.name + "' depends on itself");
                    state[dep] = 1;
                    stack.push_back(dep);
                    ready = false;
                    break;
                }
                if (!ready) continue;
                value[gi] = build(g, in);
                state[gi] = 2;
                stack.pop_back();
            }
        }

        QcirProblem p;
        for (std::size_t i = 0; i < gates_.size(); ++i) p.gates.emplace(gates_[i].name, value[i]);
        const Ref& out = *output_;
        NodeRef matrix;
        if (auto it = var_ids_.find(out.name); it != var_ids_.end()) {
            matrix = aig_.mk_var(it->second);
        } else if (auto g = gate_index_.find(out.name); g != gate_index_.end()) {
            matrix = value[g->second];
        } else {
            throw QcirError(QcirErrorKind::UndefinedGate, out.line, out.column, "output '" + out.name + "' is not defined");
        }
        p.game = Game{prefix_, out.negated ? !matrix : matrix};
        return p;
    }

    Aig& aig_;
    Prefix prefix_;
    std::unordered_map<std::string, Var> var_ids_;
    std::unordered_map<std::string, std::size_t> gate_index_;
    std::vector<GateDef> gates_;
    std::optional<Ref> output_;
};

bool valid_identifier(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), ident_char);
}

} // namespace

QcirProblem parse_qcir(std::string_view text, Aig& aig) { return Parser(aig).run(text); }

QcirProblem read_qcir_file(const std::filesystem::path& path, Aig& aig) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_qcir(ss.str(), aig);
}

std::string print_qcir(const Aig& aig, const Game& g) {
    // Identifiers for variables: keep valid names, mangle the rest.
    std::unordered_map<Var, std::string> names;
    std::unordered_set<std::string> taken;
    auto name_var = [&](Var v) {
        if (names.count(v) != 0) return;
        std::string n = aig.var_name(v);
        if (!valid_identifier(n)) {
            for (auto& c : n) {
                if (!ident_char(c)) c = '_';
            }
            if (n.empty()) n = "v";
            const std::string base = n;
            for (int k = 1; taken.count(n) != 0; ++k) n = base + "_" + std::to_string(k);
        }
        taken.insert(n);
        names.emplace(v, n);
    };
    for (Var v : g.prefix.vars()) name_var(v);
    for (Var v : aig.collect_vars(g.matrix)) name_var(v);

    // Gate numbers start past any variable spelled g<digits>.
    std::uint64_t next_gate = 1;
    for (const auto& n : taken) {
        if (n.size() > 1 && (n[0] == 'g' || n[0] == 'G') && std::all_of(n.begin() + 1, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            if (n.size() < 19) next_gate = std::max<std::uint64_t>(next_gate, std::stoull(n.substr(1)) + 1);
        }
    }

    std::ostringstream os;
    os << "#QCIR-G14\n";
    for (const auto& b : g.prefix.blocks()) {
        os << to_string(b.quantifier) << '(';
        for (std::size_t i = 0; i < b.vars.size(); ++i) os << (i ? ", " : "") << names.at(b.vars[i]);
        os << ")\n";
    }

    std::unordered_map<std::uint32_t, std::string> gate_name;
    std::ostringstream body;
    auto lit = [&](NodeRef r) {
        const auto& n = aig.node(r.index());
        const std::string& base = n.kind == Aig::Kind::Variable ? names.at(n.var) : gate_name.at(r.index());
        return (r.complemented() ? "-" : "") + base;
    };
    std::string output;
    if (g.matrix.is_const()) {
        const std::string name = "g" + std::to_string(next_gate++);
        body << name << " = and()\n";
        output = (g.matrix.is_false() ? "-" : "") + name;
    } else {
        for (auto i : aig.cone(std::span(&g.matrix, 1))) {
            const auto& n = aig.node(i);
            if (n.kind != Aig::Kind::And) continue;
            const std::string name = "g" + std::to_string(next_gate++);
            body << name << " = and(" << lit(n.left) << ", " << lit(n.right) << ")\n";
            gate_name.emplace(i, name);
        }
        output = lit(g.matrix);
    }
    os << "output(" << output << ")\n" << body.str();
    return os.str();
}

} // namespace qfun
