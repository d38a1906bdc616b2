#include "gsalg/parser.hpp"

#include <cctype>

#include "gsalg/error.hpp"

namespace gsalg {

namespace {

enum class Tok { number, ident, plus, minus, star, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
};

class Parser {
public:
    Parser(std::string_view text, unsigned d, Field field, unsigned cap, std::size_t line)
        : text_(text), d_(d), field_(field), cap_(cap), line_(line) {
        advance();
    }

    Element parse() {
        if (current_.kind == Tok::end) fail("empty expression", current_.column);
        Element e = expr();
        if (current_.kind != Tok::end) fail("unexpected '" + current_.text + "'", current_.column);
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::size_t column) const { throw ParseError(what, line_, column); }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::size_t col = pos_ + 1;
        if (pos_ >= text_.size()) {
            current_ = {Tok::end, "end of input", col};
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            // a/b literal: the slash binds only between two digit runs.
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
            current_ = {Tok::number, std::string(text_.substr(start, pos_ - start)), col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
            current_ = {Tok::ident, std::string(text_.substr(start, pos_ - start)), col};
            return;
        }
        ++pos_;
        switch (c) {
        case '+': current_ = {Tok::plus, "+", col}; return;
        case '-': current_ = {Tok::minus, "-", col}; return;
        case '*': current_ = {Tok::star, "*", col}; return;
        case '^': current_ = {Tok::caret, "^", col}; return;
        case '(': current_ = {Tok::lparen, "(", col}; return;
        case ')': current_ = {Tok::rparen, ")", col}; return;
        default: fail(std::string("unexpected character '") + c + "'", col);
        }
    }

    Element expr() {
        Element acc = term();
        while (current_.kind == Tok::plus || current_.kind == Tok::minus) {
            bool minus = current_.kind == Tok::minus;
            advance();
            Element rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    Element term() {
        Element acc = unary();
        while (current_.kind == Tok::star) {
            advance();
            acc = acc * unary();
        }
        if (current_.kind == Tok::number || current_.kind == Tok::ident || current_.kind == Tok::lparen)
            fail("juxtaposition is not allowed; write '*' between factors", current_.column);
        return acc;
    }

    Element unary() {
        if (current_.kind == Tok::minus) {
            advance();
            return -unary();
        }
        if (current_.kind == Tok::plus) {
            advance();
            return unary();
        }
        return power();
    }

    Element power() {
        Element base = primary();
        if (current_.kind != Tok::caret) return base;
        std::size_t col = current_.column;
        advance();
        if (current_.kind != Tok::number || current_.text.find('/') != std::string::npos)
            fail("exponent must be a positive integer", current_.column);
        mpz_class e(current_.text);
        if (e < 1) fail("exponent must be at least 1", current_.column);
        auto top = base.top_degree();
        if (top && *top > 0 && e > cap_) fail("power exceeds the degree cap", col);
        if (e > 1024) fail("exponent too large", current_.column);
        advance();
        if (current_.kind == Tok::caret) fail("chained exponents are ambiguous; use parentheses", current_.column);
        return base.pow(static_cast<unsigned>(e.get_ui()));
    }

    Element primary() {
        Token t = current_;
        switch (t.kind) {
        case Tok::number: {
            advance();
            mpq_class q(t.text);
            if (q.get_den() == 0) fail("zero denominator", t.column);
            q.canonicalize();
            try {
                return Element::constant(field_, d_, Scalar(field_, q), cap_);
            } catch (const InvalidArgument& e) {
                fail(e.what(), t.column);
            }
        }
        case Tok::ident: {
            advance();
            return Element::generator(field_, d_, letter(t), cap_);
        }
        case Tok::lparen: {
            advance();
            Element e = expr();
            if (current_.kind != Tok::rparen) fail("expected ')'", current_.column);
            advance();
            return e;
        }
        default: fail("expected a number, a generator or '('", t.column);
        }
    }

    std::uint32_t letter(const Token& t) const {
        if (d_ == 2 && t.text == "x") return 0;
        if (d_ == 2 && t.text == "y") return 1;
        if (t.text.size() >= 2 && t.text[0] == 'x') {
            std::uint32_t v = 0;
            bool digits = t.text[1] != '0';
            for (std::size_t i = 1; i < t.text.size() && digits; ++i) {
                if (!std::isdigit(static_cast<unsigned char>(t.text[i])) || v > 100000) digits = false;
                else v = v * 10 + static_cast<std::uint32_t>(t.text[i] - '0');
            }
            if (digits && v >= 1 && v <= d_) return v - 1;
        }
        fail("unknown identifier '" + t.text + "' for " + std::to_string(d_) + " generators", t.column);
    }

    std::string_view text_;
    unsigned d_;
    Field field_;
    unsigned cap_;
    std::size_t line_;
    std::size_t pos_ = 0;
    Token current_{Tok::end, "", 0};
};

}  // namespace

Element parse_element(std::string_view text, unsigned d, Field field, unsigned degree_cap, std::size_t line) {
    if (d == 0) throw InvalidArgument("generator count must be positive");
    return Parser(text, d, field, degree_cap, line).parse();
}

std::vector<Element> parse_relations(std::string_view text, unsigned d, Field field, unsigned degree_cap) {
    std::vector<Element> out;
    std::size_t line = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view row = text.substr(start, end - start);
        if (auto hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        bool blank = true;
        for (char c : row)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) out.push_back(parse_element(row, d, field, degree_cap, line));
        ++line;
        start = end + 1;
    }
    return out;
}

}  // namespace gsalg
