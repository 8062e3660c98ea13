#include "symschrod/parse.hpp"

#include <cctype>

namespace symschrod {

namespace {

// expr   := term (('+' | '-') term)*
// term   := factor (('*' | '/') factor)*
// factor := ('-' | '+')* power
// power  := atom ('^' exponent)?
// atom   := rational | variable | '(' expr ')'
class Parser {
  public:
    Parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

    LaurentPoly run() {
        LaurentPoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return p;
    }

  private:
    std::string_view text_;
    std::size_t dim_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    LaurentPoly expr() {
        LaurentPoly p = term();
        while (true) {
            if (eat('+'))
                p += term();
            else if (eat('-'))
                p -= term();
            else
                return p;
        }
    }

    LaurentPoly term() {
        LaurentPoly p = factor();
        while (true) {
            if (eat('*')) {
                p *= factor();
            } else if (eat('/')) {
                std::size_t at = pos_;
                LaurentPoly d = factor();
                p = divide(p, d, at);
            } else {
                return p;
            }
        }
    }

    LaurentPoly factor() {
        bool neg = false;
        while (true) {
            if (eat('-'))
                neg = !neg;
            else if (eat('+'))
                ;
            else
                break;
        }
        LaurentPoly p = power();
        return neg ? -p : p;
    }

    LaurentPoly power() {
        LaurentPoly base = atom();
        if (!eat('^')) return base;
        int e = exponent();
        if (e == 0) return LaurentPoly::constant(dim_ + 1, GaussianRational(1));
        LaurentPoly out = LaurentPoly::constant(dim_ + 1, GaussianRational(1));
        LaurentPoly b = base;
        if (e < 0) {
            std::size_t at = pos_;
            b = divide(out, base, at);  // 1 / base, must be a monomial
            e = -e;
        }
        for (int k = 0; k < e; ++k) out *= b;
        return out;
    }

    int exponent() {
        skip_ws();
        bool paren = eat('(');
        bool neg = eat('-');
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer exponent");
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1000) fail("exponent too large");
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/')) {
            pos_ = start;
            fail("exponent must be an integer");
        }
        if (paren && !eat(')')) fail("expected ')'");
        return static_cast<int>(neg ? -v : v);
    }

    LaurentPoly atom() {
        skip_ws();
        if (eat('(')) {
            LaurentPoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (c == 't') {
            ++pos_;
            return LaurentPoly::variable(dim_ + 1, 0);
        }
        if (c == 'x') {
            ++pos_;
            std::size_t idx = 1;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                idx = 0;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    idx = idx * 10 + (text_[pos_] - '0');
                    ++pos_;
                }
            }
            if (idx < 1 || idx > dim_) fail("variable index out of range for dimension");
            return LaurentPoly::variable(dim_ + 1, idx);
        }
        fail("expected number, variable, or '('");
    }

    LaurentPoly number() {
        BigInt v(0);
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * BigInt(10) + BigInt(text_[pos_] - '0');
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals unsupported; use fractions");
        return LaurentPoly::constant(dim_ + 1, GaussianRational(Rational(v, BigInt(1))));
    }

    LaurentPoly divide(const LaurentPoly& num, const LaurentPoly& den, std::size_t at) {
        if (den.is_zero()) throw ParseError("division by zero", at);
        if (den.term_count() != 1)
            throw ParseError("division only by monomials (Laurent)", at);
        const auto& [mono, coeff] = *den.terms().begin();
        LaurentPoly out(num.nvars());
        Monomial inv = mono;
        for (auto& e : inv.exps) e = -e;
        GaussianRational ic = coeff.inverse();
        for (const auto& [m, c] : num.terms()) out.add_term(m * inv, c * ic);
        return out;
    }
};

}  // namespace

LaurentPoly parse_potential(std::string_view text, std::size_t dim) {
    return Parser(text, dim).run();
}

}  // namespace symschrod
