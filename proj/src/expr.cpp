#include "nctorus/expr.hpp"

#include <cctype>
#include <charconv>

namespace nctorus {

namespace {

constexpr std::string_view kZeta = "\xCE\xB6"; // ζ
constexpr std::string_view kDot = "\xC2\xB7";  // ·

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    std::vector<Term> expression() {
        std::vector<Term> terms;
        skip();
        bool negative = accept("-");
        if (!negative) accept("+");
        for (;;) {
            Term t = term();
            if (negative) t.coeff = -t.coeff;
            terms.push_back(std::move(t));
            skip();
            if (at_end()) break;
            if (accept("+")) negative = false;
            else if (accept("-")) negative = true;
            else fail("expected '+' or '-'");
        }
        return terms;
    }

private:
    Term term() {
        Term t{Coefficient::one(), {}};
        atom(t);
        for (;;) {
            skip();
            if (!accept("*") && !accept(kDot)) break;
            atom(t);
        }
        return t;
    }

    void atom(Term& t) {
        skip();
        if (at_end()) fail("unexpected end of expression");
        if (accept("(")) {
            t.coeff = t.coeff * coefficient_sum();
            skip();
            if (!accept(")")) fail("expected ')'");
            return;
        }
        if (peek_zeta()) {
            t.coeff *= zeta();
            return;
        }
        const char c = s_[pos_];
        if (c == 't' || c == 'g') {
            Factor f = generator();
            t.factors.push_back(f);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'i') {
            t.coeff *= number();
            return;
        }
        fail("unexpected character");
    }

    Factor generator() {
        const std::size_t start = pos_;
        Generator kind;
        if (accept("th")) kind = Generator::th;
        else if (accept("gh")) kind = Generator::gh;
        else if (accept("t")) kind = Generator::t;
        else if (accept("g")) kind = Generator::g;
        else fail("expected a generator");
        if (at_end() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            pos_ = start;
            fail("generator needs an index");
        }
        const auto index = integer();
        if (index < 1) {
            pos_ = start;
            fail("generator indices start at 1");
        }
        std::int64_t e = 1;
        skip();
        if (accept("^")) e = signed_exponent();
        return {kind, static_cast<int>(index - 1), e, start};
    }

    std::int64_t signed_exponent() {
        skip();
        const bool paren = accept("(");
        skip();
        bool neg = false;
        if (accept("-")) neg = true;
        else accept("+");
        skip();
        if (at_end() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected an integer exponent");
        std::int64_t v = integer();
        skip();
        if (paren && !accept(")")) fail("expected ')'");
        return neg ? -v : v;
    }

    std::int64_t integer() {
        std::int64_t v = 0;
        const auto* first = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc() || ptr == first) fail("expected an integer");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    // A real number, a rational p/q, either optionally followed by i; or i alone.
    Complex number() {
        if (accept("i")) return {0.0, 1.0};
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == 'e' ||
                             ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start && s_[pos_ - 1] == 'e')))
            ++pos_;
        double v = 0.0;
        try {
            std::size_t used = 0;
            const std::string digits(s_.substr(start, pos_ - start));
            v = std::stod(digits, &used);
            if (used != digits.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number");
        }
        if (accept("/")) {
            const std::size_t dpos = pos_;
            const auto den = integer();
            if (den == 0) {
                pos_ = dpos;
                fail("zero denominator");
            }
            v /= static_cast<double>(den);
        }
        if (accept("i")) return {0.0, v};
        return {v, 0.0};
    }

    bool peek_zeta() const { return s_.substr(pos_).starts_with(kZeta) || s_.substr(pos_).starts_with("zeta"); }

    Phase zeta() {
        if (!accept(kZeta)) accept("zeta");
        if (at_end() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("zeta needs an order");
        const std::size_t at = pos_;
        const auto n = integer();
        if (n < 1) {
            pos_ = at;
            fail("zeta order must be positive");
        }
        std::int64_t k = 1;
        skip();
        if (accept("^")) k = signed_exponent();
        return Phase(k, n);
    }

    // Inside parentheses: a signed sum of products of numbers and zetas.
    Coefficient coefficient_sum() {
        Coefficient total;
        skip();
        bool negative = accept("-");
        if (!negative) accept("+");
        for (;;) {
            Coefficient item = Coefficient::one();
            bool any = false;
            for (;;) {
                skip();
                if (accept("(")) {
                    item = item * coefficient_sum();
                    skip();
                    if (!accept(")")) fail("expected ')'");
                } else if (peek_zeta()) {
                    item *= zeta();
                } else if (!at_end() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == 'i')) {
                    item *= number();
                } else {
                    fail("expected a coefficient");
                }
                any = true;
                skip();
                if (!accept("*") && !accept(kDot)) break;
            }
            if (any) total += negative ? -item : item;
            skip();
            if (accept("+")) negative = false;
            else if (accept("-")) negative = true;
            else break;
        }
        return total;
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    bool accept(std::string_view tok) {
        if (s_.substr(pos_).starts_with(tok)) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ExpressionError(pos_, msg); }

    std::string_view s_;
    std::size_t pos_ = 0;
};

const char* generator_name(Generator g) {
    switch (g) {
    case Generator::t: return "t";
    case Generator::g: return "g";
    case Generator::th: return "th";
    case Generator::gh: return "gh";
    }
    return "?";
}

} // namespace

std::vector<Term> parse_expression(std::string_view text) { return Parser(text).expression(); }

LaurentPoly parse_laurent(std::string_view text, int g) {
    LaurentPoly out(g);
    for (const auto& term : parse_expression(text)) {
        Exponent e(static_cast<std::size_t>(g), 0);
        for (const auto& f : term.factors) {
            if (f.kind != Generator::t) throw ExpressionError(f.position, std::string("generator ") + generator_name(f.kind) + " is not allowed here");
            if (f.index >= g) throw ExpressionError(f.position, "t" + std::to_string(f.index + 1) + " exceeds the dimension " + std::to_string(g));
            e[static_cast<std::size_t>(f.index)] += f.exponent;
        }
        out.add_term(e, term.coeff);
    }
    return out;
}

QPolynomial parse_qpolynomial(std::string_view text, const BilinearCocycle& lambda, const PeriodMatrix& q, CrossedSide side) {
    const int g = lambda.dim();
    const Generator tk = side == CrossedSide::nc ? Generator::t : Generator::th;
    const Generator gk = side == CrossedSide::nc ? Generator::g : Generator::gh;
    const Exponent zero(static_cast<std::size_t>(g), 0);
    QPolynomial out(g);
    for (const auto& term : parse_expression(text)) {
        QPolynomial acc = QPolynomial::monomial(zero, zero, term.coeff);
        for (const auto& f : term.factors) {
            if (f.kind != tk && f.kind != gk)
                throw ExpressionError(f.position, std::string("generator ") + generator_name(f.kind) + " does not belong to this algebra");
            if (f.index >= g)
                throw ExpressionError(f.position, generator_name(f.kind) + std::to_string(f.index + 1) + " exceeds the dimension " + std::to_string(g));
            Exponent e = zero;
            e[static_cast<std::size_t>(f.index)] = f.exponent;
            const QPolynomial m = f.kind == tk ? QPolynomial::monomial(e, zero) : QPolynomial::monomial(zero, e);
            acc = mul_crossed(acc, m, lambda, q, side);
        }
        out += acc;
    }
    return out;
}

} // namespace nctorus
