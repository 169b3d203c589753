#include "ffb/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ffb {

namespace {

// graded lex, highest degree first; ties broken by exponent vector descending
bool term_before(const Term& a, const Term& b) {
    std::uint32_t da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.exps > b.exps;
}

}  // namespace

MultiPoly MultiPoly::zero(FieldPtr field, std::uint32_t nvars) {
    MultiPoly p;
    p.field_ = std::move(field);
    p.nvars_ = nvars;
    return p;
}

MultiPoly MultiPoly::constant(FieldPtr field, std::uint32_t nvars, elem c) {
    MultiPoly p = zero(std::move(field), nvars);
    if (c) p.terms_.push_back({std::vector<std::uint8_t>(nvars, 0), c});
    return p;
}

MultiPoly MultiPoly::monomial(FieldPtr field, std::uint32_t nvars, std::vector<std::uint8_t> exps, elem c) {
    if (exps.size() != nvars) throw Error(ErrorCode::ArityMismatch, "exponent vector length");
    MultiPoly p = zero(std::move(field), nvars);
    if (c) p.terms_.push_back({std::move(exps), c});
    p.normalize();
    return p;
}

MultiPoly MultiPoly::from_terms(FieldPtr field, std::uint32_t nvars, std::vector<Term> terms) {
    MultiPoly p = zero(std::move(field), nvars);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

void MultiPoly::normalize() {
    const Field& F = *field_;
    for (auto& t : terms_)
        if (t.exps.size() != nvars_) throw Error(ErrorCode::ArityMismatch, "exponent vector length");
    std::sort(terms_.begin(), terms_.end(), term_before);
    std::vector<Term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exps == t.exps) {
            merged.back().coeff = F.add(merged.back().coeff, t.coeff);
        } else {
            merged.push_back(std::move(t));
        }
    }
    terms_.clear();
    for (auto& t : merged) {
        if (t.coeff == 0) continue;
        if (t.degree() > kDegreeCap)
            throw Error(ErrorCode::DegreeCapExceeded,
                        "total degree exceeds the configured cap of " + std::to_string(kDegreeCap));
        terms_.push_back(std::move(t));
    }
}

bool MultiPoly::terms_equal(const MultiPoly& rhs) const {
    if (terms_.size() != rhs.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exps != rhs.terms_[i].exps || terms_[i].coeff != rhs.terms_[i].coeff) return false;
    return true;
}

std::optional<std::uint32_t> MultiPoly::total_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().degree();  // canonical order puts the top degree first
}

bool MultiPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    std::uint32_t d = terms_.front().degree();
    for (const auto& t : terms_)
        if (t.degree() != d) return false;
    return true;
}

MultiPoly MultiPoly::operator+(const MultiPoly& rhs) const {
    if (nvars_ != rhs.nvars_) throw Error(ErrorCode::ArityMismatch, "adding polynomials of different arity");
    if (!field_->same_spec(*rhs.field_)) throw Error(ErrorCode::FieldMismatch, "different fields");
    std::vector<Term> terms = terms_;
    terms.insert(terms.end(), rhs.terms_.begin(), rhs.terms_.end());
    return from_terms(field_, nvars_, std::move(terms));
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly p = *this;
    for (auto& t : p.terms_) t.coeff = field_->neg(t.coeff);
    return p;
}

MultiPoly MultiPoly::operator-(const MultiPoly& rhs) const { return *this + (-rhs); }

MultiPoly MultiPoly::operator*(const MultiPoly& rhs) const {
    if (nvars_ != rhs.nvars_) throw Error(ErrorCode::ArityMismatch, "multiplying polynomials of different arity");
    if (!field_->same_spec(*rhs.field_)) throw Error(ErrorCode::FieldMismatch, "different fields");
    const Field& F = *field_;
    std::vector<Term> terms;
    terms.reserve(terms_.size() * rhs.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : rhs.terms_) {
            Term t;
            t.exps.resize(nvars_);
            for (std::uint32_t i = 0; i < nvars_; ++i) t.exps[i] = std::uint8_t(a.exps[i] + b.exps[i]);
            t.coeff = F.mul(a.coeff, b.coeff);
            terms.push_back(std::move(t));
        }
    return from_terms(field_, nvars_, std::move(terms));
}

MultiPoly MultiPoly::scaled(elem c) const {
    if (c == 0) return zero(field_, nvars_);
    MultiPoly p = *this;
    for (auto& t : p.terms_) t.coeff = field_->mul(t.coeff, c);
    return p;
}

elem MultiPoly::evaluate(std::span<const elem> point) const {
    if (point.size() != nvars_) throw Error(ErrorCode::ArityMismatch, "point arity mismatch");
    const Field& F = *field_;
    elem acc = 0;
    for (const auto& t : terms_) {
        elem v = t.coeff;
        for (std::uint32_t i = 0; i < nvars_; ++i)
            if (t.exps[i]) v = F.mul(v, F.pow(point[i], t.exps[i]));
        acc = F.add(acc, v);
    }
    return acc;
}

elem MultiPoly::evaluate(std::span<const elem> point, const TowerEmbedding& emb) const {
    if (!emb.base()->same_spec(*field_)) throw Error(ErrorCode::FieldMismatch, "embedding base mismatch");
    return base_change(emb).evaluate(point);
}

MultiPoly MultiPoly::specialize(std::uint32_t var, elem c) const {
    if (var >= nvars_) throw Error(ErrorCode::ArityMismatch, "variable index out of range");
    const Field& F = *field_;
    std::vector<Term> terms;
    for (const auto& t : terms_) {
        elem coeff = t.coeff;
        if (t.exps[var]) coeff = F.mul(coeff, F.pow(c, t.exps[var]));
        if (!coeff) continue;
        Term nt;
        nt.coeff = coeff;
        nt.exps.reserve(nvars_ - 1);
        for (std::uint32_t i = 0; i < nvars_; ++i)
            if (i != var) nt.exps.push_back(t.exps[i]);
        terms.push_back(std::move(nt));
    }
    return from_terms(field_, nvars_ - 1, std::move(terms));
}

MultiPoly MultiPoly::linear_substitute(const Mat& A) const {
    std::vector<elem> shift(nvars_, 0);
    return compose_affine(A, shift);
}

MultiPoly MultiPoly::compose_affine(const Mat& A, std::span<const elem> shift) const {
    if (A.rows() != nvars_ || shift.size() != nvars_)
        throw Error(ErrorCode::ShapeMismatch, "substitution matrix must have one row per variable");
    if (!A.field()->same_spec(*field_)) throw Error(ErrorCode::FieldMismatch, "matrix over a different field");
    const std::uint32_t out_vars = std::uint32_t(A.cols());
    // image of each variable as a degree <= 1 polynomial in the new variables
    std::vector<MultiPoly> images;
    images.reserve(nvars_);
    for (std::uint32_t i = 0; i < nvars_; ++i) {
        std::vector<Term> ts;
        if (shift[i]) ts.push_back({std::vector<std::uint8_t>(out_vars, 0), shift[i]});
        for (std::uint32_t j = 0; j < out_vars; ++j) {
            if (elem a = A.at(i, j); a) {
                std::vector<std::uint8_t> e(out_vars, 0);
                e[j] = 1;
                ts.push_back({std::move(e), a});
            }
        }
        images.push_back(from_terms(field_, out_vars, std::move(ts)));
    }
    MultiPoly acc = zero(field_, out_vars);
    for (const auto& t : terms_) {
        MultiPoly part = constant(field_, out_vars, t.coeff);
        for (std::uint32_t i = 0; i < nvars_; ++i)
            for (std::uint8_t e = 0; e < t.exps[i]; ++e) part = part * images[i];
        acc = acc + part;
    }
    return acc;
}

MultiPoly MultiPoly::base_change(const TowerEmbedding& emb) const {
    if (!emb.base()->same_spec(*field_)) throw Error(ErrorCode::FieldMismatch, "embedding base mismatch");
    if (emb.is_identity() && emb.top() == field_) return *this;
    MultiPoly p = zero(emb.top(), nvars_);
    p.terms_ = terms_;
    for (auto& t : p.terms_) t.coeff = emb.embed(t.coeff);
    return p;
}

std::string MultiPoly::format() const {
    if (terms_.empty()) return "0";
    const Field& F = *field_;
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) out += " + ";
        first = false;
        std::string coeff_text;
        if (t.coeff < F.p()) {
            coeff_text = std::to_string(t.coeff);
        } else if (t.coeff == F.p()) {
            coeff_text = "g";
        } else {
            coeff_text = "[";
            auto cs = F.coeffs(t.coeff);
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (i) coeff_text += ",";
                coeff_text += std::to_string(cs[i]);
            }
            coeff_text += "]";
        }
        std::string mono;
        for (std::uint32_t i = 0; i < nvars_; ++i) {
            if (!t.exps[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += "x" + std::to_string(i + 1);
            if (t.exps[i] > 1) mono += "^" + std::to_string(int(t.exps[i]));
        }
        if (mono.empty()) {
            out += coeff_text;
        } else if (coeff_text == "1") {
            out += mono;
        } else {
            out += coeff_text + "*" + mono;
        }
    }
    return out;
}

DegreeInfo degree_check(const MultiPoly& p) { return {p.total_degree(), p.is_homogeneous()}; }

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;
    const FieldPtr& field;
    std::uint32_t nvars;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw Error(ErrorCode::ParseError, msg + " at position " + std::to_string(pos));
    }

    std::uint64_t parse_uint() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail("expected number");
        std::uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + std::uint64_t(text[pos] - '0');
            if (v > 1'000'000'000ull) fail("number too large");
            ++pos;
        }
        return v;
    }

    // coefficient tokens: integer | g[^k] | [c0,c1,...]
    elem parse_coefficient() {
        skip_ws();
        const Field& F = *field;
        if (accept('[')) {
            std::vector<std::uint32_t> cs;
            if (!peek(']')) {
                do {
                    std::uint64_t v = parse_uint();
                    if (v >= F.p()) throw Error(ErrorCode::CoefficientNotInField, "bracket entry >= p");
                    cs.push_back(std::uint32_t(v));
                } while (accept(','));
            }
            if (!accept(']')) fail("expected ']'");
            if (cs.size() > F.m()) throw Error(ErrorCode::CoefficientNotInField, "bracket vector too long");
            return F.from_coeffs(cs);
        }
        if (peek('g')) {
            ++pos;
            if (F.is_prime_field())
                throw Error(ErrorCode::CoefficientNotInField, "generator token needs an extension field");
            elem g = elem(F.p());  // the power-basis generator
            if (accept('^')) return F.pow(g, parse_uint());
            return g;
        }
        return F.from_int(std::int64_t(parse_uint()));
    }

    // factor: xK[^e]
    std::pair<std::uint32_t, std::uint32_t> parse_factor() {
        skip_ws();
        if (pos >= text.size() || text[pos] != 'x') fail("expected variable");
        ++pos;
        std::uint64_t idx = parse_uint();
        if (idx == 0 || idx > nvars)
            throw Error(ErrorCode::UnknownVariable, "variable x" + std::to_string(idx) + " out of range");
        std::uint32_t e = 1;
        if (accept('^')) e = std::uint32_t(parse_uint());
        return {std::uint32_t(idx - 1), e};
    }

    bool at_coefficient() {
        skip_ws();
        if (pos >= text.size()) return false;
        char c = text[pos];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '[' || c == 'g';
    }

    Term parse_term() {
        Term t;
        t.exps.assign(nvars, 0);
        t.coeff = 1;
        const Field& F = *field;
        bool any = false;
        if (at_coefficient()) {
            t.coeff = parse_coefficient();
            any = true;
            if (!accept('*')) return t;  // bare coefficient
        }
        while (true) {
            auto [var, e] = parse_factor();
            any = true;
            std::uint32_t total = t.exps[var] + e;
            if (total > kDegreeCap) throw Error(ErrorCode::DegreeCapExceeded, "term degree above cap");
            t.exps[var] = std::uint8_t(total);
            if (!accept('*')) break;
            if (at_coefficient()) {  // allow 2*x1*3 style only as coefficient*factor chains
                t.coeff = F.mul(t.coeff, parse_coefficient());
                if (!accept('*')) break;
            }
        }
        if (!any) fail("empty term");
        return t;
    }

    MultiPoly parse() {
        std::vector<Term> terms;
        const Field& F = *field;
        bool negate = false;
        skip_ws();
        if (accept('-')) negate = true;
        while (true) {
            Term t = parse_term();
            if (negate) t.coeff = F.neg(t.coeff);
            terms.push_back(std::move(t));
            skip_ws();
            if (pos >= text.size()) break;
            if (accept('+')) {
                negate = false;
            } else if (accept('-')) {
                negate = true;
            } else {
                fail("expected '+' or '-'");
            }
        }
        return MultiPoly::from_terms(field, nvars, std::move(terms));
    }
};

}  // namespace

MultiPoly parse_poly(const std::string& text, const FieldPtr& field, std::uint32_t nvars) {
    Parser parser{text, 0, field, nvars};
    parser.skip_ws();
    if (parser.pos >= text.size()) throw Error(ErrorCode::ParseError, "empty polynomial text");
    return parser.parse();
}

}  // namespace ffb
