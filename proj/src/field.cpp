#include "ffb/field.hpp"

#include <algorithm>
#include <cstring>

namespace ffb {

namespace {

constexpr std::uint32_t kMaxFieldSize = 1u << 20;  // desk scale; tables are O(q)
constexpr std::uint32_t kFullTableLimit = 1024;    // q*q add/mul tables below this

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense univariate arithmetic over F_p, used only during construction.
using UPoly = std::vector<std::uint32_t>;

UPoly upoly_mod(UPoly a, const UPoly& b, std::uint32_t p) {
    // b monic
    while (a.size() >= b.size() && !a.empty()) {
        if (a.back() == 0) {
            a.pop_back();
            continue;
        }
        std::uint32_t c = a.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::uint64_t sub = std::uint64_t(c) * b[i] % p;
            a[shift + i] = std::uint32_t((a[shift + i] + p - sub) % p);
        }
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

bool upoly_is_irreducible(const UPoly& f, std::uint32_t p) {
    // f monic of degree m >= 1; trial division by all monic polynomials of
    // degree 1..m/2 (complete: any factorization has a factor that small).
    std::size_t m = f.size() - 1;
    if (m == 1) return true;
    for (std::size_t d = 1; 2 * d <= m; ++d) {
        UPoly g(d + 1, 0);
        g[d] = 1;
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::uint64_t v = idx;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = std::uint32_t(v % p);
                v /= p;
            }
            if (upoly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

std::vector<std::uint32_t> factor_distinct_primes(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t d = 2; std::uint64_t(d) * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
        case ErrorCode::ReducibleModulus: return "ReducibleModulus";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::CoefficientNotInField: return "CoefficientNotInField";
        case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NotCubic: return "NotCubic";
        case ErrorCode::NotInSliceIdeal: return "NotInSliceIdeal";
        case ErrorCode::CharacteristicTooSmall: return "CharacteristicTooSmall";
        case ErrorCode::ZeroDirection: return "ZeroDirection";
        case ErrorCode::UnsupportedR: return "UnsupportedR";
        case ErrorCode::NotSliceRankOne: return "NotSliceRankOne";
        case ErrorCode::DoesNotVanish: return "DoesNotVanish";
        case ErrorCode::InconsistentConstraints: return "InconsistentConstraints";
        case ErrorCode::GcdViolation: return "GcdViolation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

std::shared_ptr<const Field> Field::make(std::uint32_t p, std::uint32_t m,
                                         std::vector<std::uint32_t> modulus) {
    if (p == 2) throw Error(ErrorCode::EvenCharacteristic, "characteristic 2 is not supported");
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, "p = " + std::to_string(p) + " is not prime");
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "extension degree must be positive");

    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxFieldSize)
            throw Error(ErrorCode::BudgetExceeded,
                        "field size " + std::to_string(p) + "^" + std::to_string(m) + " exceeds the desk-scale limit");
    }

    if (!modulus.empty()) {
        if (modulus.size() != m + 1 || modulus.back() % p != 1)
            throw Error(ErrorCode::InvalidArgument, "modulus must be monic of degree m");
        for (auto& c : modulus) c %= p;
        if (!upoly_is_irreducible(modulus, p))
            throw Error(ErrorCode::ReducibleModulus, "modulus is reducible over F_p");
    } else {
        // Lexicographically smallest monic irreducible, low-degree coefficients first.
        modulus.assign(m + 1, 0);
        modulus[m] = 1;
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < m; ++i) count *= p;
        bool found = false;
        for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
            std::uint64_t v = idx;
            // idx counts with the HIGH-degree coefficient fastest so that the
            // low-degree-first lexicographic minimum comes first.
            for (std::uint32_t i = 0; i < m; ++i) {
                modulus[m - 1 - i] = std::uint32_t(v % p);
                v /= p;
            }
            found = upoly_is_irreducible(modulus, p);
        }
        if (!found) throw Error(ErrorCode::InvalidArgument, "no irreducible modulus found");  // cannot happen
    }

    auto f = std::shared_ptr<Field>(new Field());
    f->p_ = p;
    f->m_ = m;
    f->q_ = std::uint32_t(q);
    f->modulus_ = std::move(modulus);
    f->build_tables();
    return f;
}

elem Field::add_fallback(elem a, elem b) const {
    if (m_ == 1) {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    elem out = 0, mult = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        std::uint32_t s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        out += s * mult;
        mult *= p_;
        a /= p_;
        b /= p_;
    }
    return out;
}

elem Field::raw_mul(elem a, elem b) const {
    if (m_ == 1) return elem(std::uint64_t(a) * b % p_);
    // schoolbook product of the coefficient vectors, then reduce the overflow
    // digits with the precomputed images of alpha^{m+k}.
    std::uint32_t da[32], db[32];
    std::uint64_t prod[64] = {0};
    for (std::uint32_t i = 0; i < m_; ++i) {
        da[i] = a % p_;
        a /= p_;
        db[i] = b % p_;
        b /= p_;
    }
    for (std::uint32_t i = 0; i < m_; ++i) {
        if (!da[i]) continue;
        for (std::uint32_t j = 0; j < m_; ++j) prod[i + j] += std::uint64_t(da[i]) * db[j];
    }
    std::uint64_t acc[32];
    for (std::uint32_t i = 0; i < m_; ++i) acc[i] = prod[i] % p_;
    for (std::uint32_t k = 2 * m_ - 2; k >= m_ && k < 64; --k) {
        std::uint64_t c = prod[k] % p_;
        if (c) {
            const std::uint32_t* red = reduction_.data() + std::size_t(k - m_) * m_;
            for (std::uint32_t i = 0; i < m_; ++i) acc[i] += c * red[i];
        }
    }
    elem out = 0, mult = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        out += std::uint32_t(acc[i] % p_) * mult;
        mult *= p_;
    }
    return out;
}

elem Field::raw_pow(elem a, std::uint64_t e) const {
    elem r = 1;
    while (e) {
        if (e & 1) r = raw_mul(r, a);
        a = raw_mul(a, a);
        e >>= 1;
    }
    return r;
}

void Field::build_tables() {
    // reduction rows: alpha^{m+k} as a coefficient vector, k = 0..m-2
    if (m_ > 1) {
        reduction_.assign(std::size_t(m_ - 1) * m_, 0);
        std::vector<std::uint32_t> cur(m_);  // alpha^m = -modulus tail
        for (std::uint32_t i = 0; i < m_; ++i) cur[i] = (p_ - modulus_[i]) % p_;
        for (std::uint32_t k = 0; k + 1 < m_; ++k) {
            std::copy(cur.begin(), cur.end(), reduction_.begin() + std::size_t(k) * m_);
            // multiply cur by alpha
            std::uint32_t top = cur[m_ - 1];
            for (std::uint32_t i = m_ - 1; i > 0; --i) cur[i] = cur[i - 1];
            cur[0] = 0;
            if (top) {
                for (std::uint32_t i = 0; i < m_; ++i)
                    cur[i] = std::uint32_t((cur[i] + std::uint64_t(top) * ((p_ - modulus_[i]) % p_)) % p_);
            }
        }
    }

    neg_table_.resize(q_);
    for (elem a = 0; a < q_; ++a) {
        elem out = 0, mult = 1, x = a;
        for (std::uint32_t i = 0; i < m_; ++i) {
            std::uint32_t d = x % p_;
            out += (d ? p_ - d : 0) * mult;
            mult *= p_;
            x /= p_;
        }
        neg_table_[a] = out;
    }

    // multiplicative generator: smallest element of order q-1
    const auto factors = factor_distinct_primes(q_ - 1);
    for (elem g = 1; g < q_; ++g) {
        bool ok = true;
        for (auto f : factors)
            if (raw_pow(g, (q_ - 1) / f) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            generator_ = g;
            break;
        }
    }

    exp_table_.resize(2 * std::size_t(q_ - 1));
    log_table_.assign(q_, 0);
    elem cur = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_table_[i] = cur;
        exp_table_[i + q_ - 1] = cur;
        log_table_[cur] = i;
        cur = raw_mul(cur, generator_);
    }

    inv_table_.assign(q_, 0);
    for (elem a = 1; a < q_; ++a) inv_table_[a] = exp_table_[(q_ - 1) - log_table_[a]];

    sqrt_table_.assign(q_, kNoSqrt);
    sqrt_table_[0] = 0;
    for (elem y = q_; y-- > 0;) {
        elem sq = raw_mul(y, y);
        sqrt_table_[sq] = y;  // descending loop leaves the smallest root
    }
    for (elem a = 1; a < q_; ++a)
        if (sqrt_table_[a] == kNoSqrt) {
            nonsquare_ = a;
            break;
        }

    // trace to F_p is F_p-linear: precompute it on the power basis
    std::vector<std::uint32_t> basis_trace(m_);
    for (std::uint32_t j = 0; j < m_; ++j) {
        // alpha is the element with index p when m > 1; for m == 1 the basis is {1}
        elem alpha_j = 1;
        for (std::uint32_t i = 0; i < j; ++i) alpha_j = raw_mul(alpha_j, elem(p_));
        elem t = 0, conj = alpha_j;
        for (std::uint32_t i = 0; i < m_; ++i) {
            t = add_fallback(t, conj);
            conj = raw_pow(conj, p_);
        }
        basis_trace[j] = t % p_;  // trace lies in the prime subfield, index < p
    }
    class_table_.resize(q_);
    for (elem a = 0; a < q_; ++a) {
        std::uint64_t acc = 0;
        elem x = a;
        for (std::uint32_t j = 0; j < m_; ++j) {
            acc += std::uint64_t(x % p_) * basis_trace[j];
            x /= p_;
        }
        class_table_[a] = std::uint16_t(acc % p_);
    }

    if (q_ <= kFullTableLimit) {
        add_table_ = std::make_unique<elem[]>(std::size_t(q_) * q_);
        mul_table_ = std::make_unique<elem[]>(std::size_t(q_) * q_);
        for (elem a = 0; a < q_; ++a)
            for (elem b = 0; b < q_; ++b) {
                add_table_[std::size_t(a) * q_ + b] = add_fallback(a, b);
                mul_table_[std::size_t(a) * q_ + b] = raw_mul(a, b);
            }
    }
}

elem Field::pow(elem a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? 1 : 0;  // 0^0 = 1 (empty product in evaluation)
    std::uint64_t r = e % (q_ - 1);
    if (r == 0) return 1;
    return exp_table_[std::size_t(std::uint64_t(log_table_[a]) * r % (q_ - 1))];
}

elem Field::from_int(std::int64_t value) const {
    std::int64_t r = value % std::int64_t(p_);
    if (r < 0) r += p_;
    return elem(r);
}

elem Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() > m_) throw Error(ErrorCode::CoefficientNotInField, "coefficient vector too long");
    elem out = 0, mult = 1;
    for (std::size_t i = 0; i < m_; ++i) {
        std::uint32_t c = i < coeffs.size() ? coeffs[i] : 0;
        if (c >= p_) throw Error(ErrorCode::CoefficientNotInField, "coefficient out of range");
        out += c * mult;
        mult *= p_;
    }
    return out;
}

std::vector<std::uint32_t> Field::coeffs(elem a) const {
    std::vector<std::uint32_t> out(m_);
    for (std::uint32_t i = 0; i < m_; ++i) {
        out[i] = a % p_;
        a /= p_;
    }
    return out;
}

elem Field::sqrt(elem a) const {
    elem r = sqrt_table_[a];
    if (r == kNoSqrt) throw Error(ErrorCode::InvalidArgument, "element is not a square");
    return r;
}

std::string Field::descriptor() const {
    if (m_ == 1) return std::to_string(p_);
    return std::to_string(p_) + "^" + std::to_string(m_);
}

std::optional<elem> TowerEmbedding::project(elem top_value) const {
    auto it = project_table_.find(top_value);
    if (it == project_table_.end()) return std::nullopt;
    return it->second;
}

elem TowerEmbedding::trace_to_base(elem top_value) const {
    const Field& T = *top_;
    std::uint64_t qb = base_->q();
    elem acc = 0, conj = top_value;
    for (std::uint32_t j = 0; j < n_; ++j) {
        acc = T.add(acc, conj);
        conj = T.pow(conj, qb);
    }
    auto back = project(acc);
    if (!back)
        throw Error(ErrorCode::FieldMismatch, "trace left the base field image");  // impossible for valid towers
    return *back;
}

TowerEmbedding build_tower(const FieldPtr& base, std::uint32_t n) {
    if (!base) throw Error(ErrorCode::InvalidArgument, "null base field");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "tower degree must be positive");

    TowerEmbedding emb;
    emb.base_ = base;
    emb.n_ = n;
    emb.top_ = (n == 1) ? base : Field::make(base->p(), base->m() * n);
    const Field& T = *emb.top_;

    // first root of the base modulus inside the top field, enumeration order
    const auto& mod = base->modulus();
    elem root = 0;
    bool found = false;
    for (elem x = 0; x < T.q() && !found; ++x) {
        elem acc = 0, xp = 1;
        for (std::size_t i = 0; i < mod.size(); ++i) {
            acc = T.add(acc, T.mul(T.from_int(mod[i]), xp));
            if (i + 1 < mod.size()) xp = T.mul(xp, x);
        }
        if (acc == 0) {
            root = x;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::InvalidArgument, "base modulus has no root in the top field");
    emb.gen_image_ = root;

    std::vector<elem> powers(base->m());
    elem cur = 1;
    for (std::uint32_t j = 0; j < base->m(); ++j) {
        powers[j] = cur;
        cur = T.mul(cur, root);
    }
    emb.embed_table_.resize(base->q());
    for (elem b = 0; b < base->q(); ++b) {
        elem acc = 0, x = b;
        for (std::uint32_t j = 0; j < base->m(); ++j) {
            std::uint32_t digit = x % base->p();
            x /= base->p();
            if (digit) acc = T.add(acc, T.mul(T.from_int(digit), powers[j]));
        }
        emb.embed_table_[b] = acc;
        emb.project_table_.emplace(acc, b);
    }
    return emb;
}

FieldPtr parse_field_descriptor(const std::string& text) {
    std::string spec = text;
    std::vector<std::uint32_t> modulus;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        std::string mods = spec.substr(colon + 1);
        spec = spec.substr(0, colon);
        std::size_t pos = 0;
        while (pos < mods.size()) {
            std::size_t next = mods.find(',', pos);
            std::string tok = mods.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            try {
                modulus.push_back(std::uint32_t(std::stoul(tok)));
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "bad modulus coefficient '" + tok + "'");
            }
            if (next == std::string::npos) break;
            pos = next + 1;
        }
    }
    std::uint32_t p = 0, m = 1;
    try {
        if (auto caret = spec.find('^'); caret != std::string::npos) {
            p = std::uint32_t(std::stoul(spec.substr(0, caret)));
            m = std::uint32_t(std::stoul(spec.substr(caret + 1)));
        } else {
            p = std::uint32_t(std::stoul(spec));
        }
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad field descriptor '" + text + "'");
    }
    return Field::make(p, m, std::move(modulus));
}

}  // namespace ffb
