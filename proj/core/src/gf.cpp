#include "polargrass/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace polargrass {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

using Poly = std::vector<int>;  // coefficients over GF(p), c[i] * x^i

int pdeg(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

Poly pmul(const Poly& a, const Poly& b, int p) {
    Poly r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return r;
}

// remainder of a modulo monic f
Poly pmod(Poly a, const Poly& f, int p) {
    int df = pdeg(f);
    for (int i = pdeg(a); i >= df; --i) {
        int c = a[i];
        if (c == 0) continue;
        for (int j = 0; j <= df; ++j)
            a[i - df + j] = ((a[i - df + j] - c * f[j]) % p + p * p) % p;
    }
    a.resize(df);
    return a;
}

Poly from_code(long code, int p, int len) {
    Poly c(len, 0);
    for (int i = 0; i < len; ++i) {
        c[i] = static_cast<int>(code % p);
        code /= p;
    }
    return c;
}

long to_code(const Poly& c, int p) {
    long v = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * p + c[i];
    return v;
}

std::string poly_str(const Poly& f, int p) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= pdeg(f); ++i) {
        if (f[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || f[i] != 1) os << f[i];
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
    }
    (void)p;
    return first ? "0" : os.str();
}

// Returns a nontrivial monic factor of degree <= deg(f)/2, or empty if irreducible.
Poly find_factor(const Poly& f, int p) {
    int d = pdeg(f);
    for (int dd = 1; dd <= d / 2; ++dd) {
        long count = 1;
        for (int i = 0; i < dd; ++i) count *= p;
        for (long code = 0; code < count; ++code) {
            Poly g = from_code(code, p, dd + 1);
            g[dd] = 1;  // monic of degree dd
            if (pdeg(pmod(f, g, p)) < 0) return g;
        }
    }
    return {};
}

// Lexicographically least (by code of the non-leading part) irreducible monic
// polynomial of degree e over GF(p).
Poly default_modulus(int p, int e) {
    if (e == 1) return {0, 1};  // x; arithmetic is then plain mod p
    // pinned moduli from the t-gen proofs
    if (p == 2 && e == 2) return {1, 1, 1};    // x^2+x+1
    if (p == 2 && e == 3) return {1, 1, 0, 1}; // x^3+x+1
    if (p == 3 && e == 2) return {2, 2, 1};    // x^2-x-1
    long count = 1;
    for (int i = 0; i < e; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
        Poly g = from_code(code, p, e + 1);
        g[e] = 1;
        if (find_factor(g, p).empty()) return g;
    }
    throw Error("no irreducible polynomial found (unreachable)");
}

}  // namespace

Field::Field(int p, int e, std::vector<int> modulus)
    : p_(p), e_(e), modulus_(std::move(modulus)) {
    if (!is_prime(p)) throw Error("field characteristic " + std::to_string(p) + " is not prime");
    if (e < 1) throw Error("field degree must be >= 1");
    long q = 1;
    for (int i = 0; i < e; ++i) {
        q *= p;
        if (q > 512) throw Error("field order exceeds the 512-element table limit");
    }
    q_ = static_cast<int>(q);

    for (int& c : modulus_) c = ((c % p) + p) % p;
    if (static_cast<int>(modulus_.size()) != e + 1 || modulus_[e] != 1)
        throw Error("modulus must be monic of degree " + std::to_string(e));
    if (e > 1) {
        Poly factor = find_factor(modulus_, p);
        if (!factor.empty())
            throw Error("modulus " + poly_str(modulus_, p) + " is reducible: divisible by " +
                        poly_str(factor, p));
    }

    hash_ = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) { hash_ = (hash_ ^ v) * 1099511628211ull; };
    mix(static_cast<std::uint64_t>(p_));
    mix(static_cast<std::uint64_t>(e_));
    for (int c : modulus_) mix(static_cast<std::uint64_t>(c));

    add_.resize(static_cast<size_t>(q_) * q_);
    mul_.resize(static_cast<size_t>(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (int a = 0; a < q_; ++a) {
        Poly pa = from_code(a, p_, e_);
        for (int b = 0; b < q_; ++b) {
            Poly pb = from_code(b, p_, e_);
            Poly s(e_, 0);
            for (int i = 0; i < e_; ++i) s[i] = (pa[i] + pb[i]) % p_;
            add_[static_cast<size_t>(a) * q_ + b] = static_cast<code_t>(to_code(s, p_));
            Poly m = pmod(pmul(pa, pb, p_), modulus_, p_);
            m.resize(e_, 0);
            mul_[static_cast<size_t>(a) * q_ + b] = static_cast<code_t>(to_code(m, p_));
        }
    }
    for (int a = 0; a < q_; ++a) {
        Poly pa = from_code(a, p_, e_);
        for (int i = 0; i < e_; ++i) pa[i] = (p_ - pa[i]) % p_;
        neg_[a] = static_cast<code_t>(to_code(pa, p_));
    }
    for (int a = 1; a < q_; ++a)
        for (int b = 1; b < q_; ++b)
            if (mul_[static_cast<size_t>(a) * q_ + b] == 1) { inv_[a] = static_cast<code_t>(b); break; }

    if (e_ % 2 == 0) {
        frob_.resize(q_);
        long q0 = 1;
        for (int i = 0; i < e_ / 2; ++i) q0 *= p_;
        for (int a = 0; a < q_; ++a) frob_[a] = pow(static_cast<code_t>(a), q0);
    }

    log_.assign(q_, -1);
    code_t g = gen();
    if (q_ > 1 && g != 0) {
        code_t x = 1;
        for (int i = 0; i < q_ - 1; ++i) {
            if (log_[x] == -1) log_[x] = i;
            x = mul(x, g);
        }
        gen_is_primitive_ = (mult_order(g) == q_ - 1);
    }
}

code_t Field::inv(code_t a) const {
    if (a == 0) throw Error("inverse of 0 in " + descriptor());
    return inv_[a];
}

code_t Field::pow(code_t a, long n) const {
    if (a == 0) {
        if (n < 0) throw Error("inverse of 0 in " + descriptor());
        return n == 0 ? 1 : 0;
    }
    long m = n % (q_ - 1);
    if (m < 0) m += q_ - 1;
    code_t r = 1, base = a;
    while (m > 0) {
        if (m & 1) r = mul(r, base);
        base = mul(base, base);
        m >>= 1;
    }
    return r;
}

code_t Field::conj(code_t a) const {
    if (!has_conjugation())
        throw Error(descriptor() + " has odd degree: no Hermitian conjugation");
    return frob_[a];
}

std::vector<code_t> Field::subfield_elements(int sub_degree) const {
    if (sub_degree < 1 || e_ % sub_degree != 0)
        throw Error("degree " + std::to_string(sub_degree) + " does not divide " + std::to_string(e_));
    long ps = 1;
    for (int i = 0; i < sub_degree; ++i) ps *= p_;
    std::vector<code_t> out;
    for (int a = 0; a < q_; ++a)
        if (pow(static_cast<code_t>(a), ps) == a) out.push_back(static_cast<code_t>(a));
    return out;
}

bool Field::in_subfield(code_t a, int sub_degree) const {
    if (sub_degree < 1 || e_ % sub_degree != 0)
        throw Error("degree " + std::to_string(sub_degree) + " does not divide " + std::to_string(e_));
    long ps = 1;
    for (int i = 0; i < sub_degree; ++i) ps *= p_;
    return pow(a, ps) == a;
}

int Field::mult_order(code_t a) const {
    if (a == 0) throw Error("0 has no multiplicative order");
    code_t x = a;
    int n = 1;
    while (x != 1) {
        x = mul(x, a);
        ++n;
    }
    return n;
}

std::string Field::show(code_t a) const {
    if (e_ == 1 || a == 0 || a == 1) return std::to_string(a);
    if (gen_is_primitive_) {
        int k = log_[a];
        if (k == 1) return "e";
        return "e^" + std::to_string(k);
    }
    return "#" + std::to_string(a);
}

code_t Field::parse_element(std::string_view token) const {
    std::string s(token);
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    bool negate = false;
    size_t i = 0;
    if (i < s.size() && s[i] == '-') { negate = true; ++i; }
    if (i >= s.size()) throw Error("empty field element token");
    code_t v;
    if (s[i] == 'e') {
        ++i;
        long exp = 1;
        if (i < s.size()) {
            if (s[i] == '^') ++i;
            bool eneg = false;
            if (i < s.size() && s[i] == '-') { eneg = true; ++i; }
            if (i >= s.size()) throw Error("bad exponent in '" + std::string(token) + "'");
            exp = 0;
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9') throw Error("bad element token '" + std::string(token) + "'");
                exp = exp * 10 + (s[i] - '0');
            }
            if (eneg) exp = -exp;
        }
        v = pow(gen(), exp);
    } else {
        long n = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw Error("bad element token '" + std::string(token) + "'");
            n = n * 10 + (s[i] - '0');
        }
        n %= p_;
        v = 0;
        for (long k = 0; k < n; ++k) v = add(v, 1);
    }
    return negate ? neg_[v] : v;
}

std::string Field::descriptor() const {
    Poly def = default_modulus(p_, e_);
    if (modulus_ == def || e_ == 1) return "F" + std::to_string(q_);
    std::ostringstream os;
    os << "GF(" << p_ << "," << e_ << ",[";
    for (int i = 0; i <= e_; ++i) os << (i ? "," : "") << modulus_[i];
    os << "])";
    return os.str();
}

const Field& Field::get(int p, int e, std::vector<int> modulus) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, std::vector<int>>, const Field*> registry;
    if (modulus.empty()) modulus = default_modulus(p, e);
    for (int& c : modulus) {
        if (p >= 2) c = ((c % p) + p) % p;
    }
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, e, modulus);
    auto it = registry.find(key);
    if (it != registry.end()) return *it->second;
    const Field* f = new Field(p, e, modulus);
    registry.emplace(std::move(key), f);
    return *f;
}

const Field& Field::predefined(int q) {
    for (int p = 2; p <= q; ++p) {
        if (!is_prime(p)) continue;
        long v = p;
        int e = 1;
        while (v < q) { v *= p; ++e; }
        if (v == q) return get(p, e);
    }
    throw Error("F" + std::to_string(q) + " is not a prime power");
}

const Field& Field::from_descriptor(std::string_view desc) {
    std::string s(desc);
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.size() >= 2 && s[0] == 'F') {
        int q = 0;
        for (size_t i = 1; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw Error("bad field descriptor '" + std::string(desc) + "'");
            q = q * 10 + (s[i] - '0');
        }
        return predefined(q);
    }
    if (s.rfind("GF(", 0) == 0 && s.back() == ')') {
        std::string body = s.substr(3, s.size() - 4);
        auto c1 = body.find(',');
        auto c2 = body.find(',', c1 + 1);
        auto lb = body.find('[');
        auto rb = body.find(']');
        if (c1 == std::string::npos || c2 == std::string::npos || lb == std::string::npos ||
            rb == std::string::npos || rb < lb)
            throw Error("bad field descriptor '" + std::string(desc) + "'");
        int p = std::stoi(body.substr(0, c1));
        int e = std::stoi(body.substr(c1 + 1, c2 - c1 - 1));
        std::vector<int> mod;
        std::string coeffs = body.substr(lb + 1, rb - lb - 1);
        std::istringstream is(coeffs);
        std::string tok;
        while (std::getline(is, tok, ',')) mod.push_back(std::stoi(tok));
        return get(p, e, std::move(mod));
    }
    throw Error("bad field descriptor '" + std::string(desc) + "'");
}

}  // namespace polargrass
