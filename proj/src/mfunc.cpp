#include "itermax/mfunc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

namespace itermax {

const char* to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::in_q: return "in_q";
        case PrimeClass::off_q_one: return "one";
        case PrimeClass::off_q_parity: return "parity";
        case PrimeClass::off_q_zero: return "zero";
    }
    return "?";
}

// ---------------------------------------------------------------------
// GSpec
// ---------------------------------------------------------------------

GSpec GSpec::make_affine(u64 alpha) {
    if (alpha == 0) throw domain_error("GSpec: affine slope must be >= 1");
    GSpec g;
    g.kind_ = Kind::affine;
    g.alpha_ = alpha;
    return g;
}

GSpec GSpec::make_table(std::vector<u64> values, Extension ext, u64 param) {
    if (values.empty()) throw domain_error("GSpec: table needs at least g(1)");
    u64 prev = 1; // g(0)
    for (u64 v : values) {
        if (v < prev) throw domain_error("GSpec: table must be monotonically increasing");
        prev = v;
    }
    if (ext == Extension::affine && param == 0)
        throw domain_error("GSpec: affine extension slope must be >= 1");
    if (ext == Extension::geometric && param == 0)
        throw domain_error("GSpec: geometric extension ratio must be >= 1");
    GSpec g;
    g.kind_ = Kind::table;
    g.table_ = std::move(values);
    g.ext_ = ext;
    g.ext_param_ = param;
    return g;
}

u64 GSpec::operator()(u64 nu) const {
    if (nu == 0) return 1;
    if (kind_ == Kind::affine)
        return add_checked(mul_checked(alpha_, nu), 1);
    if (nu <= table_.size()) return table_[nu - 1];
    u64 last = table_.back();
    u64 extra = nu - table_.size();
    if (ext_ == Extension::affine)
        return add_checked(last, mul_checked(ext_param_, extra));
    u64 v = last;
    for (u64 i = 0; i < extra; ++i) v = mul_checked(v, ext_param_);
    return v;
}

std::string GSpec::describe() const {
    if (kind_ == Kind::affine) return "affine:" + std::to_string(alpha_);
    std::string s = "table:";
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(table_[i]);
    }
    s += ext_ == Extension::affine ? ";affine:" : ";geometric:";
    s += std::to_string(ext_param_);
    return s;
}

std::optional<u64> g_dagger(const GSpec& g, u64 y) {
    if (y == 0) return std::nullopt;
    if (g.is_affine()) {
        // g(x) = alpha*x + 1 = y  <=>  x = (y-1)/alpha, x >= 1
        u64 alpha = g.alpha();
        if (y <= 1 || (y - 1) % alpha != 0) return std::nullopt;
        return (y - 1) / alpha;
    }
    const auto& table = g.table();
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table[i] == y) return (u64)i + 1;
    u64 last = table.back();
    if (y <= last) return std::nullopt;
    if (g.extension() == GSpec::Extension::affine) {
        u64 slope = g.extension_param();
        if ((y - last) % slope != 0) return std::nullopt;
        return table.size() + (y - last) / slope;
    }
    u64 ratio = g.extension_param();
    if (ratio == 1) return std::nullopt; // constant tail never reaches y > last
    u64 v = last, steps = 0;
    while (v < y) {
        v = mul_checked(v, ratio);
        ++steps;
    }
    if (v != y) return std::nullopt;
    return table.size() + steps;
}

// ---------------------------------------------------------------------
// MultiplicativeRule
// ---------------------------------------------------------------------

struct MultiplicativeRule::Impl {
    enum class QKind { all, congruence, field, explicit_list };

    QKind q_kind = QKind::all;
    u64 modulus = 0;
    std::vector<u64> residues; // sorted
    i64 discriminant = 0;
    std::vector<u64> explicit_q; // ascending
    PrimeClass off_class = PrimeClass::off_q_one;
    GSpec g = GSpec::make_affine(1);
    double kappa = 1.0;
    std::string name;
    u64 q_search_cap = kDefaultQSearchCap;

    mutable std::mutex mutex;
    mutable std::vector<u64> q_cache;
    mutable u64 sieved_to = 1;

    PrimeClass classify(u64 p) const {
        switch (q_kind) {
            case QKind::all:
                return PrimeClass::in_q;
            case QKind::congruence:
                return std::binary_search(residues.begin(), residues.end(), p % modulus)
                           ? PrimeClass::in_q
                           : off_class;
            case QKind::field: {
                int k = kronecker(discriminant, p);
                if (k == 1) return PrimeClass::in_q;
                if (k == 0) return PrimeClass::off_q_one;     // ramified
                return PrimeClass::off_q_parity;              // inert
            }
            case QKind::explicit_list:
                return std::binary_search(explicit_q.begin(), explicit_q.end(), p)
                           ? PrimeClass::in_q
                           : off_class;
        }
        return PrimeClass::off_q_one;
    }

    // Grow the Q prime cache until it holds >= want entries or covers bound.
    void grow(u64 want, u64 upto) const {
        if (q_kind == QKind::explicit_list) return;
        std::lock_guard<std::mutex> lock(mutex);
        while (q_cache.size() < want || sieved_to < upto) {
            if (sieved_to >= q_search_cap) break;
            u64 next = std::max<u64>(sieved_to * 2, 1024);
            next = std::max(next, upto);
            next = std::min(next, q_search_cap);
            u64 lo = sieved_to + 1;
            for_primes_up_to(next, [&](u64 p) {
                if (p >= lo && classify(p) == PrimeClass::in_q) q_cache.push_back(p);
                return true;
            });
            sieved_to = next;
        }
    }
};

PrimeClass MultiplicativeRule::classify(u64 p) const { return impl_->classify(p); }
const GSpec& MultiplicativeRule::g() const { return impl_->g; }
double MultiplicativeRule::kappa_hint() const { return impl_->kappa; }
const std::string& MultiplicativeRule::name() const { return impl_->name; }
u64 MultiplicativeRule::q_search_cap() const { return impl_->q_search_cap; }
void MultiplicativeRule::set_q_search_cap(u64 cap) { impl_->q_search_cap = cap; }

u64 MultiplicativeRule::nth_q(u64 j) const {
    if (j == 0) throw domain_error("nth_q: j must be >= 1");
    if (impl_->q_kind == Impl::QKind::explicit_list) {
        if (j > impl_->explicit_q.size())
            throw capacity_error("nth_q: explicit Q list has only " +
                                 std::to_string(impl_->explicit_q.size()) + " primes");
        return impl_->explicit_q[j - 1];
    }
    impl_->grow(j, 0);
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (impl_->q_cache.size() < j)
        throw capacity_error("nth_q: only " + std::to_string(impl_->q_cache.size()) +
                             " Q primes below search cap " +
                             std::to_string(impl_->q_search_cap) +
                             "; raise the cap to resume");
    return impl_->q_cache[j - 1];
}

u64 MultiplicativeRule::count_q_upto(u64 x) const {
    if (impl_->q_kind == Impl::QKind::explicit_list) {
        const auto& q = impl_->explicit_q;
        return (u64)(std::upper_bound(q.begin(), q.end(), x) - q.begin());
    }
    if (x > impl_->q_search_cap)
        throw capacity_error("count_q_upto: x exceeds the Q search cap");
    impl_->grow(0, x);
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return (u64)(std::upper_bound(impl_->q_cache.begin(), impl_->q_cache.end(), x) -
                 impl_->q_cache.begin());
}

MultiplicativeRule rule_divisor_power(u64 alpha) {
    if (alpha == 0) throw domain_error("rule_divisor_power: alpha must be >= 1");
    auto impl = std::make_shared<MultiplicativeRule::Impl>();
    impl->q_kind = MultiplicativeRule::Impl::QKind::all;
    impl->g = GSpec::make_affine(alpha);
    impl->kappa = 1.0;
    impl->name = "divisor:" + std::to_string(alpha);
    return MultiplicativeRule(std::move(impl));
}

MultiplicativeRule rule_for_field(const QuadraticFieldSpec& field) {
    make_field(field.discriminant); // re-validate
    auto impl = std::make_shared<MultiplicativeRule::Impl>();
    impl->q_kind = MultiplicativeRule::Impl::QKind::field;
    impl->discriminant = field.discriminant;
    impl->g = GSpec::make_affine(1);
    impl->kappa = 2.0; // split primes have density 1/2
    impl->name = "field:" + std::to_string(field.discriminant);
    return MultiplicativeRule(std::move(impl));
}

MultiplicativeRule make_rule(const SyntheticRuleSpec& spec) {
    auto impl = std::make_shared<MultiplicativeRule::Impl>();
    switch (spec.q_kind) {
        case SyntheticRuleSpec::QKind::all:
            impl->q_kind = MultiplicativeRule::Impl::QKind::all;
            impl->kappa = 1.0;
            break;
        case SyntheticRuleSpec::QKind::congruence: {
            if (spec.modulus < 2) throw domain_error("rule spec: modulus must be >= 2");
            if (spec.residues.empty()) throw domain_error("rule spec: no residues");
            impl->q_kind = MultiplicativeRule::Impl::QKind::congruence;
            impl->modulus = spec.modulus;
            impl->residues = spec.residues;
            for (u64& r : impl->residues) r %= spec.modulus;
            std::sort(impl->residues.begin(), impl->residues.end());
            impl->residues.erase(std::unique(impl->residues.begin(), impl->residues.end()),
                                 impl->residues.end());
            // Dirichlet density of the classes among primes
            u64 coprime = 0;
            for (u64 r : impl->residues)
                if (std::gcd(r, spec.modulus) == 1) ++coprime;
            u64 phi = 0;
            for (u64 r = 1; r < spec.modulus; ++r)
                if (std::gcd(r, spec.modulus) == 1) ++phi;
            impl->kappa = coprime ? (double)phi / (double)coprime : 1.0;
            break;
        }
        case SyntheticRuleSpec::QKind::explicit_list: {
            if (spec.q_primes.empty()) throw domain_error("rule spec: empty Q list");
            impl->q_kind = MultiplicativeRule::Impl::QKind::explicit_list;
            impl->explicit_q = spec.q_primes;
            std::sort(impl->explicit_q.begin(), impl->explicit_q.end());
            for (u64 p : impl->explicit_q)
                if (!is_prime(p))
                    throw domain_error("rule spec: " + std::to_string(p) + " is not prime");
            impl->kappa = 1.0;
            break;
        }
    }
    impl->off_class = spec.off_class;
    impl->g = spec.g;
    if (spec.kappa > 0.0) impl->kappa = spec.kappa;
    impl->name = spec.label.empty() ? "synthetic" : spec.label;
    return MultiplicativeRule(std::move(impl));
}

// ---------------------------------------------------------------------
// Rule spec text format
// ---------------------------------------------------------------------

static std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    bool comment = false;
    for (char ch : text) {
        if (ch == '\n') comment = false;
        if (comment) continue;
        if (ch == '#') { comment = true; continue; }
        if (std::isspace((unsigned char)ch) || ch == ',' || ch == ':') {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
        } else if (ch == ';') {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
            tokens.push_back(";");
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

static u64 parse_u64(const std::string& s) {
    u64 v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw domain_error("rule spec: bad integer '" + s + "'");
    return v;
}

SyntheticRuleSpec parse_rule_spec(std::string_view text) {
    SyntheticRuleSpec spec;
    auto tokens = tokenize(text);
    std::size_t i = 0;
    auto next = [&]() -> const std::string& {
        if (i >= tokens.size()) throw domain_error("rule spec: unexpected end");
        return tokens[i++];
    };
    bool have_q = false, have_g = false;
    while (i < tokens.size()) {
        const std::string key = next();
        if (key == "q") {
            have_q = true;
            const std::string kind = next();
            if (kind == "all") {
                spec.q_kind = SyntheticRuleSpec::QKind::all;
            } else if (kind == "mod") {
                spec.q_kind = SyntheticRuleSpec::QKind::congruence;
                spec.modulus = parse_u64(next());
                while (i < tokens.size() && std::isdigit((unsigned char)tokens[i][0]))
                    spec.residues.push_back(parse_u64(next()));
                if (spec.residues.empty())
                    throw domain_error("rule spec: 'q mod' needs residues");
            } else if (kind == "list") {
                spec.q_kind = SyntheticRuleSpec::QKind::explicit_list;
                while (i < tokens.size() && std::isdigit((unsigned char)tokens[i][0]))
                    spec.q_primes.push_back(parse_u64(next()));
                if (spec.q_primes.empty())
                    throw domain_error("rule spec: 'q list' needs primes");
            } else {
                throw domain_error("rule spec: unknown q kind '" + kind + "'");
            }
        } else if (key == "off") {
            const std::string v = next();
            if (v == "one") spec.off_class = PrimeClass::off_q_one;
            else if (v == "parity") spec.off_class = PrimeClass::off_q_parity;
            else if (v == "zero") spec.off_class = PrimeClass::off_q_zero;
            else throw domain_error("rule spec: unknown off class '" + v + "'");
        } else if (key == "g") {
            have_g = true;
            const std::string kind = next();
            if (kind == "affine") {
                spec.g = GSpec::make_affine(parse_u64(next()));
            } else if (kind == "table") {
                std::vector<u64> values;
                while (i < tokens.size() && tokens[i] != ";")
                    values.push_back(parse_u64(next()));
                if (i >= tokens.size() || next() != ";")
                    throw domain_error("rule spec: 'g table' needs '; <extension>'");
                const std::string ext = next();
                u64 param = parse_u64(next());
                if (ext == "affine")
                    spec.g = GSpec::make_table(std::move(values), GSpec::Extension::affine, param);
                else if (ext == "geometric")
                    spec.g = GSpec::make_table(std::move(values), GSpec::Extension::geometric, param);
                else
                    throw domain_error("rule spec: unknown extension '" + ext + "'");
            } else {
                throw domain_error("rule spec: unknown g kind '" + kind + "'");
            }
        } else if (key == "kappa") {
            const std::string& v = next();
            try {
                spec.kappa = std::stod(v);
            } catch (const std::exception&) {
                throw domain_error("rule spec: bad kappa '" + v + "'");
            }
            if (spec.kappa <= 0) throw domain_error("rule spec: kappa must be positive");
        } else if (key == "label") {
            spec.label = next();
        } else {
            throw domain_error("rule spec: unknown key '" + key + "'");
        }
    }
    if (!have_q) throw domain_error("rule spec: missing 'q' line");
    if (!have_g) throw domain_error("rule spec: missing 'g' line");
    return spec;
}

MultiplicativeRule rule_from_selector(std::string_view selector) {
    auto colon = selector.find(':');
    if (colon == std::string_view::npos)
        throw domain_error("rule selector must be divisor:<a>, field:<d> or synthetic:<file>");
    std::string kind(selector.substr(0, colon));
    std::string arg(selector.substr(colon + 1));
    if (kind == "divisor") {
        u64 alpha = parse_u64(arg);
        return rule_divisor_power(alpha);
    }
    if (kind == "field") {
        i64 d = 0;
        try {
            d = std::stoll(arg);
        } catch (const std::exception&) {
            throw domain_error("rule selector: bad discriminant '" + arg + "'");
        }
        return rule_for_field(make_field(d));
    }
    if (kind == "synthetic") {
        std::ifstream in(arg);
        if (!in) throw domain_error("cannot open rule spec file '" + arg + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        SyntheticRuleSpec spec = parse_rule_spec(buf.str());
        if (spec.label.empty()) spec.label = "synthetic:" + arg;
        return make_rule(spec);
    }
    throw domain_error("unknown rule kind '" + kind + "'");
}

// ---------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------

u64 prime_power_value(const MultiplicativeRule& rule, u64 p, u64 nu) {
    if (nu == 0) return 1;
    switch (rule.classify(p)) {
        case PrimeClass::in_q: return rule.g()(nu);
        case PrimeClass::off_q_one: return 1;
        case PrimeClass::off_q_parity: return (nu & 1) ? 0 : 1;
        case PrimeClass::off_q_zero: return 0;
    }
    return 1;
}

u64 eval(const MultiplicativeRule& rule, const Factorization& f) {
    u64 v = 1;
    for (const auto& e : f.entries) {
        u64 pv = prime_power_value(rule, e.prime, e.exponent);
        if (pv == 0) return 0;
        v = mul_checked(v, pv);
    }
    return v;
}

IteratedValue eval_iterated(const MultiplicativeRule& rule, u64 n) {
    if (n == 0) throw domain_error("eval_iterated: n must be >= 1");
    u64 inner = eval(rule, factorize(n));
    u64 outer = inner == 0 ? 1 : eval(rule, factorize(inner)); // f(0) = 1
    return {inner, outer};
}

IteratedValue eval_iterated(const MultiplicativeRule& rule, u64 n, const SpfTable& table) {
    if (n == 0) throw domain_error("eval_iterated: n must be >= 1");
    u64 inner = eval(rule, factorize(n, table));
    u64 outer = inner == 0 ? 1 : eval(rule, factorize(inner, table));
    return {inner, outer};
}

Factorization q_part(const MultiplicativeRule& rule, const Factorization& f) {
    Factorization q;
    for (const auto& e : f.entries)
        if (rule.classify(e.prime) == PrimeClass::in_q) q.entries.push_back(e);
    return q;
}

u64 omega_q(const MultiplicativeRule& rule, const Factorization& f) {
    u64 s = 0;
    for (const auto& e : f.entries)
        if (rule.classify(e.prime) == PrimeClass::in_q) ++s;
    return s;
}

} // namespace itermax
