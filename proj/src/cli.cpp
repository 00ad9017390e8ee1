#include "itermax/cli.hpp"

#include <cstdlib>
#include <stdexcept>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "itermax/audit.hpp"
#include "itermax/bigint.hpp"
#include "itermax/extremal.hpp"
#include "itermax/forms.hpp"
#include "itermax/records.hpp"

namespace itermax {

namespace {

struct usage_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Emitter {
    std::ostream& out;
    bool csv = false;
    std::string last_header;

    void emit(const Record& r) {
        if (!csv) {
            out << to_json_line(r) << '\n';
            return;
        }
        std::string header = to_csv_header(r);
        if (header != last_header) {
            out << header << '\n';
            last_header = header;
        }
        out << to_csv_row(r) << '\n';
    }
};

unsigned default_threads() {
    if (const char* env = std::getenv("ITERMAX_THREADS")) {
        long v = std::atol(env);
        if (v >= 1 && v <= 1024) return (unsigned)v;
    }
    return 1;
}

std::string decimal_value(const Factorization& f) {
    BigUint b = BigUint::from_u64(1);
    for (const auto& e : f.entries) b.mul_pow_u64(e.prime, e.exponent);
    return b.to_decimal();
}

FormSpec parse_form_arg(const std::string& text) {
    // "a,b,c,normalizer[,nonneg]"
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') { parts.push_back(cur); cur.clear(); }
        else cur += ch;
    }
    parts.push_back(cur);
    if (parts.size() != 4 && parts.size() != 5)
        throw domain_error("--form expects a,b,c,normalizer[,nonneg]");
    LatticeRestriction restriction = LatticeRestriction::all;
    if (parts.size() == 5) {
        if (parts[4] == "nonneg") restriction = LatticeRestriction::non_negative;
        else if (parts[4] != "all") throw domain_error("--form restriction must be all|nonneg");
    }
    try {
        return make_form(std::stoll(parts[0]), std::stoll(parts[1]), std::stoll(parts[2]),
                         (u64)std::stoull(parts[3]), restriction);
    } catch (const std::invalid_argument&) {
        throw usage_failure("--form coefficients must be integers");
    } catch (const std::out_of_range&) {
        throw usage_failure("--form coefficient out of range");
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"iterated multiplicative function maxima: evaluation, scans, "
                 "witness construction and assumption audits"};
    app.require_subcommand(1);

    std::string rule_selector;
    std::string format = "json-lines";
    unsigned threads = default_threads();
    u64 scan_cap = kDefaultScanCap;
    u64 partition_budget = kDefaultPartitionBudget;
    u64 q_cap = kDefaultQSearchCap;
    double tol = 1e-6;
    double c_e = 1.0;

    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json-lines", "csv"}));
    app.add_option("--threads,-j", threads, "worker count (env ITERMAX_THREADS)");
    app.add_option("--scan-cap", scan_cap, "scan_max capacity cap");
    app.add_option("--partition-budget", partition_budget, "min-preimage partition budget");
    app.add_option("--q-cap", q_cap, "search bound for Q primes");
    app.add_option("--tol", tol, "tolerance for the series constant");
    app.add_option("--ce", c_e, "epsilon coefficient c_e for the witness");
    auto* rule_opt = app.add_option("--rule", rule_selector,
                                    "rule selector: divisor:<a> | field:<d> | synthetic:<file>");
    rule_opt->multi_option_policy(CLI::MultiOptionPolicy::Throw); // exactly one selector

    u64 arg_n = 0, arg_x = 0, arg_limit = 0, arg_j = 0;
    i64 arg_delta = 0;
    std::string form_text;
    i64 form_delta = 0;
    bool have_form_delta = false;
    u64 audit_jlo = 1000, audit_jhi = 10000, audit_nulo = 1, audit_nuhi = 10000,
        audit_ab = 10000;

    auto* cmd_eval = app.add_subcommand("eval", "evaluate f(n)")->fallthrough();
    cmd_eval->add_option("n", arg_n)->required();
    auto* cmd_iter = app.add_subcommand("iter", "evaluate f(n) and f(f(n))")->fallthrough();
    cmd_iter->add_option("n", arg_n)->required();
    auto* cmd_scan = app.add_subcommand("scan-max", "exhaustive maximum of f(f(n)) for n <= x")->fallthrough();
    cmd_scan->add_option("x", arg_x)->required();
    auto* cmd_minpre = app.add_subcommand("min-preimage", "least m with f(m) = N")->fallthrough();
    cmd_minpre->add_option("N", arg_n)->required();
    auto* cmd_witness = app.add_subcommand("witness", "extremal witness construction at scale x")->fallthrough();
    cmd_witness->add_option("x", arg_x)->required();
    auto* cmd_constant = app.add_subcommand("constant", "series constant for the rule's g")->fallthrough();
    auto* cmd_split = app.add_subcommand("split-count", "count split primes up to x")->fallthrough();
    cmd_split->add_option("delta", arg_delta)->required();
    cmd_split->add_option("x", arg_x)->required();
    auto* cmd_nth = app.add_subcommand("nth-split", "j-th split prime")->fallthrough();
    cmd_nth->add_option("delta", arg_delta)->required();
    cmd_nth->add_option("j", arg_j)->required();
    auto* cmd_forms = app.add_subcommand("forms-check", "lattice count vs rule over a range")->fallthrough();
    cmd_forms->add_option("limit", arg_limit)->required();
    cmd_forms->add_option("--form", form_text, "a,b,c,normalizer[,nonneg]");
    cmd_forms->add_option("--delta", form_delta, "use the principal form of this discriminant")
        ->each([&](const std::string&) { have_form_delta = true; });
    auto* cmd_audit = app.add_subcommand("audit", "audit the rule against the assumptions")->fallthrough();
    cmd_audit->add_option("--j-lo", audit_jlo);
    cmd_audit->add_option("--j-hi", audit_jhi);
    cmd_audit->add_option("--nu-lo", audit_nulo);
    cmd_audit->add_option("--nu-hi", audit_nuhi);
    cmd_audit->add_option("--ab-budget", audit_ab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::stringstream help;
            help << app.help();
            out << help.str();
            return 0;
        }
        Record r;
        r.add_str("error", "usage");
        r.add_str("message", e.what());
        Emitter{err, format == "csv", ""}.emit(r);
        return 1;
    }

    Emitter emit{out, format == "csv", ""};

    auto need_rule = [&]() -> MultiplicativeRule {
        if (rule_opt->count() == 0)
            throw usage_failure("this subcommand requires --rule");
        MultiplicativeRule rule = rule_from_selector(rule_selector);
        rule.set_q_search_cap(q_cap);
        return rule;
    };

    try {
        if (cmd_eval->parsed()) {
            MultiplicativeRule rule = need_rule();
            if (arg_n == 0) throw domain_error("n must be >= 1");
            u64 v = eval(rule, factorize(arg_n));
            Record r;
            r.add_str("rule", rule.name());
            r.add_uint("n", arg_n);
            r.add_uint("value", v);
            emit.emit(r);
        } else if (cmd_iter->parsed()) {
            MultiplicativeRule rule = need_rule();
            IteratedValue iv = eval_iterated(rule, arg_n);
            Record r;
            r.add_str("rule", rule.name());
            r.add_uint("n", arg_n);
            r.add_uint("f", iv.inner);
            r.add_uint("ffn", iv.outer);
            emit.emit(r);
        } else if (cmd_scan->parsed()) {
            MultiplicativeRule rule = need_rule();
            MaxRecord m = scan_max(rule, arg_x, threads, scan_cap);
            Record r;
            r.add_str("rule", rule.name());
            r.add_uint("x", m.x);
            r.add_uint("max_value", m.max_value);
            r.add_real("log_max", m.log_max);
            r.add_uint_list("argmax", m.argmax);
            emit.emit(r);
        } else if (cmd_minpre->parsed()) {
            MultiplicativeRule rule = need_rule();
            MinPreimage p = min_preimage(rule, arg_n, partition_budget);
            Record r;
            r.add_str("rule", rule.name());
            r.add_uint("N", p.target);
            r.add_str("m", decimal_value(p.m));
            r.add_str("m_factored", p.m.to_string());
            r.add_uint_list("exponents", p.exponents);
            r.add_real("log_m", p.log_m);
            r.add_uint("partitions", p.partitions_seen);
            r.add_uint("ties", p.ties);
            emit.emit(r);
        } else if (cmd_witness->parsed()) {
            MultiplicativeRule rule = need_rule();
            ExtremalWitness w = build_witness(rule, arg_x, c_e);
            Record r;
            r.add_str("rule", rule.name());
            r.add_uint("x", arg_x);
            r.add_real("c_e", c_e);
            r.add_uint("t", w.t);
            r.add_uint_list("nu", w.nu);
            r.add_real("epsilon", w.epsilon);
            r.add_real("log_n", w.log_n);
            r.add_str("fn_factored", w.fn.to_string());
            r.add_real("log_ffn", w.log_ffn);
            r.add_real("ratio", w.ratio);
            if (auto n = materialize_witness(rule, w))
                r.add_uint("n", *n);
            emit.emit(r);
        } else if (cmd_constant->parsed()) {
            MultiplicativeRule rule = need_rule();
            SeriesConstant c = cs_constant(rule.g(), tol);
            Record r;
            r.add_str("rule", rule.name());
            r.add_str("g", rule.g().describe());
            r.add_real("value", c.value);
            r.add_real("tail_bound", c.half_width);
            r.add_uint("terms_used", c.terms_used);
            emit.emit(r);
        } else if (cmd_split->parsed()) {
            QuadraticFieldSpec field = make_field(arg_delta);
            SplitPrimeCount c = split_prime_count(field, arg_x);
            Record r;
            r.add_int("delta", arg_delta);
            r.add_uint("x", arg_x);
            r.add_uint("count", c.count);
            r.add_real("reference", c.reference);
            r.add_real("ratio", (double)c.count / c.reference);
            emit.emit(r);
        } else if (cmd_nth->parsed()) {
            QuadraticFieldSpec field = make_field(arg_delta);
            u64 q = nth_split_prime(field, arg_j, q_cap);
            Record r;
            r.add_int("delta", arg_delta);
            r.add_uint("j", arg_j);
            r.add_uint("q", q);
            emit.emit(r);
        } else if (cmd_forms->parsed()) {
            FormSpec form{};
            MultiplicativeRule rule = [&]() {
                if (have_form_delta) {
                    form = principal_form(form_delta);
                    if (rule_opt->count() > 0) return rule_from_selector(rule_selector);
                    return rule_for_field(make_field(form_delta));
                }
                if (form_text.empty())
                    throw domain_error("forms-check needs --form or --delta");
                form = parse_form_arg(form_text);
                return need_rule();
            }();
            CrosscheckReport report = crosscheck_range(form, rule, arg_limit, threads);
            Record r;
            r.add_str("rule", rule.name());
            r.add_int("form_a", form.a);
            r.add_int("form_b", form.b);
            r.add_int("form_c", form.c);
            r.add_uint("normalizer", form.normalizer);
            r.add_uint("limit", report.limit);
            r.add_uint("mismatches", report.mismatches.size());
            emit.emit(r);
            std::size_t shown = 0;
            for (const auto& mm : report.mismatches) {
                if (++shown > 32) break; // full count is in the summary record
                Record m;
                m.add_uint("n", mm.n);
                m.add_uint("form_count", mm.form_count);
                m.add_uint("rule_value", mm.rule_value);
                emit.emit(m);
            }
        } else if (cmd_audit->parsed()) {
            MultiplicativeRule rule = need_rule();
            AuditReport report = audit(rule, audit_jlo, audit_jhi, audit_nulo, audit_nuhi,
                                       audit_ab);
            for (const auto& rec : report.records) {
                Record r;
                r.add_str("rule", rule.name());
                r.add_str("id", rec.id);
                r.add_str("label", rec.label);
                r.add_str("status", to_string(rec.status));
                r.add_str("range", rec.range);
                for (const auto& [k, v] : rec.fitted) r.add_real(k, v);
                if (!rec.counterexample.empty())
                    r.add_str("counterexample", rec.counterexample);
                emit.emit(r);
            }
        }
    } catch (const usage_failure& e) {
        Record r;
        r.add_str("error", "usage");
        r.add_str("message", e.what());
        Emitter{err, format == "csv", ""}.emit(r);
        return 1;
    } catch (const overflow_error& e) {
        Record r;
        r.add_str("error", "capacity");
        r.add_str("message", e.what());
        Emitter{err, format == "csv", ""}.emit(r);
        return 3;
    } catch (const capacity_error& e) {
        Record r;
        r.add_str("error", "capacity");
        r.add_str("message", e.what());
        Emitter{err, format == "csv", ""}.emit(r);
        return 3;
    } catch (const domain_error& e) {
        Record r;
        r.add_str("error", "domain");
        r.add_str("message", e.what());
        Emitter{err, format == "csv", ""}.emit(r);
        return 2;
    } catch (const std::exception& e) {
        Record r;
        r.add_str("error", "internal");
        r.add_str("message", e.what());
        Emitter{err, format == "csv", ""}.emit(r);
        return 1;
    }
    return 0;
}

} // namespace itermax
