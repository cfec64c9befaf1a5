// Command-line front end. `run` is the whole program minus process exit so it
// can be driven from tests with string streams.
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellnum/ellnum.hpp"
#include "reference_values.hpp"

namespace ellnum::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBadReduction = 2;
inline constexpr int kExitUsage = 64;

struct RunConfig {
    std::string curve = reference::kCurve37a;
    std::string cache = "./cache";
    unsigned workers = 1;
    std::string format = "json";
    u64 seed = 1;
};

/// What a command produced: a JSON body plus an optional tabular view used by
/// the csv and table-text formats.
struct Report {
    std::string curve;
    u64 limit = 0;
    Json body = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string join(const std::vector<u64>& v, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline std::string fmt_real(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

class Context {
public:
    explicit Context(RunConfig cfg) : cfg_(std::move(cfg)), model_(parse_curve(cfg_.curve)) {}

    const RunConfig& config() const noexcept { return cfg_; }
    const CurveModel& model() const noexcept { return model_; }

    CountOptions count() const {
        CountOptions o;
        o.seed = cfg_.seed;
        return o;
    }

    BuildOptions build() const {
        BuildOptions b;
        b.workers = cfg_.workers;
        b.count = count();
        return b;
    }

    std::filesystem::path cache_dir() const {
        if (cfg_.cache.empty() || cfg_.cache == "none") return {};
        return cfg_.cache;
    }

    std::shared_ptr<const NpTable> table(const CurveModel& m, u64 limit) const {
        return std::make_shared<const NpTable>(cached_table(m, limit, build(), cache_dir()));
    }
    std::shared_ptr<const NpTable> table(u64 limit) const { return table(model_, limit); }

    Report report(u64 limit) const {
        Report r;
        r.curve = model_.spec();
        r.limit = limit;
        return r;
    }

private:
    RunConfig cfg_;
    CurveModel model_;
};

inline Json progression_json(const ProgressionRecord& r) {
    return Json{{"n", r.n}, {"primes", r.primes}, {"multiplicity", r.multiplicity()}};
}

}  // namespace detail

inline Json stamp(const Report& r, const RunConfig& cfg) {
    return Json{{"tool", "ellnum"}, {"version", ELLNUM_VERSION}, {"curve", r.curve}, {"limit", r.limit}, {"seed", cfg.seed}};
}

inline void render(const Report& r, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "json") {
        Json doc{{"stamp", stamp(r, cfg)}};
        for (const auto& [k, v] : r.body.items()) doc[k] = v;
        out << doc.dump(2) << "\n";
        return;
    }
    out << "# ellnum " << ELLNUM_VERSION << " curve=" << r.curve << " limit=" << r.limit << " seed=" << cfg.seed << "\n";
    if (cfg.format == "csv") {
        if (r.columns.empty()) {
            out << "key,value\n";
            for (const auto& [k, v] : r.body.items()) out << k << "," << detail::csv_field(detail::scalar_text(v)) << "\n";
            return;
        }
        for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
        out << "\n";
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_field(row[i]);
            out << "\n";
        }
        return;
    }
    for (const auto& [k, v] : r.body.items()) {
        if (!r.columns.empty() && v.is_array()) continue;
        out << k << ": " << detail::scalar_text(v) << "\n";
    }
    if (r.columns.empty()) return;
    std::vector<std::size_t> width(r.columns.size());
    for (std::size_t i = 0; i < r.columns.size(); ++i) width[i] = r.columns[i].size();
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s += "  ";
            s += cells[i];
            if (i + 1 < cells.size()) s.append(width[i] - cells[i].size(), ' ');
        }
        out << s << "\n";
    };
    line(r.columns);
    for (const auto& row : r.rows) line(row);
}

// ---------------------------------------------------------------------------
// Commands

inline Report cmd_np(const detail::Context& ctx, u64 p) {
    Report r = ctx.report(p);
    r.body["p"] = p;
    r.body["np"] = count_points(ctx.model(), p, ctx.count());
    return r;
}

inline Report cmd_table(const detail::Context& ctx, u64 limit, const std::string& out_path) {
    const auto t = ctx.table(limit);
    if (!out_path.empty()) save_table(*t, out_path);
    Report r = ctx.report(limit);
    r.body["good_primes"] = t->entries().size();
    r.body["bad_primes"] = t->bad_primes();
    r.body["max_np"] = t->entries().empty() ? 0 : t->max_np();
    Json entries = Json::array();
    r.columns = {"p", "np"};
    for (const auto& e : t->entries()) {
        entries.push_back({e.p, e.np});
        r.rows.push_back({std::to_string(e.p), std::to_string(e.np)});
    }
    r.body["entries"] = std::move(entries);
    return r;
}

inline Report cmd_g1(const detail::Context& ctx, u64 n) {
    const auto rec = g1(NpOracle(ctx.model(), ctx.count()), n);
    Report r = ctx.report(hasse_prime_window(n).hi);
    r.body = detail::progression_json(rec);
    return r;
}

inline Report cmd_progressions(const detail::Context& ctx, u64 lo, u64 hi, std::size_t min_mult) {
    const u64 limit = lo > hi ? 0 : hasse_prime_window(hi).hi;
    const auto recs = lo > hi ? std::vector<ProgressionRecord>{} : find_progressions(ctx.table(limit), lo, hi, min_mult);
    Report r = ctx.report(limit);
    r.body["from"] = lo;
    r.body["to"] = hi;
    r.body["min_multiplicity"] = min_mult;
    Json list = Json::array();
    r.columns = {"n", "multiplicity", "primes"};
    for (const auto& rec : recs) {
        list.push_back(detail::progression_json(rec));
        r.rows.push_back({std::to_string(rec.n), std::to_string(rec.multiplicity()), detail::join(rec.primes)});
    }
    r.body["records"] = std::move(list);
    return r;
}

inline Report cmd_gk(const detail::Context& ctx, unsigned k, u64 n, bool ordered) {
    const auto sol = gk_solutions(NpOracle(ctx.model(), ctx.count()), k, n);
    Report r = ctx.report(sol.search_bound);
    r.body["n"] = sol.n;
    r.body["k"] = sol.k;
    r.body["count"] = ordered ? sol.ordered_count() : static_cast<u64>(sol.count());
    if (ordered) r.body["ordered"] = true;
    r.body["solutions"] = sol.solutions;
    r.body["search_bound"] = sol.search_bound;
    r.columns = {"set"};
    for (const auto& s : sol.solutions) r.rows.push_back({detail::join(s)});
    return r;
}

inline Report cmd_census(const detail::Context& ctx, unsigned k, u64 x, PruneBound prune, std::size_t witnesses) {
    CensusOptions opt;
    opt.workers = ctx.config().workers;
    opt.prune = prune;
    opt.collect_witnesses = witnesses > 0;
    opt.max_witnesses = witnesses;
    const CensusPlan plan = plan_census(ctx.model(), k, x, prune, ctx.count());
    GkCensus census;
    census.plan = plan;
    if (plan.max_factor > 0) census = gk_census(ctx.table(plan.prime_bound), k, x, opt);

    Report r = ctx.report(plan.prime_bound);
    r.body["k"] = k;
    r.body["x"] = x;
    r.body["max_factor"] = plan.max_factor;
    r.body["prime_bound"] = plan.prime_bound;
    r.body["entries_count"] = census.entries.size();
    r.body["max_count"] = census.max_count;
    r.body["argmax"] = census.argmax;
    Json list = Json::array();
    r.columns = {"n", "count"};
    for (const auto& e : census.entries) {
        Json j{{"n", e.n}, {"count", e.count}};
        if (opt.collect_witnesses) j["witnesses"] = e.witnesses;
        list.push_back(std::move(j));
        r.rows.push_back({std::to_string(e.n), std::to_string(e.count)});
    }
    r.body["entries"] = std::move(list);
    return r;
}

inline Report cmd_moments(const detail::Context& ctx, u64 x, std::size_t bins, double epsilon,
                          const std::string& histogram_path) {
    const auto t = ctx.table(x);
    const FactorSieve sieve = sieve_for(*t);
    const MomentReport m = moments(*t, x, sieve);
    const StandardizedDistribution d = standardized_distribution(*t, x, bins, sieve);
    const AdmissibilityProfile a = admissibility_profile(*t, x, epsilon, sieve);

    Report r = ctx.report(x);
    r.body["moments"] = Json{{"x", m.x},
                             {"pi_x", m.pi_x},
                             {"n_good", m.n_good},
                             {"loglog_x", m.loglog_x},
                             {"mean_omega", m.mean_omega},
                             {"m2", m.m2},
                             {"m4", m.m4},
                             {"ratio2", m.ratio2},
                             {"ratio2_alt", m.ratio2_alt},
                             {"ratio4", m.ratio4}};
    Json hist = Json::array();
    r.columns = {"bin_left", "bin_right", "mass"};
    for (const auto& b : d.bins) {
        hist.push_back({{"bin_left", b.left}, {"bin_right", b.right}, {"mass", b.mass}});
        r.rows.push_back({detail::fmt_real(b.left), detail::fmt_real(b.right), detail::fmt_real(b.mass)});
    }
    r.body["distribution"] = Json{{"bins", d.bins.size()}, {"ks_statistic", d.ks_statistic}, {"histogram", hist}};
    r.body["admissibility"] = Json{{"epsilon", a.epsilon},
                                   {"threshold", a.threshold},
                                   {"admissible_count", a.admissible_count},
                                   {"inadmissible_count", a.inadmissible_count},
                                   {"inadmissible_recip_sum", a.inadmissible_recip_sum}};
    if (!histogram_path.empty()) {
        std::ofstream h(histogram_path, std::ios::binary | std::ios::trunc);
        if (!h) throw Error("cannot write histogram file " + histogram_path);
        h << "bin_left,bin_right,mass\n";
        for (const auto& row : r.rows) h << row[0] << "," << row[1] << "," << row[2] << "\n";
    }
    return r;
}

inline Report cmd_mertens(const detail::Context& ctx, u64 x, double a, double b, double epsilon) {
    if (!(a > 0 && a < b && b < 1)) throw std::invalid_argument("mertens: need 0 < a < b < 1");
    const u64 top = ceil_real(std::pow(static_cast<double>(x), b));
    const u64 limit = std::max<u64>(top == 0 ? 0 : top - 1, 2);
    const auto t = ctx.table(limit);
    const RecipSumReport s = admissible_recip_sum(*t, x, a, b, epsilon, sieve_for(*t));
    const double ref = std::log(b / a);
    Report r = ctx.report(limit);
    r.body = Json{{"x", s.x},
                  {"a", s.a},
                  {"b", s.b},
                  {"epsilon", s.epsilon},
                  {"threshold", s.threshold},
                  {"prime_lo", s.lo},
                  {"prime_hi", s.hi},
                  {"full_sum", s.full_sum},
                  {"admissible_sum", s.admissible_sum},
                  {"inadmissible_sum", s.inadmissible_sum},
                  {"bad_prime_sum", s.bad_prime_sum},
                  {"difference", s.difference},
                  {"log_b_over_a", ref},
                  {"empty", s.empty}};
    return r;
}

inline Report cmd_pied(const detail::Context& ctx, u64 x, u64 d) {
    const auto t = ctx.table(x);
    Report r = ctx.report(x);
    r.body = Json{{"x", x}, {"d", d}, {"count", pi_e(*t, x, d)}};
    return r;
}

// ---------------------------------------------------------------------------
// verify-paper

struct Check {
    std::string name;
    bool pass = false;
    std::string expected;
    std::string computed;
};

namespace detail {

inline std::string triple(const std::array<u64, 3>& a, const char* sep) {
    return std::to_string(a[0]) + sep + std::to_string(a[1]) + sep + std::to_string(a[2]);
}

/// Runs `body`; any exception becomes a failed check carrying the error text,
/// so cache corruption surfaces with its file and line.
inline void guarded(std::vector<Check>& checks, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        checks.push_back({name, false, "no error", e.what()});
    }
}

inline ProgressionRecord g1_in(const std::shared_ptr<const NpTable>& t, u64 n) {
    const auto recs = find_progressions(t, n, n, 1);
    return recs.empty() ? ProgressionRecord{n, {}} : recs.front();
}

}  // namespace detail

inline std::vector<Check> verify_checks(const detail::Context& ctx, bool extended, u64& max_limit) {
    using namespace reference;
    std::vector<Check> checks;
    const CurveModel e37 = parse_curve(kCurve37a);
    const CurveModel eb = parse_curve(kCurveB);
    auto track = [&](u64 l) { max_limit = std::max(max_limit, l); };

    detail::guarded(checks, "chained products", [&] {
        u64 limit = 0;
        for (const auto& id : kProductIdentities) {
            for (u64 p : id.left) limit = std::max(limit, p);
            for (u64 p : id.right) limit = std::max(limit, p);
        }
        track(limit);
        const auto t = ctx.table(e37, limit);
        auto nps = [&](const std::array<u64, 3>& ps) {
            std::array<u64, 3> v{};
            for (std::size_t i = 0; i < 3; ++i) v[i] = t->np(ps[i]).value_or(0);
            return v;
        };
        for (const auto& id : kProductIdentities) {
            const auto l = nps(id.left), r = nps(id.right);
            const std::string who = "N(" + detail::triple(id.left, ",") + ") = N(" + detail::triple(id.right, ",") + ")";
            if (id.left_np[0] != 0) {
                checks.push_back({"factor values " + who, l == id.left_np && r == id.right_np,
                                  detail::triple(id.left_np, "*") + " / " + detail::triple(id.right_np, "*"),
                                  detail::triple(l, "*") + " / " + detail::triple(r, "*")});
            }
            const u64 lp = l[0] * l[1] * l[2], rp = r[0] * r[1] * r[2];
            checks.push_back({"product " + who, lp == id.product && rp == id.product,
                              std::to_string(id.product) + " = " + std::to_string(id.product),
                              std::to_string(lp) + " = " + std::to_string(rp)});
        }
    });

    detail::guarded(checks, "progression at 1057", [&] {
        const u64 limit = hasse_prime_window(kProgressionN).hi;
        track(limit);
        const auto rec = detail::g1_in(ctx.table(e37, limit), kProgressionN);
        const std::vector<u64> want(kProgressionPrimes.begin(), kProgressionPrimes.end());
        checks.push_back({"G1(1057) on " + e37.spec(), rec.primes == want, "primes 1009 1063, multiplicity 2",
                          "primes " + detail::join(rec.primes) + ", multiplicity " + std::to_string(rec.multiplicity())});
    });

    detail::guarded(checks, "triple table", [&] {
        u64 top = 0;
        for (const auto& row : kTripleRows) top = std::max(top, row.n);
        const u64 limit = hasse_prime_window(top).hi;
        track(limit);
        const auto t = ctx.table(eb, limit);
        for (const auto& row : kTripleRows) {
            std::vector<u64> want(row.primes.begin(), row.primes.end());
            std::sort(want.begin(), want.end());
            const auto rec = detail::g1_in(t, row.n);
            checks.push_back({"triple row n=" + std::to_string(row.n), rec.primes == want,
                              detail::join(want) + " (multiplicity 3)",
                              detail::join(rec.primes) + " (multiplicity " + std::to_string(rec.multiplicity()) + ")"});
        }
    });

    detail::guarded(checks, "multiplicity table", [&] {
        const u64 limit = hasse_prime_window(kMultiplicityHi).hi;
        track(limit);
        const auto t = ctx.table(eb, limit);
        for (const auto& row : kMultiplicityRows) {
            const auto rec = detail::g1_in(t, row.n);
            checks.push_back({"multiplicity row n=" + std::to_string(row.n), rec.multiplicity() == row.g1,
                              "G1 = " + std::to_string(row.g1), "G1 = " + std::to_string(rec.multiplicity())});
        }
    });

    detail::guarded(checks, "census", [&] {
        const CensusPlan plan = plan_census(e37, 3, kCensusX, PruneBound::both, ctx.count());
        track(plan.prime_bound);
        CensusOptions opt;
        opt.workers = ctx.config().workers;
        const auto census = gk_census(ctx.table(e37, plan.prime_bound), 3, kCensusX, opt);
        const auto it = std::find_if(census.entries.begin(), census.entries.end(),
                                     [](const CensusEntry& e) { return e.n == kCensusN; });
        const u64 c = it == census.entries.end() ? 0 : it->count;
        checks.push_back({"census k=3 x=4000000 at n=3107520", c >= 2, "count >= 2", "count = " + std::to_string(c)});
    });

    if (extended) {
        detail::guarded(checks, "extended census", [&] {
            const CensusPlan plan = plan_census(e37, 3, kExtendedCensusX, PruneBound::both, ctx.count());
            track(plan.prime_bound);
            CensusOptions opt;
            opt.workers = ctx.config().workers;
            opt.collect_witnesses = false;
            opt.segment_span = u64{1} << 26;
            u64 c = 0;
            census_scan(ctx.table(e37, plan.prime_bound), 3, kExtendedCensusX, opt, [&](const CensusEntry& e) {
                if (e.n == kExtendedCensusN) c = e.count;
            });
            checks.push_back({"census k=3 x=2000000000 at n=1988217000", c >= 2, "count >= 2",
                              "count = " + std::to_string(c)});
        });
    }
    return checks;
}

inline Report cmd_verify_paper(const detail::Context& ctx, bool extended, bool& all_pass) {
    u64 max_limit = 0;
    const auto checks = verify_checks(ctx, extended, max_limit);
    Report r;
    r.curve = std::string(reference::kCurve37a) + ";" + reference::kCurveB;
    r.limit = max_limit;
    Json list = Json::array();
    std::size_t passed = 0;
    r.columns = {"status", "check", "expected", "computed"};
    for (const auto& c : checks) {
        passed += c.pass;
        list.push_back({{"check", c.name}, {"status", c.pass ? "PASS" : "FAIL"}, {"expected", c.expected},
                        {"computed", c.computed}});
        r.rows.push_back({c.pass ? "PASS" : "FAIL", c.name, c.expected, c.computed});
    }
    all_pass = passed == checks.size();
    r.body["passed"] = passed;
    r.body["failed"] = checks.size() - passed;
    r.body["ok"] = all_pass;
    r.body["checks"] = std::move(list);
    return r;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Point counts of elliptic curves over prime fields and equal-product searches", "ellnum"};
    app.set_version_flag("--version", ELLNUM_VERSION);
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--curve", cfg.curve, "Weierstrass coefficients a1,a2,a3,a4,a6")->capture_default_str();
    app.add_option("--cache", cfg.cache, "Table cache directory; empty or 'none' disables caching")
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table-text"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for randomized point counting")->capture_default_str();

    u64 prime = 0, n = 0, limit = 0, from = 0, to = 0, x = 0, d = 0;
    unsigned k = 0;
    std::size_t min_mult = 2, bins = 20, witnesses = 16;
    double epsilon = 0.008, a = 0.125, b = 0.25;
    bool ordered = false, extended = false;
    std::string out_path, histogram, prune = "both";

    auto* c_np = app.add_subcommand("np", "Point count N_p at one prime");
    c_np->add_option("--prime", prime, "Prime p")->required();

    auto* c_table = app.add_subcommand("table", "Build or load the table of N_p for p <= limit");
    c_table->add_option("--limit", limit, "Largest prime considered")->required();
    c_table->add_option("--out", out_path, "Also write the table to this file");

    auto* c_g1 = app.add_subcommand("g1", "Good primes p with N_p = n");
    c_g1->add_option("--n", n, "Target value")->required()->check(CLI::PositiveNumber);

    auto* c_prog = app.add_subcommand("progressions", "All n in a range with at least --min primes sharing N_p = n");
    c_prog->add_option("--from", from, "Smallest n")->required()->check(CLI::PositiveNumber);
    c_prog->add_option("--to", to, "Largest n")->required()->check(CLI::PositiveNumber);
    c_prog->add_option("--min", min_mult, "Minimum multiplicity")->capture_default_str();

    auto* c_gk = app.add_subcommand("gk", "k-sets of distinct good primes with N-product n");
    c_gk->add_option("--k", k, "Set size")->required()->check(CLI::PositiveNumber);
    c_gk->add_option("--n", n, "Target product")->required()->check(CLI::PositiveNumber);
    c_gk->add_flag("--ordered", ordered, "Count ordered k-tuples instead of sets");

    auto* c_census = app.add_subcommand("census", "G_k(n) for every attained n <= x");
    c_census->add_option("--k", k, "Set size")->required()->check(CLI::PositiveNumber);
    c_census->add_option("--x", x, "Bound on n")->required();
    c_census->add_option("--prune", prune, "Prime bound used to cut the search")
        ->check(CLI::IsMember({"hasse", "linear", "both"}))
        ->capture_default_str();
    c_census->add_option("--witnesses", witnesses, "Prime sets kept per n; 0 keeps counts only")->capture_default_str();

    auto* c_moments = app.add_subcommand("moments", "Moments and distribution of omega(N_p) for p <= x");
    c_moments->add_option("--x", x, "Bound on p")->required();
    c_moments->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
    c_moments->add_option("--epsilon", epsilon, "Admissibility parameter")->capture_default_str();
    c_moments->add_option("--histogram", histogram, "Write the histogram as CSV to this file");

    auto* c_mertens = app.add_subcommand("mertens", "Reciprocal prime sums over [x^a, x^b)");
    c_mertens->add_option("--x", x, "Scale")->required();
    c_mertens->add_option("--a", a, "Lower exponent")->capture_default_str();
    c_mertens->add_option("--b", b, "Upper exponent")->capture_default_str();
    c_mertens->add_option("--epsilon", epsilon, "Admissibility parameter")->capture_default_str();

    auto* c_pied = app.add_subcommand("pied", "Good primes p <= x with d | N_p");
    c_pied->add_option("--x", x, "Bound on p")->required();
    c_pied->add_option("--d", d, "Squarefree modulus")->required()->check(CLI::PositiveNumber);

    auto* c_verify = app.add_subcommand("verify-paper", "Check the published values");
    c_verify->add_flag("--extended", extended, "Also run the census up to 2e9");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "ellnum: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::unique_ptr<detail::Context> ctx;
        try {
            ctx = std::make_unique<detail::Context>(cfg);
        } catch (const ParseError& e) {
            err << "ellnum: --curve: " << e.what() << "\n";
            return kExitUsage;
        }
        if (c_np->parsed()) {
            try {
                render(cmd_np(*ctx, prime), cfg, out);
            } catch (const BadReductionError& e) {
                Report r = ctx->report(prime);
                r.body = Json{{"p", prime}, {"bad_reduction", true}, {"discriminant", ctx->model().discriminant().str()}};
                render(r, cfg, out);
                err << "ellnum: " << e.what() << "\n";
                return kExitBadReduction;
            }
        } else if (c_table->parsed()) {
            render(cmd_table(*ctx, limit, out_path), cfg, out);
        } else if (c_g1->parsed()) {
            render(cmd_g1(*ctx, n), cfg, out);
        } else if (c_prog->parsed()) {
            render(cmd_progressions(*ctx, from, to, min_mult), cfg, out);
        } else if (c_gk->parsed()) {
            render(cmd_gk(*ctx, k, n, ordered), cfg, out);
        } else if (c_census->parsed()) {
            const PruneBound pb = prune == "hasse" ? PruneBound::hasse : prune == "linear" ? PruneBound::linear : PruneBound::both;
            render(cmd_census(*ctx, k, x, pb, witnesses), cfg, out);
        } else if (c_moments->parsed()) {
            render(cmd_moments(*ctx, x, bins, epsilon, histogram), cfg, out);
        } else if (c_mertens->parsed()) {
            render(cmd_mertens(*ctx, x, a, b, epsilon), cfg, out);
        } else if (c_pied->parsed()) {
            render(cmd_pied(*ctx, x, d), cfg, out);
        } else if (c_verify->parsed()) {
            bool ok = false;
            render(cmd_verify_paper(*ctx, extended, ok), cfg, out);
            return ok ? kExitOk : kExitError;
        }
    } catch (const BadReductionError& e) {
        err << "ellnum: " << e.what() << "\n";
        return kExitBadReduction;
    } catch (const std::exception& e) {
        err << "ellnum: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"ellnum"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ellnum::cli
