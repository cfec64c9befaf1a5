// The map p -> N_p(E) over the primes up to a bound, its parallel builder and
// the line-oriented "ellnum-v1" cache format:
//
//   ellnum-v1,<a1>,<a2>,<a3>,<a4>,<a6>,<limit>
//   <p>,<np>        one line per good prime, ascending
//   !<p>            one line per bad prime, ascending
//
// LF line endings, no trailing whitespace.
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ellnum/arith.hpp"
#include "ellnum/point_count.hpp"

namespace ellnum {

struct NpEntry {
    u64 p;
    u64 np;

    friend bool operator==(const NpEntry&, const NpEntry&) = default;
};

enum class TableErrorKind { malformed, hasse_violation, not_ascending, curve_mismatch, incomplete };

inline const char* to_string(TableErrorKind k) {
    switch (k) {
        case TableErrorKind::malformed: return "malformed table";
        case TableErrorKind::hasse_violation: return "Hasse violation";
        case TableErrorKind::not_ascending: return "not ascending";
        case TableErrorKind::curve_mismatch: return "curve mismatch";
        case TableErrorKind::incomplete: return "incomplete table";
    }
    return "table error";
}

/// line() is 1-based within the file; 0 when the problem is not tied to a line.
class TableError : public Error {
public:
    TableError(TableErrorKind kind, std::size_t line, const std::string& detail)
        : Error(std::string(to_string(kind)) + (line ? " at line " + std::to_string(line) : std::string()) + ": " +
                detail),
          kind_(kind),
          line_(line),
          detail_(detail) {}

    TableErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    TableErrorKind kind_;
    std::size_t line_;
    std::string detail_;
};

class NpTable {
public:
    /// Validates every invariant; throws TableError.
    NpTable(CurveModel curve, u64 limit, std::vector<NpEntry> entries, std::vector<u64> bad_primes)
        : curve_(std::move(curve)), limit_(limit), entries_(std::move(entries)), bad_(std::move(bad_primes)) {
        validate();
    }

    const CurveModel& curve() const noexcept { return curve_; }
    u64 limit() const noexcept { return limit_; }
    std::span<const NpEntry> entries() const noexcept { return entries_; }
    const std::vector<u64>& bad_primes() const noexcept { return bad_; }

    /// Good-prime entries with p <= x.
    std::span<const NpEntry> entries_up_to(u64 x) const {
        auto it = std::upper_bound(entries_.begin(), entries_.end(), x, [](u64 v, const NpEntry& e) { return v < e.p; });
        return {entries_.data(), static_cast<std::size_t>(it - entries_.begin())};
    }

    /// pi(x) for x <= limit.
    std::size_t prime_count_up_to(u64 x) const {
        return entries_up_to(x).size() +
               static_cast<std::size_t>(std::upper_bound(bad_.begin(), bad_.end(), x) - bad_.begin());
    }

    /// N_p, or nullopt for a bad prime. Throws for p above the limit or non-prime p.
    std::optional<u64> np(u64 p) const {
        if (p > limit_) throw std::out_of_range("NpTable: prime " + std::to_string(p) + " above table limit");
        auto it = std::lower_bound(entries_.begin(), entries_.end(), p, [](const NpEntry& e, u64 v) { return e.p < v; });
        if (it != entries_.end() && it->p == p) return it->np;
        if (std::binary_search(bad_.begin(), bad_.end(), p)) return std::nullopt;
        throw std::invalid_argument("NpTable: " + std::to_string(p) + " is not prime");
    }

    u64 max_np() const {
        u64 m = 0;
        for (const auto& e : entries_) m = std::max(m, e.np);
        return m;
    }

    NpTable restricted(u64 new_limit) const {
        if (new_limit > limit_) throw std::out_of_range("NpTable::restricted: bound above table limit");
        auto good = entries_up_to(new_limit);
        std::vector<u64> bad(bad_.begin(), std::upper_bound(bad_.begin(), bad_.end(), new_limit));
        NpTable t(curve_, new_limit, {good.begin(), good.end()}, std::move(bad));
        t.seed_ = seed_;
        return t;
    }

    /// Sampling seed used while building; provenance only, never serialized.
    u64 seed() const noexcept { return seed_; }
    void set_seed(u64 s) noexcept { seed_ = s; }

    friend bool operator==(const NpTable& l, const NpTable& r) {
        return l.curve_ == r.curve_ && l.limit_ == r.limit_ && l.entries_ == r.entries_ && l.bad_ == r.bad_;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            if (i > 0 && entries_[i - 1].p >= e.p) {
                throw TableError(TableErrorKind::not_ascending, 0, "entry " + std::to_string(e.p));
            }
            if (!satisfies_hasse(e.p, e.np)) {
                throw TableError(TableErrorKind::hasse_violation, 0,
                                 "N_" + std::to_string(e.p) + " = " + std::to_string(e.np));
            }
        }
        for (std::size_t i = 1; i < bad_.size(); ++i) {
            if (bad_[i - 1] >= bad_[i]) throw TableError(TableErrorKind::not_ascending, 0, "bad prime list");
        }
        const auto primes = primes_up_to(limit_);
        if (primes.size() != entries_.size() + bad_.size()) {
            throw TableError(TableErrorKind::incomplete, 0,
                             std::to_string(entries_.size()) + " entries + " + std::to_string(bad_.size()) +
                                 " bad primes != pi(" + std::to_string(limit_) + ") = " + std::to_string(primes.size()));
        }
        std::size_t gi = 0, bi = 0;
        for (u64 p : primes) {
            const bool good = is_good_prime(curve_, p);
            if (good && gi < entries_.size() && entries_[gi].p == p) {
                ++gi;
            } else if (!good && bi < bad_.size() && bad_[bi] == p) {
                ++bi;
            } else {
                throw TableError(TableErrorKind::incomplete, 0,
                                 "prime " + std::to_string(p) + (good ? " (good)" : " (bad)") + " missing or misfiled");
            }
        }
    }

    CurveModel curve_;
    u64 limit_;
    std::vector<NpEntry> entries_;
    std::vector<u64> bad_;
    u64 seed_ = 0;
};

struct BuildOptions {
    unsigned workers = 1;
    /// Primes per work unit.
    std::size_t chunk_primes = 1000;
    CountOptions count;
};

/// N_p for every good prime <= limit. Output is identical for any worker count.
inline NpTable build_table(const CurveModel& model, u64 limit, const BuildOptions& opt = {}) {
    const std::vector<u64> primes = primes_up_to(limit);
    const std::size_t chunk = std::max<std::size_t>(opt.chunk_primes, 1);
    const std::size_t n_chunks = (primes.size() + chunk - 1) / chunk;
    std::vector<u64> counts(primes.size(), 0);  // 0 marks a bad prime
    std::vector<std::exception_ptr> failures(n_chunks);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < n_chunks;) {
            try {
                const std::size_t end = std::min(primes.size(), (c + 1) * chunk);
                for (std::size_t i = c * chunk; i < end; ++i) {
                    if (is_good_prime(model, primes[i])) {
                        counts[i] = count_points(ReducedCurve::reduce(model, primes[i]), opt.count);
                    }
                }
            } catch (...) {
                failures[c] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, opt.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (std::size_t c = 0; c < n_chunks; ++c) {
        if (!failures[c]) continue;
        const u64 completed = c == 0 ? 1 : primes[c * chunk - 1];
        try {
            std::rethrow_exception(failures[c]);
        } catch (const std::bad_alloc&) {
            throw BudgetExceededError("build_table: out of memory", completed);
        } catch (const std::exception& e) {
            throw BudgetExceededError(std::string("build_table: ") + e.what(), completed);
        }
    }

    std::vector<NpEntry> entries;
    std::vector<u64> bad;
    entries.reserve(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (counts[i] == 0) {
            bad.push_back(primes[i]);
        } else {
            entries.push_back({primes[i], counts[i]});
        }
    }
    NpTable t(model, limit, std::move(entries), std::move(bad));
    t.set_seed(opt.count.seed);
    return t;
}

inline std::string serialize_table(const NpTable& t) {
    std::string out = "ellnum-v1," + t.curve().spec() + "," + std::to_string(t.limit()) + "\n";
    for (const auto& e : t.entries()) out += std::to_string(e.p) + "," + std::to_string(e.np) + "\n";
    for (u64 p : t.bad_primes()) out += "!" + std::to_string(p) + "\n";
    return out;
}

namespace detail {

inline std::optional<u64> parse_u64(std::string_view s) {
    if (s.empty() || s.size() > 19) return std::nullopt;
    u64 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<u64>(c - '0');
    }
    return v;
}

}  // namespace detail

/// Parse and fully re-validate a cache. If `expected` is given the header curve must match it.
inline NpTable parse_table(std::istream& in, const CurveModel* expected = nullptr) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw TableError(TableErrorKind::malformed, 1, "empty file");
    const std::string magic = "ellnum-v1,";
    if (line.rfind(magic, 0) != 0) throw TableError(TableErrorKind::malformed, 1, "missing ellnum-v1 header");
    const auto last_comma = line.rfind(',');
    std::optional<CurveModel> curve;
    try {
        curve = parse_curve(std::string_view(line).substr(magic.size(), last_comma - magic.size()));
    } catch (const Error& e) {
        throw TableError(TableErrorKind::malformed, 1, e.what());
    }
    const auto limit = detail::parse_u64(std::string_view(line).substr(last_comma + 1));
    if (!limit) throw TableError(TableErrorKind::malformed, 1, "bad limit");
    if (expected && !(*expected == *curve)) {
        throw TableError(TableErrorKind::curve_mismatch, 1,
                         "file has curve " + curve->spec() + ", expected " + expected->spec());
    }

    std::vector<NpEntry> entries;
    std::vector<u64> bad;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view sv(line);
        if (!sv.empty() && sv.front() == '!') {
            const auto p = detail::parse_u64(sv.substr(1));
            if (!p || !is_prime_u64(*p) || *p > *limit) throw TableError(TableErrorKind::malformed, lineno, "bad prime line '" + line + "'");
            if (!bad.empty() && bad.back() >= *p) throw TableError(TableErrorKind::not_ascending, lineno, line);
            if (is_good_prime(*curve, *p)) {
                throw TableError(TableErrorKind::incomplete, lineno, std::to_string(*p) + " is a good prime");
            }
            bad.push_back(*p);
            continue;
        }
        const auto comma = sv.find(',');
        if (comma == std::string_view::npos) throw TableError(TableErrorKind::malformed, lineno, "'" + line + "'");
        const auto p = detail::parse_u64(sv.substr(0, comma));
        const auto n = detail::parse_u64(sv.substr(comma + 1));
        if (!p || !n || !is_prime_u64(*p) || *p > *limit) {
            throw TableError(TableErrorKind::malformed, lineno, "'" + line + "'");
        }
        if (!bad.empty()) throw TableError(TableErrorKind::not_ascending, lineno, "entry after bad-prime section");
        if (!entries.empty() && entries.back().p >= *p) throw TableError(TableErrorKind::not_ascending, lineno, line);
        if (!satisfies_hasse(*p, *n)) {
            throw TableError(TableErrorKind::hasse_violation, lineno,
                             "N_" + std::to_string(*p) + " = " + std::to_string(*n) + " outside the Hasse interval");
        }
        if (!is_good_prime(*curve, *p)) {
            throw TableError(TableErrorKind::incomplete, lineno, std::to_string(*p) + " is a bad prime");
        }
        entries.push_back({*p, *n});
    }
    return NpTable(std::move(*curve), *limit, std::move(entries), std::move(bad));
}

inline NpTable load_table(const std::filesystem::path& path, const CurveModel* expected = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open table file " + path.string());
    try {
        return parse_table(in, expected);
    } catch (const TableError& e) {
        throw TableError(e.kind(), e.line(), path.string() + ": " + e.detail());
    }
}

inline void save_table(const NpTable& t, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    // Unique temporary name so concurrent writers of the same cache never share a file.
    const auto tmp = std::filesystem::path(path.string() + ".tmp" + std::to_string(std::random_device{}()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write table file " + tmp.string());
        out << serialize_table(t);
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::filesystem::path default_cache_path(const std::filesystem::path& dir, const CurveModel& model, u64 limit) {
    std::string name;
    for (const auto& c : model.coefficients()) name += c.str() + "_";
    return dir / (name + std::to_string(limit) + ".ellnum");
}

/// Union of two tables of the same curve; overlapping entries must agree.
inline NpTable merge_tables(const NpTable& a, const NpTable& b) {
    if (!(a.curve() == b.curve())) {
        throw TableError(TableErrorKind::curve_mismatch, 0, a.curve().spec() + " vs " + b.curve().spec());
    }
    const NpTable& big = a.limit() >= b.limit() ? a : b;
    const NpTable& small = a.limit() >= b.limit() ? b : a;
    if (!(big.restricted(small.limit()) == small)) {
        throw TableError(TableErrorKind::curve_mismatch, 0, "tables disagree below " + std::to_string(small.limit()));
    }
    return big;
}

/// Load from `dir` when a cache for (model, limit) exists, otherwise build and save there.
/// An empty dir disables caching.
inline NpTable cached_table(const CurveModel& model, u64 limit, const BuildOptions& opt,
                            const std::filesystem::path& dir) {
    if (dir.empty()) return build_table(model, limit, opt);
    const auto path = default_cache_path(dir, model, limit);
    if (std::filesystem::exists(path)) {
        NpTable t = load_table(path, &model);
        t.set_seed(opt.count.seed);
        return t;
    }
    NpTable t = build_table(model, limit, opt);
    save_table(t, path);
    return t;
}

}  // namespace ellnum
