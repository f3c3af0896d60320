// cubeconc command-line harness: distribution generation, single checks,
// experiment sweeps, concentration-function queries and Monte Carlo tail
// estimation. Everything goes through the shared-library C API; this
// program only orchestrates runs and formats CSV.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubeconc.h"

namespace {

struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void die(const std::string& message, int exit_code = 2) {
    throw CliError{exit_code, message};
}

void check(cubeconc_status status, const std::string& what) {
    if (status != CUBECONC_OK) {
        die(what + ": " + cubeconc_status_name(status) + " (" + cubeconc_last_error() + ")");
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct DistHandle {
    cubeconc_dist* h = nullptr;
    DistHandle() = default;
    explicit DistHandle(cubeconc_dist* p) : h(p) {}
    DistHandle(const DistHandle&) = delete;
    DistHandle& operator=(const DistHandle&) = delete;
    DistHandle(DistHandle&& o) noexcept : h(o.h) { o.h = nullptr; }
    DistHandle& operator=(DistHandle&& o) noexcept {
        std::swap(h, o.h);
        return *this;
    }
    ~DistHandle() { cubeconc_dist_free(h); }
};

struct SetHandle {
    cubeconc_set* h = nullptr;
    SetHandle() = default;
    explicit SetHandle(cubeconc_set* p) : h(p) {}
    SetHandle(const SetHandle&) = delete;
    SetHandle& operator=(const SetHandle&) = delete;
    SetHandle(SetHandle&& o) noexcept : h(o.h) { o.h = nullptr; }
    SetHandle& operator=(SetHandle&& o) noexcept {
        std::swap(h, o.h);
        return *this;
    }
    ~SetHandle() { cubeconc_set_free(h); }
};

// One report row in the shared CSV schema; unset fields print empty.
struct Row {
    std::string check;
    uint32_t n = 0;
    std::string kind;
    std::optional<uint64_t> seed;
    std::string y;        // bit string, empty for y-independent checks
    uint64_t y_index = 0; // sort key
    std::optional<double> t;
    std::optional<double> param; // c for tail/mc, eps for alpha/median
    std::optional<double> mean, mgf;
    std::optional<double> bound_inductive, bound_smallvar, bound_hoeffding;
    std::optional<double> slack_inductive, slack_smallvar;
    std::string verdicts;
    std::optional<double> lhs, mid, outer, mu_a, c_prod;
    std::optional<uint64_t> count, formula;
    std::optional<double> estimate, radius, exact, alpha;
    bool pass = true;
    std::string note;
};

const char* kCsvColumns =
    "check,n,kind,seed,y,t,param,mean,mgf,bound_inductive,bound_smallvar,bound_hoeffding,"
    "slack_inductive,slack_smallvar,verdicts,lhs,mid,outer,mu_A,c_prod,count,formula,"
    "estimate,radius,exact,alpha,pass,note";

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }
std::string cell(const std::optional<uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

void write_csv(std::ostream& os, const std::vector<Row>& rows, uint64_t seed) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32] = "unknown";
    if (std::tm tm{}; gmtime_r(&tt, &tm) != nullptr) {
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
    }
    os << "# cubeconc schema=1 rng=mt19937_64 seed=" << seed << " generated=" << stamp << "\n";
    os << kCsvColumns << "\n";
    for (const Row& r : rows) {
        os << r.check << ',' << r.n << ',' << r.kind << ',' << cell(r.seed) << ',' << r.y << ','
           << cell(r.t) << ',' << cell(r.param) << ',' << cell(r.mean) << ',' << cell(r.mgf)
           << ',' << cell(r.bound_inductive) << ',' << cell(r.bound_smallvar) << ','
           << cell(r.bound_hoeffding) << ',' << cell(r.slack_inductive) << ','
           << cell(r.slack_smallvar) << ',' << r.verdicts << ',' << cell(r.lhs) << ','
           << cell(r.mid) << ',' << cell(r.outer) << ',' << cell(r.mu_a) << ','
           << cell(r.c_prod) << ',' << cell(r.count) << ',' << cell(r.formula) << ','
           << cell(r.estimate) << ',' << cell(r.radius) << ',' << cell(r.exact) << ','
           << cell(r.alpha) << ',' << (r.pass ? 1 : 0) << ',' << r.note << "\n";
    }
}

std::string bits_of(uint64_t index, uint32_t n) {
    std::string s(n, '0');
    for (uint32_t k = 0; k < n; ++k) {
        if ((index >> (n - 1 - k)) & 1u) s[k] = '1';
    }
    return s;
}

uint64_t index_of_bits(const std::string& bits, uint32_t n) {
    if (bits.size() != n) die("bit string '" + bits + "' must have length " + std::to_string(n));
    uint64_t idx = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') die("bit string may contain only 0 and 1");
        idx = (idx << 1) | uint64_t(c == '1');
    }
    return idx;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

// "a:b:step" (inclusive of b up to rounding), a single value, or "v1,v2,..."
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_doubles(text);
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    if (parts.size() != 3) die("grid must be start:stop:step, got '" + text + "'");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || stop < start) die("grid must have positive step and stop >= start");
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
    return out;
}

uint32_t env_cap(uint32_t fallback) {
    const char* s = std::getenv("CUBECONC_MAX_N");
    if (!s || !*s) return fallback;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 1 || v > 63) return fallback;
    return uint32_t(v);
}

const std::set<std::string> kKnownChecks = {"inductive", "smallvar", "pc",   "count",
                                            "set",       "alpha",    "tail", "talagrand"};

// ---- distribution sources -------------------------------------------------

struct DistSpec {
    std::string path;    // JSON file, or:
    std::string kind;    // product | markov | delta_mix | dense | random
    uint32_t n = 0;
    double eps = 0.0;
    std::string p0_list;     // product marginals "0.3,0.6"
    double p_broadcast = -1; // single product marginal for all coordinates
    double initial_p0 = 0.5;
    std::string rows_list;   // markov rows "0.8,0.2;0.7,0.3"
    std::string probs_list;  // explicit dense table
    uint64_t seed = 0;
};

DistHandle open_dist(const DistSpec& spec) {
    cubeconc_dist* h = nullptr;
    if (!spec.path.empty()) {
        check(cubeconc_dist_read_json(spec.path.c_str(), &h), "reading " + spec.path);
        return DistHandle(h);
    }
    if (spec.kind == "product") {
        std::vector<double> p0;
        if (!spec.p0_list.empty()) {
            p0 = parse_doubles(spec.p0_list);
        } else if (spec.p_broadcast >= 0.0) {
            p0.assign(spec.n, spec.p_broadcast);
        } else {
            die("product distribution needs --p0 or --p");
        }
        check(cubeconc_dist_product(uint32_t(p0.size()), p0.data(), &h), "product");
    } else if (spec.kind == "delta_mix") {
        check(cubeconc_dist_delta_mix(spec.n, spec.eps, &h), "delta_mix");
    } else if (spec.kind == "markov") {
        std::vector<double> rows;
        std::stringstream ss(spec.rows_list);
        std::string row;
        while (std::getline(ss, row, ';')) {
            const auto pair = parse_doubles(row);
            if (pair.size() != 2) die("each markov row must be 'p(0|0),p(0|1)'");
            rows.push_back(pair[0]);
            rows.push_back(pair[1]);
        }
        check(cubeconc_dist_markov(uint32_t(rows.size() / 2 + 1), spec.initial_p0, rows.data(),
                                   &h),
              "markov");
    } else if (spec.kind == "dense") {
        if (!spec.probs_list.empty()) {
            const auto probs = parse_doubles(spec.probs_list);
            check(cubeconc_dist_dense(spec.n, probs.data(), &h), "dense");
        } else {
            check(cubeconc_dist_random_dense(spec.n, spec.seed, &h), "random dense");
        }
    } else if (spec.kind == "random") {
        check(cubeconc_dist_random_dense(spec.n, spec.seed, &h), "random dense");
    } else if (spec.kind.empty()) {
        die("no distribution given; use --dist <path> or --kind with generator flags");
    } else {
        die("unknown distribution kind '" + spec.kind + "'");
    }
    return DistHandle(h);
}

void add_dist_flags(CLI::App* cmd, DistSpec& spec) {
    cmd->add_option("--dist", spec.path, "distribution JSON file");
    cmd->add_option("--kind", spec.kind,
                    "generator kind: product|markov|delta_mix|dense|random");
    cmd->add_option("--n", spec.n, "dimension for generator kinds");
    cmd->add_option("--eps", spec.eps, "delta_mix mass parameter");
    cmd->add_option("--p0", spec.p0_list, "product marginals P(x_i=0), comma separated");
    cmd->add_option("--p", spec.p_broadcast, "single product marginal for all coordinates");
    cmd->add_option("--initial-p0", spec.initial_p0, "markov initial P(x_1=0)");
    cmd->add_option("--rows", spec.rows_list, "markov rows 'p(0|0),p(0|1);...'");
    cmd->add_option("--probs", spec.probs_list, "explicit dense table, comma separated");
    cmd->add_option("--seed-dist", spec.seed, "seed for --kind random tables");
}

// ---- check engine ----------------------------------------------------------

struct Engine {
    cubeconc_dist* dist = nullptr;
    uint32_t n = 0;
    std::string kind;
    std::optional<uint64_t> seed;

    explicit Engine(cubeconc_dist* d) : dist(d), n(cubeconc_dist_n(d)) {
        switch (cubeconc_dist_kind(d)) {
            case CUBECONC_KIND_DENSE: kind = "dense"; break;
            case CUBECONC_KIND_PRODUCT: kind = "product"; break;
            case CUBECONC_KIND_MARKOV: kind = "markov"; break;
            case CUBECONC_KIND_DELTA_MIX: kind = "delta_mix"; break;
        }
        uint64_t s = 0;
        if (cubeconc_dist_seed(dist, &s)) seed = s;
    }

    Row base(const std::string& checkname) const {
        Row r;
        r.check = checkname;
        r.n = n;
        r.kind = kind;
        r.seed = seed;
        return r;
    }

    std::string verdict_string(uint64_t y, double t) const {
        std::string s;
        for (uint32_t k = 2; k <= n; ++k) {
            double integral = 0.0;
            int sign = 0;
            check(cubeconc_correlation_verdict(dist, y, k, t, &integral, &sign),
                  "correlation verdict");
            s += sign > 0 ? '+' : (sign < 0 ? '-' : '0');
        }
        return s;
    }

    Row inductive(uint64_t y, double t) const {
        Row r = base("inductive");
        r.y = bits_of(y, n);
        r.y_index = y;
        r.t = t;
        double mean = 0.0, mgf = 0.0, bound = 0.0;
        int holds = 0;
        check(cubeconc_mean_hamming(dist, y, &mean), "mean");
        check(cubeconc_inductive_bound(dist, y, t, &mgf, &bound, nullptr, &holds), "inductive");
        r.mean = mean;
        r.mgf = mgf;
        r.bound_inductive = bound;
        r.bound_hoeffding = std::exp(double(n) * t * t / 2.0);
        r.slack_inductive = (bound - mgf) / bound;
        r.verdicts = verdict_string(y, t);
        r.pass = holds != 0;
        if (!r.pass) r.note = "inductive bound violated";
        return r;
    }

    Row smallvar(uint64_t y, double t) const {
        Row r = base("smallvar");
        r.y = bits_of(y, n);
        r.y_index = y;
        r.t = t;
        double mgf = 0.0, value = 0.0;
        int holds = 0;
        check(cubeconc_small_variance_bound(dist, y, t, &mgf, &value, nullptr, &holds),
              "small variance");
        double mean = 0.0;
        check(cubeconc_mean_hamming(dist, y, &mean), "mean");
        r.mean = mean;
        r.mgf = mgf;
        r.bound_smallvar = value;
        r.bound_hoeffding = std::exp(double(n) * t * t / 2.0);
        r.slack_smallvar = (value - mgf) / value;
        r.verdicts = verdict_string(y, t);
        r.pass = holds != 0;
        if (!r.pass) r.note = "small-variance bound violated";
        return r;
    }

    Row pc(uint64_t y, double t) const {
        Row r = base("pc");
        r.y = bits_of(y, n);
        r.y_index = y;
        r.t = t;
        int applicable = 0, holds = 0;
        double mgf = 0.0, bound = 0.0;
        check(cubeconc_pc_check(dist, y, t, &applicable, &mgf, &bound, &holds), "pc check");
        r.mgf = mgf;
        r.bound_hoeffding = bound;
        r.verdicts = verdict_string(y, t);
        if (!applicable) {
            r.note = "not-applicable";
            r.pass = true;
        } else {
            r.pass = holds != 0;
            if (!r.pass) r.note = "positive-correlation bound violated";
        }
        return r;
    }

    Row count(double t) const {
        Row r = base("count");
        r.t = t;
        uint64_t cnt = 0, formula = 0;
        int mh = 0, pv = 0, ph = 0, hyp = 0;
        check(cubeconc_count_good_y(dist, t, &cnt, &formula, &mh, &pv, &ph, &hyp), "count");
        r.count = cnt;
        r.formula = formula;
        std::ostringstream note;
        note << "marg_half=" << mh << " prop_t2=" << pv << " prop_t2half=" << ph
             << " hypotheses=" << hyp;
        r.note = note.str();
        return r;
    }

    Row tail(uint64_t y, double c) const {
        Row r = base("tail");
        r.y = bits_of(y, n);
        r.y_index = y;
        r.param = c;
        double exact = 0.0, hoeff = 0.0;
        int applicable = 0, holds = 0;
        check(cubeconc_tail_bound(dist, y, c, &exact, &hoeff, &applicable, &holds), "tail");
        r.exact = exact;
        r.bound_hoeffding = hoeff;
        if (applicable) {
            r.pass = holds != 0;
            if (!r.pass) r.note = "hoeffding tail bound violated";
        } else {
            r.pass = true;
            r.note = exact > hoeff ? "expected-nonconcentration" : "not-asserted";
        }
        return r;
    }

    Row set_bound(const cubeconc_set* a, double t, const std::string& setname) const {
        Row r = base("set");
        r.t = t;
        r.y = setname; // identifies the set within the sweep
        double lhs = 0.0, mid = 0.0, outer = 0.0, mu_a = 0.0;
        int hyp = 0, holds = 0;
        check(cubeconc_lipschitz_set_bound(dist, a, t, &lhs, &mid, &outer, &mu_a, &hyp, &holds),
              "set bound");
        r.lhs = lhs;
        r.mid = mid;
        r.outer = outer;
        r.mu_a = mu_a;
        std::vector<double> c(n >= 1 ? n - 1 : 0);
        if (!c.empty())
            check(cubeconc_conditional_sup_bounds(dist, c.data()), "conditional sup bounds");
        double cprod = 1.0;
        for (double ck : c) cprod *= ck * ck;
        r.c_prod = cprod;
        if (!hyp) {
            r.pass = true;
            r.note = "hypothesis-violated;not-asserted";
        } else {
            r.pass = holds != 0;
            if (!r.pass) r.note = "set-distance bound violated";
        }
        return r;
    }

    Row talagrand(const cubeconc_set* a, double t, const std::string& setname) const {
        Row r = base("talagrand");
        r.t = t;
        r.y = setname;
        double lhs = 0.0, bound = 0.0;
        int holds = 0;
        check(cubeconc_talagrand_baseline(dist, a, t, &lhs, &bound, &holds), "talagrand");
        r.lhs = lhs;
        r.outer = bound;
        r.pass = holds != 0;
        if (!r.pass) r.note = "product baseline violated";
        return r;
    }

    std::vector<Row> alpha(uint32_t eps, const std::vector<uint64_t>& ys) const {
        std::vector<Row> rows;
        Row r = base("alpha");
        r.param = double(eps);
        double a = 0.0;
        if (n <= 4) {
            check(cubeconc_concentration_alpha(dist, eps, &a), "alpha");
            r.alpha = a;
            r.note = "exact";
        } else {
            check(cubeconc_alpha_lower_bound(dist, eps, &a), "alpha lower bound");
            r.alpha = a;
            r.note = "heuristic-lower-bound";
        }
        rows.push_back(r);
        if (n <= 4) {
            for (uint64_t y : ys) {
                Row m = base("median");
                m.y = bits_of(y, n);
                m.y_index = y;
                m.param = double(eps);
                double lhs = 0.0, rhs = 0.0;
                uint32_t median = 0;
                int holds = 0;
                check(cubeconc_median_check(dist, y, eps, &lhs, &rhs, &median, &holds),
                      "median check");
                m.lhs = lhs;
                m.outer = rhs;
                m.pass = holds != 0;
                if (!m.pass) m.note = "median concentration chain violated";
                rows.push_back(m);
            }
        }
        return rows;
    }

    Row mc(uint64_t y, double c, uint64_t samples, uint64_t seed_, double delta) const {
        Row r = base("mc");
        r.y = bits_of(y, n);
        r.y_index = y;
        r.param = c;
        double estimate = 0.0, radius = 0.0;
        check(cubeconc_mc_tail(dist, y, c, samples, seed_, delta, &estimate, &radius), "mc");
        r.estimate = estimate;
        r.radius = radius;
        return r;
    }
};

std::vector<uint64_t> select_y(const std::string& spec, uint32_t n, std::mt19937_64& rng) {
    std::vector<uint64_t> ys;
    if (spec == "all") {
        const uint32_t cap = env_cap(12);
        if (n > cap)
            die("--y all enumerates 2^n points; capped at n = " + std::to_string(cap) +
                " (set CUBECONC_MAX_N to override)");
        ys.resize(size_t(1) << n);
        for (size_t i = 0; i < ys.size(); ++i) ys[i] = i;
    } else if (spec.rfind("sample:", 0) == 0) {
        const uint64_t k = std::stoull(spec.substr(7));
        const uint64_t mask = (n >= 64) ? ~uint64_t(0) : ((uint64_t(1) << n) - 1);
        for (uint64_t i = 0; i < k; ++i) ys.push_back(rng() & mask);
    } else {
        ys.push_back(index_of_bits(spec, n));
    }
    return ys;
}

SetHandle random_set(uint32_t n, std::mt19937_64& rng) {
    cubeconc_set* h = nullptr;
    check(cubeconc_set_create(n, &h), "set create");
    SetHandle set(h);
    const uint64_t points = uint64_t(1) << n;
    uint64_t added = 0;
    for (uint64_t x = 0; x < points; ++x) {
        if ((rng() & 3u) == 0) { // density 1/4
            check(cubeconc_set_add(set.h, x), "set add");
            ++added;
        }
    }
    if (added == 0) {
        const uint64_t mask = points - 1;
        check(cubeconc_set_add(set.h, rng() & mask), "set add");
    }
    return set;
}

void sort_rows(std::vector<Row>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.y != b.y) return a.y < b.y;
        const double ta = a.t.value_or(-1), tb = b.t.value_or(-1);
        if (ta != tb) return ta < tb;
        if (a.check != b.check) return a.check < b.check;
        return a.param.value_or(-1) < b.param.value_or(-1);
    });
}

int emit(std::vector<Row>& rows, const std::string& out_path, uint64_t seed) {
    sort_rows(rows);
    if (out_path.empty()) {
        write_csv(std::cout, rows, seed);
    } else {
        std::ofstream os(out_path);
        if (!os) die("cannot open '" + out_path + "' for writing");
        write_csv(os, rows, seed);
    }
    for (const Row& r : rows) {
        if (!r.pass) return 1;
    }
    return 0;
}

// ---- subcommands -----------------------------------------------------------

struct SweepConfig {
    DistSpec dist;
    std::string y_spec = "sample:4";
    std::string t_spec = "0.5:2:0.5";
    std::string c_spec;          // tail thresholds; defaults to the t grid
    std::string eps_spec = "1";  // alpha enlargement radii (integers)
    std::string checks_csv = "inductive";
    std::string set_path;        // explicit set JSON
    std::string sets_spec = "sample:1";
    uint64_t seed = 0;
    std::string out;
};

int run_sweep(const SweepConfig& cfg) {
    std::vector<std::string> checks;
    {
        std::stringstream ss(cfg.checks_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            if (!kKnownChecks.count(item)) die("unknown check '" + item + "'");
            checks.push_back(item);
        }
    }
    if (checks.empty()) die("no checks selected");

    DistHandle dist = open_dist(cfg.dist);
    Engine eng(dist.h);
    std::mt19937_64 rng(cfg.seed);

    const std::vector<uint64_t> ys = select_y(cfg.y_spec, eng.n, rng);
    const std::vector<double> ts = parse_grid(cfg.t_spec);
    for (double t : ts) {
        if (!(t > 0.0)) die("t grid must be strictly positive");
    }
    const std::vector<double> cs = cfg.c_spec.empty() ? ts : parse_grid(cfg.c_spec);

    std::vector<std::pair<std::string, SetHandle>> sets;
    const bool needs_sets = std::count(checks.begin(), checks.end(), "set") ||
                            std::count(checks.begin(), checks.end(), "talagrand");
    if (needs_sets) {
        if (!cfg.set_path.empty()) {
            cubeconc_set* h = nullptr;
            check(cubeconc_set_read_json(cfg.set_path.c_str(), &h), "reading " + cfg.set_path);
            sets.emplace_back("A0", SetHandle(h));
        } else if (cfg.sets_spec.rfind("sample:", 0) == 0) {
            const uint64_t k = std::stoull(cfg.sets_spec.substr(7));
            for (uint64_t i = 0; i < k; ++i) {
                sets.emplace_back("A" + std::to_string(i), random_set(eng.n, rng));
            }
        } else {
            die("--sets must be 'sample:K' (or pass --set <path>)");
        }
    }

    std::vector<Row> rows;
    for (const std::string& chk : checks) {
        if (chk == "inductive") {
            for (uint64_t y : ys)
                for (double t : ts) rows.push_back(eng.inductive(y, t));
        } else if (chk == "smallvar") {
            for (uint64_t y : ys)
                for (double t : ts) rows.push_back(eng.smallvar(y, t));
        } else if (chk == "pc") {
            for (uint64_t y : ys)
                for (double t : ts) rows.push_back(eng.pc(y, t));
        } else if (chk == "count") {
            for (double t : ts) rows.push_back(eng.count(t));
        } else if (chk == "tail") {
            for (uint64_t y : ys)
                for (double c : cs) rows.push_back(eng.tail(y, c));
        } else if (chk == "alpha") {
            for (double e : parse_grid(cfg.eps_spec)) {
                for (Row& r : eng.alpha(uint32_t(e), ys)) rows.push_back(std::move(r));
            }
        } else if (chk == "set") {
            for (const auto& [name, set] : sets)
                for (double t : ts) rows.push_back(eng.set_bound(set.h, t, name));
        } else if (chk == "talagrand") {
            for (const auto& [name, set] : sets)
                for (double t : ts) rows.push_back(eng.talagrand(set.h, t, name));
        }
    }
    return emit(rows, cfg.out, cfg.seed);
}

SweepConfig sweep_from_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) die("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const std::exception& e) {
        die("malformed sweep spec: " + std::string(e.what()));
    }
    SweepConfig cfg;
    if (j.contains("dist")) {
        if (j["dist"].is_string()) {
            cfg.dist.path = j["dist"].get<std::string>();
        } else if (j["dist"].is_object()) {
            const auto& d = j["dist"];
            cfg.dist.kind = d.value("kind", std::string());
            cfg.dist.n = d.value("n", 0u);
            cfg.dist.eps = d.value("eps", 0.0);
            cfg.dist.initial_p0 = d.value("initial_p0", 0.5);
            cfg.dist.seed = d.value("seed", uint64_t(0));
            if (d.contains("p0")) {
                std::string csv;
                for (const auto& v : d["p0"])
                    csv += (csv.empty() ? "" : ",") + fmt(v.get<double>());
                cfg.dist.p0_list = csv;
            }
            if (d.contains("rows")) {
                std::string rows;
                for (const auto& row : d["rows"]) {
                    if (!rows.empty()) rows += ';';
                    rows += fmt(row[0].get<double>()) + "," + fmt(row[1].get<double>());
                }
                cfg.dist.rows_list = rows;
            }
        }
    }
    cfg.y_spec = j.value("y", cfg.y_spec);
    cfg.t_spec = j.value("t", cfg.t_spec);
    cfg.c_spec = j.value("c", cfg.c_spec);
    cfg.eps_spec = j.value("eps_enlarge", cfg.eps_spec);
    if (j.contains("checks")) {
        std::string csv;
        for (const auto& c : j["checks"]) csv += (csv.empty() ? "" : ",") + c.get<std::string>();
        cfg.checks_csv = csv;
    }
    cfg.set_path = j.value("set", cfg.set_path);
    cfg.sets_spec = j.value("sets", cfg.sets_spec);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out = j.value("out", cfg.out);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubeconc: exact concentration bounds on the Boolean cube"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write a distribution JSON file");
    DistSpec gen_spec;
    std::string gen_out;
    add_dist_flags(gen, gen_spec);
    gen->add_option("--out", gen_out, "output path")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "run a single check");
    SweepConfig eval_cfg;
    std::string eval_check;
    add_dist_flags(eval, eval_cfg.dist);
    eval->add_option("--check", eval_check,
                     "one of inductive|smallvar|pc|count|set|alpha|tail|talagrand")
        ->required();
    eval->add_option("--y", eval_cfg.y_spec, "bit string, 'all', or 'sample:K'");
    eval->add_option("--t", eval_cfg.t_spec, "t grid a:b:step, value, or list");
    eval->add_option("--c", eval_cfg.c_spec, "deviation thresholds for tail");
    eval->add_option("--eps-int", eval_cfg.eps_spec, "enlargement radii for alpha");
    eval->add_option("--set", eval_cfg.set_path, "set JSON for set/talagrand");
    eval->add_option("--sets", eval_cfg.sets_spec, "'sample:K' random sets");
    eval->add_option("--seed", eval_cfg.seed, "seed for y/set sampling");
    eval->add_option("--out", eval_cfg.out, "CSV output path (stdout if omitted)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a grid of checks and emit CSV");
    SweepConfig sweep_cfg;
    std::string sweep_spec_path;
    add_dist_flags(sweep, sweep_cfg.dist);
    sweep->add_option("--spec", sweep_spec_path, "sweep spec JSON file");
    sweep->add_option("--y", sweep_cfg.y_spec, "bit string, 'all', or 'sample:K'");
    sweep->add_option("--t", sweep_cfg.t_spec, "t grid a:b:step, value, or list");
    sweep->add_option("--c", sweep_cfg.c_spec, "deviation thresholds for tail (default: t grid)");
    sweep->add_option("--eps-int", sweep_cfg.eps_spec, "enlargement radii for alpha");
    sweep->add_option("--checks", sweep_cfg.checks_csv, "comma list of checks");
    sweep->add_option("--set", sweep_cfg.set_path, "set JSON for set/talagrand");
    sweep->add_option("--sets", sweep_cfg.sets_spec, "'sample:K' random sets");
    sweep->add_option("--seed", sweep_cfg.seed, "sweep seed");
    sweep->add_option("--out", sweep_cfg.out, "CSV output path (stdout if omitted)");

    // alpha
    auto* alpha = app.add_subcommand("alpha", "concentration function at tiny n");
    SweepConfig alpha_cfg;
    alpha_cfg.y_spec = "sample:1";
    add_dist_flags(alpha, alpha_cfg.dist);
    alpha->add_option("--eps-int", alpha_cfg.eps_spec, "enlargement radii (integers)");
    alpha->add_option("--y", alpha_cfg.y_spec, "y for the median chain");
    alpha->add_option("--seed", alpha_cfg.seed, "seed for y sampling");
    alpha->add_option("--out", alpha_cfg.out, "CSV output path (stdout if omitted)");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo tail estimate");
    DistSpec mc_dist;
    std::string mc_y = "sample:1";
    double mc_c = 1.0, mc_delta = 0.01;
    uint64_t mc_samples = 100000, mc_seed = 0;
    std::string mc_out;
    add_dist_flags(mc, mc_dist);
    mc->add_option("--y", mc_y, "bit string, 'all', or 'sample:K'");
    mc->add_option("--c", mc_c, "deviation threshold")->required();
    mc->add_option("--samples", mc_samples, "sample count");
    mc->add_option("--seed", mc_seed, "RNG seed");
    mc->add_option("--delta", mc_delta, "confidence parameter");
    mc->add_option("--out", mc_out, "CSV output path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            DistHandle dist = open_dist(gen_spec);
            check(cubeconc_dist_write_json(dist.h, gen_out.c_str()), "writing " + gen_out);
            return 0;
        }
        if (eval->parsed()) {
            eval_cfg.checks_csv = eval_check;
            return run_sweep(eval_cfg);
        }
        if (sweep->parsed()) {
            if (!sweep_spec_path.empty()) {
                SweepConfig cfg = sweep_from_json(sweep_spec_path);
                if (!sweep_cfg.out.empty()) cfg.out = sweep_cfg.out;
                return run_sweep(cfg);
            }
            return run_sweep(sweep_cfg);
        }
        if (alpha->parsed()) {
            alpha_cfg.checks_csv = "alpha";
            return run_sweep(alpha_cfg);
        }
        if (mc->parsed()) {
            DistHandle dist = open_dist(mc_dist);
            Engine eng(dist.h);
            std::mt19937_64 rng(mc_seed);
            std::vector<Row> rows;
            for (uint64_t y : select_y(mc_y, eng.n, rng)) {
                rows.push_back(eng.mc(y, mc_c, mc_samples, mc_seed, mc_delta));
            }
            return emit(rows, mc_out, mc_seed);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
