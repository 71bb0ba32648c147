// Acceptance run: one line per criterion plus the bounded census.
// Exit status is 0 when the set of failing criteria equals the set given by
// --expect-fail (default empty).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "abvar/census.hpp"
#include "abvar/padic.hpp"
#include "quadratic_oracle.hpp"
#include "weil_gen.hpp"

using namespace abvar;

namespace {

struct Verdict {
    std::string id;
    bool pass;
};

std::vector<Verdict> results;

void line(const std::string& id, const std::string& title, bool pass, const std::string& detail, double secs) {
    results.push_back({id, pass});
    std::printf("[%s] %-4s %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

// "0+2+2+0 or 0+0+0+0" as a sorted set of sorted multisets
std::vector<std::vector<int>> normalize_entry(const std::string& s) {
    std::vector<std::vector<int>> alts;
    std::size_t pos = 0;
    for (;;) {
        auto next = s.find(" or ", pos);
        std::string alt = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        std::vector<int> v;
        std::stringstream ss(alt);
        std::string tok;
        while (std::getline(ss, tok, '+')) v.push_back(std::stoi(tok));
        std::sort(v.begin(), v.end());
        alts.push_back(v);
        if (next == std::string::npos) break;
        pos = next + 4;
    }
    std::sort(alts.begin(), alts.end());
    alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
    return alts;
}

Json ppav_json(const std::string& label, const ReportConfig& cfg) { return ppav_document(parse_label(label), cfg); }

// ---- criterion 1 --------------------------------------------------------

// Expected x^8+16 rows: index, T = conj T, cond2 (-1 when not conjugation stable),
// ppav entry.
struct TableRow {
    long index;
    bool stable;
    int cond2;
    std::string ppav;
};

const std::vector<TableRow> table_rows = {
    {1, true, 1, "1"},
    {2, true, 1, "1"},
    {4, true, 0, "0"},
    {4, true, 1, "1"},
    {4, true, 0, "0+0"},
    {8, true, 0, "0+2+0+0"},
    {8, false, -1, "0"},
    {8, false, -1, "0"},
    {16, true, 0, "0"},
    {16, true, 0, "2 or 0"},
    {16, true, 0, "0+0+0+0"},
    {32, true, 0, "0 or 2"},
    {32, true, 0, "1+1 or 0+0"},
    {32, true, 0, "0+2+2+0 or 0+0+0+0"},
    {64, false, -1, "0"},
    {64, true, 0, "0+0+0+0"},
    {64, false, -1, "0"},
    {128, true, 0, "0+0+0+0"},
    {256, true, 0, "0+0+4+4 or 0+0+0+0"},
};

Json criterion1(const ReportConfig& cfg) {
    Timer t;
    Json doc = ppav_json("4.2.a_a_a_a", cfg);
    const auto& orders = doc.at("orders");
    const auto& rows = table_rows;
    std::vector<std::string> problems;
    if (orders.size() != 19) problems.push_back("order count " + std::to_string(orders.size()));
    int stable = 0, cond2 = 0;
    for (const auto& o : orders) {
        stable += o.at("conj_stable").get<bool>();
        cond2 += o.at("cond2").is_boolean() && o.at("cond2").get<bool>();
    }
    if (stable != 15) problems.push_back("conj stable " + std::to_string(stable));
    if (cond2 != 3) problems.push_back("cond2 " + std::to_string(cond2));

    // Rows are assigned to computed orders of the same index by a perfect
    // matching on (T = conj T, cond2, ppav entry).
    auto agrees = [&](const TableRow& row, const Json& o) {
        if (o.at("conj_stable").get<bool>() != row.stable) return false;
        if (row.cond2 >= 0) {
            if (!o.at("cond2").is_boolean() || o.at("cond2").get<bool>() != bool(row.cond2)) return false;
        } else if (!o.at("cond2").is_null()) {
            return false;
        }
        return normalize_entry(o.at("ppav").get<std::string>()) == normalize_entry(row.ppav);
    };
    int agree = 0;
    std::set<long> indices;
    for (const auto& r : rows) indices.insert(r.index);
    for (long idx : indices) {
        std::vector<int> rs, os;
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (rows[r].index == idx) rs.push_back(int(r));
        for (std::size_t i = 0; i < orders.size(); ++i)
            if (orders[i].at("index").get<long>() == idx) os.push_back(int(i));
        if (rs.size() != os.size()) {
            problems.push_back("index " + std::to_string(idx) + " has " + std::to_string(os.size()) + " orders");
            continue;
        }
        int best = 0;
        std::sort(os.begin(), os.end());
        do {
            int hits = 0;
            for (std::size_t k = 0; k < rs.size(); ++k) hits += agrees(rows[rs[k]], orders[os[k]]);
            best = std::max(best, hits);
        } while (std::next_permutation(os.begin(), os.end()));
        agree += best;
        if (best != int(rs.size())) {
            std::string got;
            for (int i : os) got += (got.empty() ? "" : ", ") + orders[i].at("ppav").get<std::string>();
            problems.push_back("index " + std::to_string(idx) + " computed " + got);
        }
    }
    std::string detail = std::to_string(orders.size()) + " orders, " + std::to_string(agree) +
                         "/19 expected rows matched within their index, " + std::to_string(stable) +
                         " conj stable, " + std::to_string(cond2) +
                         " pass cond2; tolerance exact";
    for (const auto& p : problems) detail += "; " + p;
    line("1", "x^8+16 order table (4.2.a_a_a_a)", problems.empty() && agree == 19, detail, t.secs());
    return doc;
}

// ---- criterion 2 --------------------------------------------------------

std::string vec_string(const Json& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x.dump();
    return "(" + s + ")";
}

Json criterion2(const ReportConfig& cfg) {
    Timer t;
    Json doc = ppav_json("3.3.ab_g_ag", cfg);
    std::vector<std::string> problems, facts;
    long rw = doc.at("rw_index").get<long>();
    if (rw != 18) problems.push_back("[O_L:R_w] = " + std::to_string(rw));
    std::set<long> idx;
    for (const auto& o : doc.at("orders")) idx.insert(o.at("index").get<long>());
    if (idx != std::set<long>{1, 2, 3, 6, 9, 18}) problems.push_back("indices are not the divisors of 18");
    facts.push_back(std::to_string(doc.at("orders").size()) + " overorders, one per divisor of 18 (stated count 7)");
    for (const auto& o : doc.at("orders")) {
        long i = o.at("index").get<long>();
        std::string name = "S_" + std::to_string(i);
        const auto& cls = o.at("classes");
        if (i == 1 || i == 2) {
            bool good = o.at("outcome") == "determined" && o.at("counts") == Json::parse("[[1,1]]");
            if (!good) problems.push_back(name + " is " + o.at("ppav").get<std::string>());
        } else if (i == 3 || i == 6) {
            bool good = true;
            for (const auto& alt : o.at("counts"))
                for (const auto& c : alt) good = good && c == 0;
            if (!good) problems.push_back(name + " is " + o.at("ppav").get<std::string>());
        } else {
            std::size_t types = cls.empty() ? 0 : cls[0].at("sizes").size();
            bool good = cls.size() == 8;
            for (std::size_t k = 0; k < types; ++k) {
                std::vector<int> col;
                for (const auto& c : cls) col.push_back(c.at("sizes")[k].get<int>());
                std::sort(col.begin(), col.end());
                good = good && col == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1};
            }
            std::string sizes;
            for (const auto& c : cls) sizes += vec_string(c.at("sizes"));
            facts.push_back(name + ": " + std::to_string(cls.size()) + " classes, ppav " + o.at("ppav").get<std::string>() +
                            ", sizes per class over " + std::to_string(types) + " types " + sizes);
            if (!good) problems.push_back(name + " has " + std::to_string(cls.size()) + " classes, expected 8 with 4 ppav");
        }
    }
    std::string detail;
    for (const auto& f : facts) detail += (detail.empty() ? "" : "; ") + f;
    for (const auto& p : problems) detail += "; MISMATCH " + p;
    line("2", "Detailed low p-rank example (3.3.ab_g_ag)", problems.empty(), detail, t.secs());
    return doc;
}

// ---- criterion 3 --------------------------------------------------------

void criterion3(const ReportConfig& cfg) {
    Timer t;
    struct Case {
        std::string input;
        std::size_t types;
        long st, residue;
    };
    std::vector<Case> cases = {{"3.3.a_d_a", 8, 8, 0}, {"3 0 1 p=3", 2, 2, 2}, {"9 0 0 0 1 p=3", 4, 4, 2}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        Json d = rrc_document(parse_input(c.input), cfg);
        std::size_t n = d.at("types").size();
        long st = d.at("st_count"), res = d.at("residue_count");
        ok = ok && n == c.types && st == c.st && res == c.residue;
        detail += (detail.empty() ? "" : "; ") + c.input + ": ST " + std::to_string(st) + "/" + std::to_string(n) +
                  ", residue " + std::to_string(res) + "/" + std::to_string(n);
    }
    line("3", "RRC on (x^2+3)(x^4+9) and its factors", ok, detail + "; tolerance exact", t.secs());
}

// ---- criterion 4 --------------------------------------------------------

// Slope-0 roots: 2g minus the least i with p not dividing the x^i coefficient.
int p_rank_oracle(const RatPoly& h, long p) {
    for (long i = 0; i <= h.degree(); ++i)
        if (h.coeff(i).get_num() % p != 0) return int(h.degree() - i);
    return 0;
}

void criterion4() {
    Timer t;
    int a = p_rank(RatPoly{27, -9, 18, -6, 6, -1, 1}, Int(3));
    int b = p_rank(RatPoly{16, 0, 0, 0, 0, 0, 0, 0, 1}, Int(2));
    int b_oracle = p_rank_oracle(RatPoly{16, 0, 0, 0, 0, 0, 0, 0, 1}, 2);
    std::mt19937_64 rng(2024);
    int pairs = 0, bad = 0;
    while (pairs < 50) {
        long p = std::vector<long>{2, 3, 5, 7, 11}[rng() % 5];
        RatPoly u = random_weil(rng, p, 1 + int(rng() % 2)), v = random_weil(rng, p, 1 + int(rng() % 2));
        if (gcd(u, v).degree() != 0) continue;
        RatPoly uv = u * v;
        int f = p_rank(uv, Int(p));
        if (f != p_rank(u, Int(p)) + p_rank(v, Int(p)) || f != p_rank_oracle(uv, p)) ++bad;
        ++pairs;
    }
    bool ok = a == 1 && b == 0 && b_oracle == 0 && bad == 0;
    line("4", "p-rank", ok,
         "3.3.ab_g_ag: " + std::to_string(a) + ", 4.2.a_a_a_a: " + std::to_string(b) + " (Newton polygon oracle " +
             std::to_string(b_oracle) + "), additivity on " + std::to_string(pairs) + " coprime pairs: " +
             std::to_string(bad) + " failures",
         t.secs());
}

// ---- criterion 5 --------------------------------------------------------

void criterion5() {
    Timer t;
    int inputs = 0, classes = 0, checks = 0, bad = 0;
    for (long p : {3, 5, 7}) {
        long bound = long(std::floor(2 * std::sqrt(double(p))));
        for (long a = -bound; a <= bound; ++a) {
            if (a * a >= 4 * p) continue;
            auto L = EtaleAlgebra::make(RatPoly{p, -a, 1}, Int(p));
            auto rep = run_pipeline(L);
            ++inputs;
            if (rep.orbit.size() != rep.types.size()) ++bad;
            for (const auto& o : rep.orders) {
                if (o.outcome != abvar::Outcome::Determined) ++bad;
                for (const auto& c : o.classes) {
                    ++classes;
                    for (std::size_t k = 0; k < rep.orbit.size(); ++k) {
                        const auto& phi = rep.types[rep.orbit[k]];
                        ++checks;
                        if (c.sizes.at(k) != 1 || quadratic_ppav_oracle(*L, c.ideal, phi) != 1) ++bad;
                    }
                    if (c.representatives.size() != 1) ++bad;
                    for (const auto& lam : c.representatives)
                        if (check_polarization(*L, c.ideal, lam, rep.types[rep.base_type], true).degree != 1) ++bad;
                }
            }
        }
    }
    line("5", "Elliptic sweep p in {3,5,7}", bad == 0 && inputs > 0,
         std::to_string(inputs) + " inputs, " + std::to_string(classes) + " classes, " + std::to_string(checks) +
             " (class, CM-type) pairs against the covolume oracle, " + std::to_string(bad) + " failures",
         t.secs());
}

// ---- criteria 6 and 7 ---------------------------------------------------

struct SuiteRun {
    std::string exe, filter;
};

// Runs doctest suites and sums their assertion counts.
void run_suites(const std::string& id, const std::string& title, const std::vector<SuiteRun>& runs) {
    Timer t;
    long asserts = 0, failed = 0, cases = 0;
    bool ok = true;
    for (const auto& r : runs) {
        std::string cmd = "\"" + r.exe + "\" --no-version --test-case=\"" + r.filter + "\" 2>&1";
        FILE* f = ::popen(cmd.c_str(), "r");
        std::string out;
        char buf[4096];
        while (f && std::fgets(buf, sizeof buf, f)) out += buf;
        int status = f ? ::pclose(f) : -1;
        long tc = 0, a = 0, fl = 0;
        auto tpos = out.find("test cases:"), apos = out.find("assertions:");
        if (tpos != std::string::npos) std::sscanf(out.c_str() + tpos, "test cases: %ld", &tc);
        if (apos != std::string::npos) {
            std::sscanf(out.c_str() + apos, "assertions: %ld", &a);
            auto fpos = out.find("passed |", apos);
            if (fpos != std::string::npos) std::sscanf(out.c_str() + fpos, "passed | %ld failed", &fl);
        }
        if (status != 0 || tc == 0) ok = false;
        cases += tc;
        asserts += a;
        failed += fl;
    }
    line(id, title, ok && failed == 0,
         std::to_string(cases) + " suites, " + std::to_string(asserts) + " assertions, " + std::to_string(failed) +
             " failures",
         t.secs());
}

// ---- criterion 8 --------------------------------------------------------

std::vector<std::pair<bool, bool>> verdicts(const Json& d) {
    std::vector<std::pair<bool, bool>> v;
    for (const auto& t : d.at("types")) v.push_back({t.at("st").get<bool>(), t.at("residue").get<bool>()});
    return v;
}

void criterion8(const ReportConfig& cfg, const Json& table_doc, const Json& detail_doc) {
    Timer t;
    bool same = table_doc.dump() == ppav_json("4.2.a_a_a_a", cfg).dump() &&
                detail_doc.dump() == ppav_json("3.3.ab_g_ag", cfg).dump();
    Json r1 = rrc_document(parse_label("3.3.a_d_a"), cfg);
    same = same && r1.dump() == rrc_document(parse_label("3.3.a_d_a"), cfg).dump();
    ReportConfig twice = cfg;
    twice.pipeline.precision *= 2;
    int compared = 0;
    bool stable = true;
    for (const char* s : {"3.3.a_d_a", "3 0 1 p=3", "9 0 0 0 1 p=3", "3.3.ab_g_ag", "4.2.a_a_a_a"}) {
        auto w = parse_input(s);
        stable = stable && verdicts(rrc_document(w, cfg)) == verdicts(rrc_document(w, twice));
        ++compared;
    }
    line("8", "Determinism", same && stable,
         std::string("criteria 1-3 documents byte-identical across two runs: ") + (same ? "yes" : "no") +
             "; RRC verdicts at precision " + std::to_string(cfg.pipeline.precision) + " and " +
             std::to_string(twice.pipeline.precision) + " identical on " + std::to_string(compared) +
             " inputs: " + (stable ? "yes" : "no"),
         t.secs());
}

// ---- census -------------------------------------------------------------

void bounded_census(const ReportConfig& cfg) {
    Timer t;
    CensusConfig cc;
    cc.g = 2;
    cc.q = 3;
    cc.bounds = {3, 9};
    cc.jobs = int(std::max(1u, std::thread::hardware_concurrency()));
    cc.report = cfg;
    Json s = run_census(cc);
    long viol = s.at("invariant_violations").get<long>();
    bool ok = viol == 0 && s.at("errors").empty() && s.at("labels").get<long>() > 0;
    line("C", "Census g=2 q=3 |a1|<=3 |a2|<=9", ok,
         std::to_string(s.at("candidates").get<long>()) + " coefficient vectors, " +
             std::to_string(s.at("labels").get<long>()) + " valid labels, " + std::to_string(s.at("errors").size()) +
             " error kinds, " + std::to_string(viol) + " invariant violations, outcomes " + s.at("order_outcomes").dump(),
         t.secs());
}

}  // namespace

int main(int argc, char** argv) {
    std::set<std::string> expected;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--expect-fail") {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) expected.insert(tok);
        }

    ReportConfig cfg;
    Json table_doc = criterion1(cfg);
    Json detail_doc = criterion2(cfg);
    criterion3(cfg);
    criterion4();
    criterion5();
    run_suites("6", "Property suites",
               {{ABVAR_TEST_NUMKERNEL, "*(property)*"},
                {ABVAR_TEST_POLY, "*(property)*"},
                {ABVAR_TEST_ETALE, "*(property)*"},
                {ABVAR_TEST_ORDERS, "*(property)*"},
                {ABVAR_TEST_CMTYPES, "CM-type invariants"},
                {ABVAR_TEST_POL, "P1 sizes do not depend*"},
                {ABVAR_TEST_POL, "degree is multiplicative"},
                {ABVAR_TEST_CLI, "label round trip property"}});
    run_suites("7", "Imaginary quadratic brute-force oracles",
               {{ABVAR_TEST_CLASSES, "imaginary quadratic classes*"},
                {ABVAR_TEST_ORDERS, "overorder enumeration matches subgroup enumeration"},
                {ABVAR_TEST_POL, "P1 on imaginary quadratic orders*"}});
    criterion8(cfg, table_doc, detail_doc);
    bounded_census(cfg);

    std::set<std::string> failing;
    for (const auto& r : results)
        if (!r.pass) failing.insert(r.id);
    auto join = [](const std::set<std::string>& s) {
        std::string out;
        for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
        return out.empty() ? std::string("none") : out;
    };
    std::printf("acceptance: %zu/%zu pass; failing: %s; expected failing: %s\n", results.size() - failing.size(),
                results.size(), join(failing).c_str(), join(expected).c_str());
    return failing == expected ? 0 : 1;
}
