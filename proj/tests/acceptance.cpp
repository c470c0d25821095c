// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <unistd.h>

#include "support.hpp"

using namespace nftest;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Criterion {
public:
    explicit Criterion(std::string title) : title_(std::move(title)) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    template <class A, class B>
    void equal(const A& actual, const B& expected, const std::string& what) {
        if (!(actual == expected)) {
            std::ostringstream s;
            s << what << ": got " << actual << ", expected " << expected;
            failures_.push_back(s.str());
        }
    }
    void note(std::string n) { notes_.push_back(std::move(n)); }

    bool report(int number) const {
        bool ok = failures_.empty();
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title_;
        for (std::size_t i = 0; i < notes_.size(); ++i) std::cout << (i ? ", " : " (") << notes_[i];
        if (!notes_.empty()) std::cout << ")";
        std::cout << "\n";
        for (const auto& f : failures_) std::cout << "    " << f << "\n";
        return ok;
    }

private:
    std::string title_;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string ct(const CorpusRun& run, const char* m, const char* f) { return run.fn(m, f).calltype.str(); }

std::set<std::string> io(const CorpusRun& run, const char* m, const char* f) {
    std::set<std::string> out;
    for (const auto& e : run.fn(m, f).inout) out.insert(e.str());
    return out;
}

std::string show(const std::set<std::string>& s) {
    std::string out = "{";
    for (const auto& x : s) out += (out.size() > 1 ? ", " : "") + x;
    return out + "}";
}

bool golden_calltypes(int n) {
    Criterion c("golden call types");
    auto t0 = Clock::now();
    auto run = analyze_corpus();
    double secs = seconds_since(t0);
    const std::string cons = "({Cons(_,_)})";
    for (const char* f : {"head", "tail", "last"}) c.equal(ct(run, "Mini", f), cons, std::string("CT(") + f + ")");
    c.equal(ct(run, "Mini", "null"), std::string("(_)"), "CT(null)");
    c.equal(ct(run, "Mini", "k"), std::string("({0,1})"), "CT(k)");
    c.equal(run.fn("Mini", "hd").initial.str(), std::string("(_)"), "initial CT(hd)");
    c.equal(ct(run, "Mini", "hd"), cons, "CT(hd)");
    c.equal(status_name(run.fn("Mini", "hd").status), std::string("refined"), "status(hd)");
    c.equal(run.module("Mini").result.iterations, 2, "iterations of the hd/head module");
    c.equal(ct(run, "Mini", "hdfree"), std::string("failing"), "CT(hdfree)");
    for (const char* f : {"readCmd", "f"}) {
        c.equal(ct(run, "Mini", f), std::string("(_)"), std::string("CT(") + f + ")");
        c.equal(status_name(run.fn("Mini", f).status), std::string("verified"), std::string("status(") + f + ")");
    }
    for (const auto& f : run.module("Split").result.functions)
        c.expect(f.status != Status::Failing, "Split." + f.name.name + " is failing");
    c.equal(ct(run, "Split", "split_ys"), cons, "CT(split_ys)");
    c.equal(ct(run, "Split", "split_yss"), cons, "CT(split_yss)");
    c.expect(secs < 1.0, "analysis took " + std::to_string(secs) + " s");
    c.note("corpus analyzed in " + std::to_string(static_cast<int>(secs * 1000)) + " ms");
    return c.report(n);
}

bool golden_inout(int n) {
    Criterion c("golden in/out types");
    auto run = analyze_corpus();
    auto check = [&](const char* m, const char* f, std::set<std::string> expected) {
        auto got = io(run, m, f);
        if (got != expected) c.expect(false, std::string("IO(") + f + ") = " + show(got) + ", expected " + show(expected));
    };
    check("Mini", "null", {"({Nil}) -> {True}", "({Cons(_,_)}) -> {False}"});
    check("Mini", "head", {"({Cons(_,_)}) -> _"});
    check("Mini", "loop", {"() -> {}"});
    check("Split", "split", {"(_, {Nil}) -> {Cons(_,_)}", "(_, {Cons(_,_)}) -> {Cons(_,_)}"});
    check("Mini", "k", {"({0}) -> {'a'}", "({1}) -> {'b'}"});
    return c.report(n);
}

struct SweepTotals {
    int functions = 0;
    int tuples = 0;
    int observations = 0;
    int cutoffs = 0;
    std::vector<std::string> counterexamples;
    double seconds = 0;
};

template <class Check>
SweepTotals sweep(long budget, Check&& check) {
    SweepTotals s;
    auto t0 = Clock::now();
    auto run = analyze_corpus();
    auto setup = make_oracle(run.ws, budget, 4);
    run_with_large_stack([&] {
        for (const auto& m : run.ws.modules) {
            for (const auto& f : m->result.functions) {
                if (f.external) continue;
                auto v = check(*setup.oracle, f);
                if (!v) continue;
                ++s.functions;
                s.tuples += v->tuples;
                s.observations += v->observations;
                s.cutoffs += v->cutoffs;
                for (const auto& ce : v->counterexamples) s.counterexamples.push_back(ce.str());
            }
        }
    });
    s.seconds = seconds_since(t0);
    return s;
}

bool calltype_sweep(int n) {
    Criterion c("call types are safe on every in-CT argument tuple (size 4, budget 10000)");
    auto s = sweep(10000, [](Oracle& o, const FunctionResult& f) -> std::optional<OracleVerdict> {
        if (f.calltype.failing) return std::nullopt;
        return check_calltype_oracle(o, f.name, f.calltype, 4);
    });
    for (const auto& ce : s.counterexamples) c.expect(false, ce);
    c.expect(s.tuples > 0, "no argument tuples evaluated");
    c.expect(s.seconds < 60, "sweep took " + std::to_string(s.seconds) + " s");
    c.note(std::to_string(s.functions) + " functions");
    c.note(std::to_string(s.tuples) + " tuples");
    c.note(std::to_string(s.cutoffs) + " cutoffs");
    c.note(std::to_string(static_cast<int>(s.seconds * 1000)) + " ms");
    return c.report(n);
}

bool inout_sweep(int n) {
    Criterion c("in/out types cover every observed value (size 3)");
    auto s = sweep(10000, [](Oracle& o, const FunctionResult& f) -> std::optional<OracleVerdict> {
        return check_inout_oracle(o, f.name, f.inout, 3);
    });
    for (const auto& ce : s.counterexamples) c.expect(false, ce);
    c.expect(s.observations > 0, "no values observed");
    c.expect(s.seconds < 60, "sweep took " + std::to_string(s.seconds) + " s");
    c.note(std::to_string(s.functions) + " functions");
    c.note(std::to_string(s.observations) + " values");
    c.note(std::to_string(static_cast<int>(s.seconds * 1000)) + " ms");
    return c.report(n);
}

bool depth_consistency(int n) {
    Criterion c("identical statuses and iteration counts at k = 1, 2, 5");
    std::map<int, CorpusRun> runs;
    for (int k : {1, 2, 5}) {
        auto t0 = Clock::now();
        runs.emplace(k, analyze_corpus(k));
        double secs = seconds_since(t0);
        c.expect(secs < 5, "k=" + std::to_string(k) + " took " + std::to_string(secs) + " s");
    }
    const auto& base = runs.at(1);
    for (int k : {2, 5}) {
        for (const auto& m : corpus_modules()) {
            const auto& a = base.module(m).result;
            const auto& b = runs.at(k).module(m).result;
            c.equal(b.iterations, a.iterations, m + " iterations at k=" + std::to_string(k));
            for (const auto& f : a.functions) {
                const auto* g = b.find(f.name.name);
                c.expect(g && g->status == f.status, m + "." + f.name.name + " changes status at k=" + std::to_string(k));
            }
        }
    }
    return c.report(n);
}

bool error_mode(int n) {
    Criterion c("error counts as failure only on request");
    auto lenient = analyze_corpus(1, false);
    c.equal(ct(lenient, "Errors", "headE"), std::string("(_)"), "default CT(headE)");
    c.expect(lenient.fn("Errors", "headOfEmpty").status != Status::Failing, "headE [] flagged by default");
    auto strict = analyze_corpus(1, true);
    c.equal(ct(strict, "Errors", "headE"), std::string("({Cons(_,_)})"), "CT(headE) with errors as failures");
    c.expect(strict.fn("Errors", "headOfEmpty").status == Status::Failing,
             "headE [] not flagged with errors as failures");
    return c.report(n);
}

bool lattice(int n) {
    Criterion c("lattice laws, 10000 cases each");
    auto t0 = Clock::now();
    int laws = 0;
    for (int k : {1, 2}) {
        for (const auto& r : lattice_laws(10000, k, 20261016 + k)) {
            ++laws;
            c.expect(r.violations == 0, "k=" + std::to_string(k) + " " + r.law + ": " + std::to_string(r.violations) +
                                            " violations, e.g. " + r.example);
        }
    }
    double secs = seconds_since(t0);
    c.expect(secs < 30, "took " + std::to_string(secs) + " s");
    c.note(std::to_string(laws) + " law runs at k=1,2");
    c.note(std::to_string(static_cast<int>(secs * 1000)) + " ms");
    return c.report(n);
}

std::string capture(const std::string& cmd) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return out;
    char buf[4096];
    while (auto got = std::fread(buf, 1, sizeof buf, p)) out.append(buf, got);
    pclose(p);
    return out;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

bool determinism(int n) {
    Criterion c("two analyze --format json runs differ only in time_ms");
    auto dir = fs::temp_directory_path() / ("nonfail-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string cmd = std::string(NONFAIL_BIN) + " analyze --format json -o " + dir.string();
    for (const auto& m : corpus_modules()) cmd += " " + corpus_path(m + ".fcir");
    auto a = lines_of(capture(cmd));
    auto b = lines_of(capture(cmd));
    fs::remove_all(dir);
    c.expect(!a.empty(), "no output");
    c.equal(a.size(), b.size(), "line count");
    int differing = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] == b[i]) continue;
        ++differing;
        c.expect(a[i].find("\"time_ms\"") != std::string::npos, "line " + std::to_string(i + 1) + " differs");
    }
    c.note(std::to_string(a.size()) + " lines, " + std::to_string(differing) + " timing lines differ");
    return c.report(n);
}

}  // namespace

int main() {
    std::vector<bool (*)(int)> criteria = {golden_calltypes, golden_inout,      calltype_sweep, inout_sweep,
                                           depth_consistency, error_mode,       lattice,             determinism};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        bool ok = false;
        try {
            ok = criteria[i](static_cast<int>(i + 1));
        } catch (const std::exception& e) {
            std::cout << "FAIL criterion " << i + 1 << ": threw " << e.what() << "\n";
        }
        failed += ok ? 0 : 1;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
