// Command-line front end: recognition, partitions, LT, exact counts, greedy
// traces, distribution tables, boosted runs, density and validation
// experiments, and the k-ary tools.  JSON by default, CSV via --format csv.
// Exit codes: 0 ok, 1 a check failed, 2 usage error, 3 resource limit.

#include "shufsq/buffer.hpp"
#include "shufsq/decomposition.hpp"
#include "shufsq/experiments.hpp"
#include "shufsq/greedy.hpp"
#include "shufsq/kary.hpp"
#include "shufsq/qtable.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using nlohmann::json;
using namespace shufsq;

namespace {

struct Global {
    uint64_t seed = 1;
    long trials = 1000;
    int threads = 1;
    std::string format = "json";
    std::string out;
};

int emit(const std::string& text, const Global& g) {
    if (g.out.empty()) {
        std::cout << text << "\n";
        return 0;
    }
    std::ofstream f(g.out);
    f << text << "\n";
    if (!f) {
        std::cerr << "cannot write " << g.out << "\n";
        return 2;
    }
    return 0;
}

int emit_result(const json& j, const std::string& csv, const Global& g) {
    return emit(g.format == "csv" ? csv : j.dump(2), g);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json partition_json(const std::vector<uint32_t>& a1, const std::vector<uint32_t>& a2) {
    return json{{"A1", a1}, {"A2", a2}};
}

// ---------- subcommand bodies ----------

int cmd_recognize(const std::string& word, const Global& g) {
    Bits s = parse_bits(word);
    if (s.size() > 48)
        throw ResourceLimit("exact recognition is limited to 48 letters; use `partition`");
    auto t0 = std::chrono::steady_clock::now();
    bool sq = recognize(s);
    json j{{"word", word},
           {"is_shuffle_square", sq},
           {"timings", {{"millis", ms_since(t0)}}}};
    std::string csv = "word,is_shuffle_square\n" + word + "," + (sq ? "1" : "0");
    return emit_result(j, csv, g);
}

int cmd_partition(const std::string& word, long tail_window, const Global& g) {
    Bits s = parse_bits(word);
    auto t0 = std::chrono::steady_clock::now();
    json j{{"word", word}};
    bool sq = false;
    std::vector<uint32_t> a1, a2;
    if (s.size() <= Word::max_len) {
        auto p = extract_partition(parse_word(word));
        j["method"] = "exact";
        if (p) {
            sq = true;
            a1 = p->a1;
            a2 = p->a2;
        }
    } else {
        PartitionerOptions opt;
        if (tail_window > 0) opt.tail_window = tail_window;
        PartitionResult r = constructive_partition(s, opt);
        j["method"] = "constructive";
        j["cycles"] = r.cycles;
        j["verified"] = r.verified;
        j["tail_len"] = r.tail_len;
        if (r.success) {
            sq = true;
            a1 = r.a1;
            a2 = r.a2;
        }
    }
    j["is_shuffle_square"] = sq;
    if (sq) j["partition"] = partition_json(a1, a2);
    j["timings"] = {{"millis", ms_since(t0)}};
    std::ostringstream csv;
    csv << "word,is_shuffle_square,n\n" << word << "," << (sq ? 1 : 0) << "," << s.size();
    return emit_result(j, csv.str(), g);
}

int cmd_lt(const std::string& word, int max_deletions, const Global& g) {
    Bits s = parse_bits(word);
    if (s.size() > 24) throw ResourceLimit("exact LT is limited to 24 letters");
    auto t0 = std::chrono::steady_clock::now();
    int v = lt(s, max_deletions);
    json j{{"word", word}, {"lt", v}, {"timings", {{"millis", ms_since(t0)}}}};
    std::string csv = "word,lt\n" + word + "," + std::to_string(v);
    return emit_result(j, csv, g);
}

int cmd_count(int k, int n, const Global& g) {
    uint64_t count = 0;
    if (k == 2) {
        if (n > 14) throw ResourceLimit("binary exhaustive count is limited to n <= 14");
        count = count_squares(n);
    } else {
        KaryCount r = count_shuffle_squares(k, n);
        if (r.too_large) throw ResourceLimit("k^(2n) exceeds the enumeration budget");
        count = r.count;
    }
    json j{{"k", k}, {"n", n}, {"count", count}};
    std::ostringstream csv;
    csv << "k,n,count\n" << k << "," << n << "," << count;
    return emit_result(j, csv.str(), g);
}

int cmd_greedy_trace(const std::string& word, const Global& g) {
    Word s = parse_word(word);
    auto tr = greedy_trace(s);
    json arr = json::array();
    std::ostringstream csv;
    csv << "t,buffer\n";
    for (size_t t = 0; t < tr.size(); ++t) {
        arr.push_back(tr[t].str());
        csv << t << "," << tr[t].str() << "\n";
    }
    json j{{"word", word}, {"trace", arr}};
    return emit_result(j, csv.str(), g);
}

int cmd_qtable(int t, int L, int checks, const std::string& shape, long t_max, const Global& g) {
    if (L <= 0) L = t;
    if (t > 4000 || L > 4000) throw ResourceLimit("qtable dump is limited to t, L <= 4000");
    QTableD qt(L);
    for (int i = 0; i < t; ++i) qt.step();

    std::ostringstream csv;
    csv << "t,lead,a,b,prob\n";
    csv << t << ",0,0,0," << qt.eps() << "\n";
    for (int a = 1; a <= std::min(L, t); ++a)
        for (int b = 0; a + b <= std::min(L, t); ++b) {
            double p = qt.q(a, b);
            if (p <= 0) continue;
            csv << t << ",1," << a << "," << b << "," << p << "\n";
            csv << t << ",0," << a << "," << b << "," << p << "\n";
        }

    json j{{"t", t}, {"L", L}, {"eps", qt.eps()}, {"lost_mass", qt.lost()}};
    bool ok = true;
    if (checks > 0) {
        long cf = qtable_check_closed_forms(checks);
        long mono = qtable_check_monotone(checks);
        ok = cf == checks && mono == checks;
        j["checks"] = {{"t_max", checks},
                       {"closed_forms", cf},
                       {"monotone", mono},
                       {"passed", ok}};
    }
    if (!shape.empty()) {
        int a = 0, b = 0;
        if (std::sscanf(shape.c_str(), "%d,%d", &a, &b) != 2 || a < 1 || b < 0)
            throw CLI::ValidationError("--estimate-c expects \"a,b\" with a >= 1");
        CEstimate est = estimate_c(a, b, t_max);
        j["estimate_c"] = {{"a", a},
                           {"b", b},
                           {"t_max", t_max},
                           {"ratios", est.ratios},
                           {"extrapolated", est.extrapolated},
                           {"at_tmax", est.at_tmax},
                           {"lost", est.lost},
                           {"L", est.L}};
    }
    int rc = emit_result(j, csv.str(), g);
    return rc != 0 ? rc : (ok ? 0 : 1);
}

const char* end_name(CycleEnd e) {
    switch (e) {
    case CycleEnd::Indicator: return "indicator";
    case CycleEnd::Turnover: return "turnover";
    case CycleEnd::Activation: return "activation";
    default: return "exhausted";
    }
}

int cmd_boosted_run(int n, long trials, long k_init, long tail_window, const Global& g) {
    json jtrials = json::array();
    // aggregate per starting buffer length k: drift moments and long-cycle rate
    struct Agg {
        long cnt = 0;
        double s = 0, ss = 0;
        long tail = 0;
    };
    std::map<long, Agg> agg;
    for (long i = 0; i < trials; ++i) {
        RngStream rng(g.seed, uint64_t(i));
        Bits s = random_even_parity_bits(n, rng);
        BoostedRun run = run_boosted(s);
        json recs = json::array();
        long prevX = 0;
        long prevT = 0;
        for (const auto& r : run.records) {
            recs.push_back({{"m", r.m},
                            {"X", r.X},
                            {"T", r.T},
                            {"end_phase", end_name(r.end)},
                            {"side", r.side}});
            long k = prevX == 0 ? 1 : prevX;
            Agg& a = agg[k];
            ++a.cnt;
            double d = double(r.X - k);
            a.s += d;
            a.ss += d * d;
            if (double(r.T - prevT) >= 4.5 * double(k)) ++a.tail;
            prevX = r.X;
            prevT = r.T;
        }
        PartitionerOptions opt;
        if (tail_window > 0) opt.tail_window = tail_window;
        PartitionResult pr = constructive_partition(s, opt);
        json jt{{"trial", i},
                {"records", recs},
                {"final_len", run.final_len},
                {"success", pr.success},
                {"verified", pr.verified}};
        if (pr.success) jt["partition"] = partition_json(pr.a1, pr.a2);
        jtrials.push_back(std::move(jt));
    }
    json j{{"n", n},
           {"trials", trials},
           {"tail_window", tail_window > 0 ? tail_window : PartitionerOptions{}.tail_window},
           {"results", jtrials}};
    if (k_init > 0) {
        CycleStats st = boosted_cycle_stats(k_init, std::max<long>(trials, 1000), g.seed);
        j["cycle_stats"] = {{"k", st.k},
                            {"cycles", st.cycles},
                            {"mean_drift", st.mean_drift},
                            {"mean_sq_drift", st.mean_sq_drift},
                            {"p_long", st.p_long},
                            {"p_far", st.p_far}};
    }
    std::ostringstream csv;
    csv << "k,mean_dX,var_dX,tail_freq\n";
    for (const auto& [k, a] : agg) {
        double m = a.s / double(a.cnt);
        csv << k << "," << m << "," << (a.ss / double(a.cnt) - m * m) << ","
            << double(a.tail) / double(a.cnt) << "\n";
    }
    return emit_result(j, csv.str(), g);
}

int cmd_density(int n, long trials, const std::string& mode, const Global& g) {
    DensityMode m;
    if (mode == "exhaustive")
        m = DensityMode::Exhaustive;
    else if (mode == "sampled")
        m = DensityMode::Sampled;
    else if (mode == "constructive")
        m = DensityMode::Constructive;
    else
        throw CLI::ValidationError("--mode must be exhaustive|sampled|constructive");
    DensityReport r = density_experiment(n, trials, m, g.seed);
    json j{{"n", r.n},
           {"mode", mode},
           {"rate", r.rate},
           {"even_parity_rate", r.even_parity_rate},
           {"stderr", r.stderr_},
           {"trials", r.trials}};
    if (m == DensityMode::Exhaustive) j["exact_count"] = r.exact_count;
    std::ostringstream csv;
    csv << "n,mode,rate,even_parity_rate,stderr,trials\n"
        << r.n << "," << mode << "," << r.rate << "," << r.even_parity_rate << "," << r.stderr_
        << "," << r.trials;
    return emit_result(j, csv.str(), g);
}

int cmd_validate(long k, long trials, const Global& g) {
    json checks = json::array();
    bool all = true;
    for (const MomentCheck& c : validate_claims(k, trials, g.seed)) {
        checks.push_back({{"name", c.name},
                          {"sample", c.sample},
                          {"target", c.target},
                          {"stderr", c.stderr_},
                          {"equality", c.equality},
                          {"pass", c.pass}});
        all = all && c.pass;
    }
    const std::pair<long, double> cases[] = {{50, 0.5}, {100, 0.3}, {20, 1.0}};
    for (auto [ck, eps] : cases) {
        StatReport r = chernoff_check(ck, eps, trials, g.seed);
        checks.push_back({{"name", r.name},
                          {"sample", r.estimate},
                          {"target", r.tolerance},
                          {"stderr", r.stderr_},
                          {"pass", r.pass},
                          {"note", r.note}});
        all = all && r.pass;
    }
    json j{{"k", k}, {"trials", trials}, {"checks", checks}, {"pass", all}};
    std::ostringstream csv;
    csv << "name,sample,target,stderr,pass\n";
    for (const auto& c : checks)
        csv << c["name"].get<std::string>() << "," << c["sample"].get<double>() << ","
            << c["target"].get<double>() << "," << c["stderr"].get<double>() << ","
            << (c["pass"].get<bool>() ? 1 : 0) << "\n";
    int rc = emit_result(j, csv.str(), g);
    return rc != 0 ? rc : (all ? 0 : 1);
}

int cmd_kary_count(int k, int n, const Global& g) { return cmd_count(k, n, g); }

int cmd_kary_boosted(int k, int n, long trials, double bias, const Global& g) {
    double sum_len = 0, sum_greedy = 0, sum_pairs = 0;
    long sound = 0, sound_checked = 0;
    for (long i = 0; i < trials; ++i) {
        RngStream rng(g.seed, uint64_t(i));
        KaryBoosted m(k);
        KWord s = sample_biased_word(k, n, bias, rng, &m);
        sum_len += double(m.w.size() - size_t(m.pairs()));
        sum_pairs += double(m.pairs());
        KWord gb;
        for (uint8_t c : s) gb = kary_greedy_step(gb, c);
        sum_greedy += double(gb.size());
        if (n <= int(KarySets::max_len)) {
            ++sound_checked;
            if (kary_boosted_sound(s, k)) ++sound;
        }
    }
    json j{{"k", k},
           {"n", n},
           {"trials", trials},
           {"mu_bias", bias},
           {"mean_final_len", sum_len / double(trials)},
           {"mean_pairs", sum_pairs / double(trials)},
           {"mean_greedy_len", sum_greedy / double(trials)}};
    if (sound_checked > 0) j["soundness_rate"] = double(sound) / double(sound_checked);
    std::ostringstream csv;
    csv << "k,n,bias,mean_final_len,mean_pairs,mean_greedy_len\n"
        << k << "," << n << "," << bias << "," << sum_len / double(trials) << ","
        << sum_pairs / double(trials) << "," << sum_greedy / double(trials);
    int rc = emit_result(j, csv.str(), g);
    if (rc != 0) return rc;
    return (sound_checked == 0 || sound == sound_checked) ? 0 : 1;
}

int cmd_alpha_bound(int k, double b, const Global& g) {
    auto a = alpha_bound(k, b);
    json j{{"k", k}, {"b", b > 0 ? b : std::sqrt(double(k)) + std::sqrt(double(k - 1))}};
    j["alpha"] = a ? json(*a) : json(nullptr);
    std::ostringstream csv;
    csv << "k,alpha\n" << k << "," << (a ? std::to_string(*a) : "none");
    return emit_result(j, csv.str(), g);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shuffle-square toolkit"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--trials", g.trials, "Monte Carlo trials");
    app.add_option("--threads", g.threads, "worker threads (reductions are deterministic)");
    app.add_option("--format", g.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", g.out, "write output to PATH");
    app.set_config("--config", "", "key=value config file");

    std::string word, shape, mode = "sampled";
    int n = 0, k = 2, L = 0, t = 12, checks = 0, maxdel = -1;
    long t_max = 1000, k_init = 0, tail_window = 0;
    double b = -1.0, bias = 0.0;

    auto* c_rec = app.add_subcommand("recognize", "exact shuffle-square recognition");
    c_rec->add_option("word", word, "binary word")->required();

    auto* c_part = app.add_subcommand("partition", "produce a witness partition");
    c_part->add_option("word", word, "binary word")->required();
    c_part->add_option("--tail-window", tail_window, "constructive tail window");

    auto* c_lt = app.add_subcommand("lt", "longest twins (exact)");
    c_lt->add_option("word", word, "binary word")->required();
    c_lt->add_option("--max-deletions", maxdel, "cap deletions (-1: none)");

    auto* c_cnt = app.add_subcommand("count", "exact |S_k(n)|");
    c_cnt->add_option("--n", n, "semi-length")->required();
    c_cnt->add_option("--k", k, "alphabet size");

    auto* c_tr = app.add_subcommand("greedy-trace", "greedy buffer after each prefix");
    c_tr->add_option("word", word, "binary word")->required();

    auto* c_qt = app.add_subcommand("qtable", "greedy buffer distribution table");
    c_qt->add_option("--t", t, "steps");
    c_qt->add_option("--L", L, "truncation length (default: t)");
    c_qt->add_option("--checks", checks, "verify closed forms/monotonicity up to this t");
    c_qt->add_option("--estimate-c", shape, "extrapolate the ratio for shape \"a,b\"");
    c_qt->add_option("--t-max", t_max, "checkpoint horizon for --estimate-c");

    auto* c_br = app.add_subcommand("boosted-run", "boosted cycles over random words");
    c_br->add_option("--n", n, "word length")->required();
    c_br->add_option("--k-init", k_init, "also report pure cycle stats at this k");
    c_br->add_option("--tail-window", tail_window, "partitioner tail window");

    auto* c_den = app.add_subcommand("density", "shuffle-square density");
    c_den->add_option("--n", n, "semi-length")->required();
    c_den->add_option("--mode", mode, "exhaustive|sampled|constructive");

    auto* c_val = app.add_subcommand("validate", "moment and tail-bound validators");
    c_val->add_option("--k", k, "cycle start length");

    auto* c_kc = app.add_subcommand("kary-count", "exact |S_k(n)| (k-ary engine)");
    c_kc->add_option("--k", k, "alphabet size")->required();
    c_kc->add_option("--n", n, "semi-length")->required();

    auto* c_kb = app.add_subcommand("kary-boosted", "paired-indicator machine statistics");
    c_kb->add_option("--k", k, "alphabet size")->required();
    c_kb->add_option("--n", n, "word length")->required();
    c_kb->add_option("--mu-bias", bias, "bias toward completing a pending pair");

    auto* c_ab = app.add_subcommand("alpha-bound", "growth-rate inequality threshold");
    c_ab->add_option("--k", k, "alphabet size")->required();
    c_ab->add_option("--b", b, "growth constant (default sqrt(k)+sqrt(k-1))");

    for (CLI::App* s : {c_rec, c_part, c_lt, c_cnt, c_tr, c_qt, c_br, c_den, c_val, c_kc, c_kb,
                        c_ab})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_rec->parsed()) return cmd_recognize(word, g);
        if (c_part->parsed()) return cmd_partition(word, tail_window, g);
        if (c_lt->parsed()) return cmd_lt(word, maxdel, g);
        if (c_cnt->parsed()) return cmd_count(k, n, g);
        if (c_tr->parsed()) return cmd_greedy_trace(word, g);
        if (c_qt->parsed()) return cmd_qtable(t, L, checks, shape, t_max, g);
        if (c_br->parsed()) return cmd_boosted_run(n, g.trials, k_init, tail_window, g);
        if (c_den->parsed()) return cmd_density(n, g.trials, mode, g);
        if (c_val->parsed()) return cmd_validate(k, g.trials, g);
        if (c_kc->parsed()) return cmd_kary_count(k, n, g);
        if (c_kb->parsed()) return cmd_kary_boosted(k, n, g.trials, bias, g);
        if (c_ab->parsed()) return cmd_alpha_bound(k, b, g);
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::length_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
