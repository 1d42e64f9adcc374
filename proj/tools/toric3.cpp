// toric3: exact computations on toric Fano varieties with Picard number
// three; spawns certificates that the `verify` subcommand re-checks.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "toric/bounds.hpp"
#include "toric/collections.hpp"
#include "toric/json_io.hpp"

using namespace toric;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

Json make_cert(const std::string& command, Json inputs, Json outputs, Json checks,
               const Clock& clock) {
    Json cert;
    cert["tool"] = "toric3";
    cert["tool_version"] = kVersion;
    cert["command"] = command;
    cert["inputs"] = std::move(inputs);
    cert["outputs"] = std::move(outputs);
    cert["checks"] = std::move(checks);
    cert["timing_ms"] = clock.ms();
    return cert;
}

Json check(const std::string& name, bool pass, Json witness = Json()) {
    Json c;
    c["name"] = name;
    c["status"] = pass ? "pass" : "fail";
    if (!witness.is_null()) c["witness"] = std::move(witness);
    return c;
}

bool all_pass(const Json& checks) {
    for (const auto& c : checks)
        if (c.at("status") != "pass") return false;
    return true;
}

void write_output(const Json& cert, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << cert.dump(2) << std::endl;
    } else {
        std::ofstream f(out_path);
        if (!f) throw ToricError("cannot open output file " + out_path);
        f << cert.dump(2) << std::endl;
    }
}

Json read_json_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return Json::parse(ss.str());
    }
    std::ifstream f(path);
    if (!f) throw ToricError("cannot open input file " + path);
    Json j;
    f >> j;
    return j;
}

// Accepts either a bare fan object or a certificate embedding one.
Json unwrap_fan_json(const Json& j) {
    if (j.contains("rays")) return j;
    if (j.contains("outputs") && j.at("outputs").contains("fan")) return j.at("outputs").at("fan");
    if (j.contains("fan")) return j.at("fan");
    throw ToricError("input JSON does not contain a fan");
}

IntVec parse_bundle(const std::string& s) {
    IntVec v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(Int(part));
    return v;
}

SearchWindow parse_window(const std::string& s) {
    SearchWindow w;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) throw ToricError("window range needs the form a..b");
        w.ranges.emplace_back(std::stol(part.substr(0, dots)), std::stol(part.substr(dots + 2)));
    }
    return w;
}

Json bound_report_json(const BoundReport& r) {
    Json j;
    j["n"] = r.params.n;
    j["k"] = r.params.k;
    j["a"] = r.params.a;
    j["eps"] = json_rat(r.eps);
    j["c"] = json_rat(r.c);
    j["amplitude_bound"] = json_int(r.amplitude_bound);
    j["t_eps_bound"] = json_rat(r.t_eps_bound);
    j["z_fixed_bound"] = json_int(r.z_fixed_bound);
    j["z_fixed_strong_bound"] = json_rat(r.z_fixed_strong_bound);
    j["E"] = json_rat(r.e_value);
    j["rk_k0"] = json_int(r.rk_k0);
    j["margin"] = json_rat(r.margin);
    return j;
}

// ---------------------------------------------------------------------------
// Command implementations report (certificate, exit code).

struct CmdResult {
    Json cert;
    int code = 0;
};

CmdResult cmd_family(long n, long k, long a, bool validate, bool no_fan) {
    Clock clock;
    FamilyInstance inst = build_family({n, k, a}, !no_fan);
    Json checks = Json::array();
    Json outputs;
    if (validate || !no_fan) {
        ValidationReport rep = validate_construction(inst);
        for (const auto& c : rep.checks) checks.push_back(check(c.name, c.pass, c.detail));
        Json notes = Json::array();
        for (const auto& nline : rep.notes) notes.push_back(nline);
        if (!notes.empty()) outputs["notes"] = notes;
    }
    if (inst.fan) {
        outputs["fan"] = fan_to_json(*inst.fan, inst.params);
    } else {
        Json divisors = Json::array();
        for (const auto& e : inst.divisors.vectors) divisors.push_back(json_vec(e));
        outputs["divisors"] = divisors;
    }
    outputs["rank_k0"] = json_int(rank_k0_sum(inst.params));
    Json inputs = {{"n", n}, {"k", k}, {"a", a}};
    Json cert = make_cert("family", inputs, outputs, checks, clock);
    return {cert, all_pass(checks) ? 0 : 1};
}

CmdResult cmd_rank_k0(const Json& fan_json) {
    Clock clock;
    StackyFan fan = fan_from_json(fan_json);
    Int rk = rank_k0(fan);
    Json checks = Json::array();
    if (auto fam = family_params_from_json(fan_json)) {
        checks.push_back(check("matches_cyclic_size_sum", rk == rank_k0_sum(*fam),
                               json_int(rank_k0_sum(*fam))));
        checks.push_back(check("matches_closed_polynomial", rk == rank_k0_closed_form(*fam),
                               json_int(rank_k0_closed_form(*fam))));
    }
    checks.push_back(check("equals_max_cone_count_on_varieties",
                           rk == Int(fan.max_cones.size()), fan.max_cones.size()));
    Json cert = make_cert("rank-k0", {{"fan", fan_json}}, {{"rank_k0", json_int(rk)}}, checks,
                          clock);
    return {cert, all_pass(checks) ? 0 : 1};
}

CmdResult cmd_cohomology(const Json& fan_json, const IntVec& bundle) {
    Clock clock;
    CohomologyEngine engine(fan_from_json(fan_json));
    CohomologyTable t = engine.cohomology(engine.divisor_class(bundle));
    Json h = Json::array();
    for (const Int& v : t.h) h.push_back(json_int(v));
    Json outputs = {{"h", h}, {"total", json_int(t.total())}};
    Json checks = Json::array();
    Json cert = make_cert("cohomology",
                          {{"fan", fan_json}, {"bundle", json_vec(bundle)}}, outputs, checks,
                          clock);
    return {cert, 0};
}

CmdResult cmd_vanishing(const Json& fan_json, const IntVec& bundle, bool higher_only) {
    Clock clock;
    CohomologyEngine engine(fan_from_json(fan_json));
    bool v = engine.vanishing(engine.divisor_class(bundle), higher_only);
    Json cert = make_cert(
        "vanishing",
        {{"fan", fan_json}, {"bundle", json_vec(bundle)}, {"higher_only", higher_only}},
        {{"vanishing", v}}, Json::array(), clock);
    return {cert, 0};
}

CmdResult cmd_search(const Json& fan_json, const SearchWindow& window, std::uint64_t budget,
                     std::size_t jobs) {
    Clock clock;
    CohomologyEngine engine(fan_from_json(fan_json));
    std::optional<FamilyParams> fam = family_params_from_json(fan_json);
    SearchResult r = max_exceptional_search(engine, window, budget, fam, jobs);
    Json outputs;
    outputs["collection"] = collection_to_json(r.best);
    outputs["flag"] = r.exact ? "exact" : "lower_bound";
    outputs["nodes"] = r.nodes;
    Json checks = Json::array();
    checks.push_back(check("reverified_exceptional", true, r.best.certificate.size()));
    if (fam) {
        Int rk = rank_k0_sum(*fam);
        checks.push_back(check("length_at_most_rk_k0", Int(r.best.size()) <= rk, json_int(rk)));
    }
    Json window_json = Json::array();
    for (auto& [lo, hi] : window.ranges) window_json.push_back({lo, hi});
    Json cert = make_cert("search",
                          {{"fan", fan_json}, {"window", window_json}, {"budget", budget}},
                          outputs, checks, clock);
    return {cert, all_pass(checks) ? 0 : 1};
}

CmdResult cmd_strong(const Json& fan_json, std::size_t jobs) {
    Clock clock;
    CohomologyEngine engine(fan_from_json(fan_json));
    StrongCollectionResult r = build_strong_collection(engine, jobs);
    Json outputs;
    outputs["collection"] = collection_to_json(r.collection);
    Json shift = Json::array();
    for (const Rat& c : r.shift) shift.push_back(json_rat(c));
    outputs["shift"] = shift;
    outputs["delta"] = json_rat(r.delta);
    Json l = Json::array();
    for (const Rat& c : r.functional) l.push_back(json_rat(c));
    outputs["functional"] = l;
    outputs["vol_p"] = json_rat(r.vol_p);
    outputs["vol_p_hat"] = json_rat(r.vol_p_hat);
    outputs["rk_k0"] = json_int(r.rk_k0);
    outputs["target"] = json_int(r.target);
    Json checks = Json::array();
    checks.push_back(check("volume_at_least_6_rk", r.vol_p >= 6 * Rat(r.rk_k0),
                           json_rat(r.vol_p - 6 * Rat(r.rk_k0))));
    checks.push_back(
        check("length_at_least_target", Int(r.collection.size()) >= r.target, r.collection.size()));
    bool pairs_ok = true;
    for (const auto& pc : r.collection.certificate) pairs_ok = pairs_ok && pc.ok;
    checks.push_back(check("strong_pairs_verified", pairs_ok, r.collection.certificate.size()));
    Json cert = make_cert("strong", {{"fan", fan_json}}, outputs, checks, clock);
    return {cert, all_pass(checks) ? 0 : 1};
}

CmdResult cmd_bound(long n, long k, long a, const Rat& eps, const Rat& c) {
    Clock clock;
    BoundReport r = bound_components(n, k, a, eps, c);
    Json checks = Json::array();
    checks.push_back(check("rk_k0_closed_form_consistency",
                           r.rk_k0 == rank_k0_sum({n, k, a}), json_int(r.rk_k0)));
    Json cert = make_cert("bound",
                          {{"n", n},
                           {"k", k},
                           {"a", a},
                           {"eps", json_rat(eps)},
                           {"c", json_rat(c)}},
                          bound_report_json(r), checks, clock);
    return {cert, all_pass(checks) ? 0 : 1};
}

CmdResult cmd_threshold(long n, long a, const Rat& eps, const Rat& c, long kmax) {
    Clock clock;
    auto k = counterexample_threshold(n, a, eps, c, kmax);
    Json outputs;
    Json checks = Json::array();
    if (k) {
        outputs["threshold"] = *k;
        Rat margin_at = c * Rat(rank_k0_closed_form({n, *k, a})) - evaluate_E(n, *k, a, eps);
        checks.push_back(check("margin_positive_at_threshold", margin_at > 0, json_rat(margin_at)));
        if (*k > 2) {
            Rat margin_before =
                c * Rat(rank_k0_closed_form({n, *k - 1, a})) - evaluate_E(n, *k - 1, a, eps);
            checks.push_back(
                check("margin_negative_before", margin_before <= 0, json_rat(margin_before)));
        }
    } else {
        outputs["threshold"] = nullptr;
        outputs["cutoff"] = kmax;
    }
    Json cert = make_cert(
        "threshold",
        {{"n", n}, {"a", a}, {"eps", json_rat(eps)}, {"c", json_rat(c)}, {"kmax", kmax}}, outputs,
        checks, clock);
    return {cert, k && all_pass(checks) ? 0 : 1};
}

CmdResult cmd_sublemma(std::size_t t, std::size_t samples, std::uint64_t seed) {
    Clock clock;
    std::mt19937_64 rng(seed);
    std::size_t held = 0, equalities = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        WedgeConfig cfg = random_wedge_config(t, rng);
        SublemmaResult r = sublemma_check(cfg);
        if (r.holds) ++held;
        if (r.lhs == r.rhs) ++equalities;
    }
    Json outputs = {{"samples", samples}, {"held", held}, {"equalities", equalities}};
    Json checks = Json::array();
    checks.push_back(check("all_hold", held == samples, held));
    if (t == 1) checks.push_back(check("t1_always_equality", equalities == samples, equalities));
    Json cert = make_cert("sublemma", {{"t", t}, {"samples", samples}, {"seed", seed}}, outputs,
                          checks, clock);
    return {cert, all_pass(checks) ? 0 : 1};
}

// Re-checks an emitted certificate from its JSON alone.
CmdResult cmd_verify(const Json& cert) {
    Clock clock;
    const std::string command = cert.at("command").get<std::string>();
    const Json& inputs = cert.at("inputs");
    const Json& outputs = cert.at("outputs");
    Json checks = Json::array();

    if (command == "family") {
        FamilyInstance inst = build_family(
            {inputs.at("n").get<long>(), inputs.at("k").get<long>(), inputs.at("a").get<long>()},
            outputs.contains("fan"));
        ValidationReport rep = validate_construction(inst);
        checks.push_back(check("construction_valid", rep.all_pass()));
        if (outputs.contains("fan")) {
            Json refan = fan_to_json(*inst.fan, inst.params);
            checks.push_back(check("fan_reproduced", refan.at("rays") == outputs.at("fan").at("rays") &&
                                                         refan.at("max_cones") ==
                                                             outputs.at("fan").at("max_cones")));
        }
        checks.push_back(check("rank_k0_reproduced",
                               json_int(rank_k0_sum(inst.params)) == outputs.at("rank_k0")));
    } else if (command == "rank-k0") {
        StackyFan fan = fan_from_json(inputs.at("fan"));
        checks.push_back(
            check("rank_k0_reproduced", json_int(rank_k0(fan)) == outputs.at("rank_k0")));
    } else if (command == "cohomology") {
        CohomologyEngine engine(fan_from_json(inputs.at("fan")));
        CohomologyTable t = engine.cohomology(
            engine.divisor_class(vec_from_json(inputs.at("bundle"))));
        Json h = Json::array();
        for (const Int& v : t.h) h.push_back(json_int(v));
        checks.push_back(check("table_reproduced", h == outputs.at("h")));
    } else if (command == "vanishing") {
        CohomologyEngine engine(fan_from_json(inputs.at("fan")));
        bool v = engine.vanishing(engine.divisor_class(vec_from_json(inputs.at("bundle"))),
                                  inputs.at("higher_only").get<bool>());
        checks.push_back(check("verdict_reproduced", v == outputs.at("vanishing").get<bool>()));
    } else if (command == "search") {
        CohomologyEngine engine(fan_from_json(inputs.at("fan")));
        std::vector<DivisorClass> bundles =
            bundles_from_json(outputs.at("collection").at("bundles"));
        ExceptionalVerdict v = is_exceptional(engine, bundles);
        checks.push_back(check("collection_exceptional", v.ok));
        checks.push_back(check("length_matches",
                               bundles.size() == outputs.at("collection").at("length")));
    } else if (command == "strong") {
        CohomologyEngine engine(fan_from_json(inputs.at("fan")));
        std::vector<DivisorClass> bundles =
            bundles_from_json(outputs.at("collection").at("bundles"));
        bool pairs_ok = true;
        for (std::size_t i = 0; i < bundles.size() && pairs_ok; ++i)
            for (std::size_t j = i + 1; j < bundles.size() && pairs_ok; ++j) {
                pairs_ok = engine.vanishing(engine.class_difference(bundles[i], bundles[j]), false) &&
                           engine.vanishing(engine.class_difference(bundles[j], bundles[i]), true);
            }
        checks.push_back(check("strong_pairs_reproduced", pairs_ok));
        Int rk = rank_k0(engine.fan());
        checks.push_back(check("rank_reproduced", json_int(rk) == outputs.at("rk_k0")));
        Int target = ceil_div(3 * rk, 4);
        checks.push_back(check("length_at_least_target", Int(bundles.size()) >= target));
    } else if (command == "bound") {
        BoundReport r = bound_components(inputs.at("n").get<long>(), inputs.at("k").get<long>(),
                                         inputs.at("a").get<long>(),
                                         rat_from_json(inputs.at("eps")),
                                         rat_from_json(inputs.at("c")));
        checks.push_back(check("E_reproduced", json_rat(r.e_value) == outputs.at("E")));
        checks.push_back(check("margin_reproduced", json_rat(r.margin) == outputs.at("margin")));
    } else if (command == "threshold") {
        auto k = counterexample_threshold(
            inputs.at("n").get<long>(), inputs.at("a").get<long>(),
            rat_from_json(inputs.at("eps")), rat_from_json(inputs.at("c")),
            inputs.at("kmax").get<long>());
        Json got = k ? Json(*k) : Json(nullptr);
        checks.push_back(check("threshold_reproduced", got == outputs.at("threshold")));
    } else if (command == "sublemma") {
        CmdResult r = cmd_sublemma(inputs.at("t").get<std::size_t>(),
                                   inputs.at("samples").get<std::size_t>(),
                                   inputs.at("seed").get<std::uint64_t>());
        checks.push_back(check("outcome_reproduced", r.cert.at("outputs") == outputs));
    } else {
        throw ToricError("verify: unknown certificate command " + command);
    }

    Json vcert = make_cert("verify", {{"command", command}}, {{"verified", all_pass(checks)}},
                           checks, clock);
    return {vcert, all_pass(checks) ? 0 : 1};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for line-bundle collections on toric Fano varieties"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "write the certificate JSON to a file instead of stdout");
    std::size_t jobs = 1;
    if (const char* env = std::getenv("TORIC_EXC_JOBS")) jobs = std::strtoul(env, nullptr, 10);
    app.add_option("--jobs", jobs, "worker threads for parallel phases");

    long n = 0, k = 0, a = 0, kmax = 200000;
    std::string eps_str = "1/8", c_str = "1", fan_path, bundle_str, window_str, cert_path;
    bool validate = false, no_fan = false, higher_only = false;
    std::uint64_t budget = 1000000, seed = 20240101;
    std::size_t t_param = 2, samples = 1000;

    CLI::App* fam = app.add_subcommand("family", "build a family member Y_{n,k,a}");
    fam->add_option("--n", n)->required();
    fam->add_option("--k", k)->required();
    fam->add_option("--a", a)->required();
    fam->add_flag("--validate", validate, "run the full construction validator");
    fam->add_flag("--no-fan", no_fan, "skip fan construction (closed forms only)");

    CLI::App* rk = app.add_subcommand("rank-k0", "rank of K_0 from a fan (stdin or --fan)");
    rk->add_option("--fan", fan_path);

    CLI::App* coh = app.add_subcommand("cohomology", "cohomology table of a line bundle");
    coh->add_option("--fan", fan_path)->required();
    coh->add_option("--bundle", bundle_str)->required();

    CLI::App* van = app.add_subcommand("vanishing", "vanishing of a line bundle's cohomology");
    van->add_option("--fan", fan_path)->required();
    van->add_option("--bundle", bundle_str)->required();
    van->add_flag("--higher-only", higher_only);

    CLI::App* sea = app.add_subcommand("search", "windowed search for exceptional collections");
    sea->add_option("--fan", fan_path)->required();
    sea->add_option("--window", window_str)->required();
    sea->add_option("--budget", budget);

    CLI::App* str = app.add_subcommand("strong", "constructive strong collection of length >= 3/4 rk");
    str->add_option("--fan", fan_path)->required();

    CLI::App* bnd = app.add_subcommand("bound", "exact bound report for Y_{n,k,a}");
    bnd->add_option("--n", n)->required();
    bnd->add_option("--k", k)->required();
    bnd->add_option("--a", a)->required();
    bnd->add_option("--eps", eps_str)->required();
    bnd->add_option("--c", c_str);

    CLI::App* thr = app.add_subcommand("threshold", "smallest k with c rk K_0 > E");
    thr->add_option("--n", n)->required();
    thr->add_option("--a", a)->required();
    thr->add_option("--eps", eps_str)->required();
    thr->add_option("--c", c_str);
    thr->add_option("--kmax", kmax);

    CLI::App* sub = app.add_subcommand("sublemma", "sample and check the wedge inequality");
    sub->add_option("--t", t_param)->required();
    sub->add_option("--samples", samples);
    sub->add_option("--seed", seed);

    CLI::App* ver = app.add_subcommand("verify", "re-check an emitted certificate");
    ver->add_option("--cert", cert_path, "certificate file (stdin when omitted)");

    for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CmdResult result;
        if (fam->parsed()) {
            result = cmd_family(n, k, a, validate, no_fan);
        } else if (rk->parsed()) {
            result = cmd_rank_k0(unwrap_fan_json(read_json_input(fan_path)));
        } else if (coh->parsed()) {
            result = cmd_cohomology(unwrap_fan_json(read_json_input(fan_path)),
                                    parse_bundle(bundle_str));
        } else if (van->parsed()) {
            result = cmd_vanishing(unwrap_fan_json(read_json_input(fan_path)),
                                   parse_bundle(bundle_str), higher_only);
        } else if (sea->parsed()) {
            result = cmd_search(unwrap_fan_json(read_json_input(fan_path)),
                                parse_window(window_str), budget, jobs);
        } else if (str->parsed()) {
            result = cmd_strong(unwrap_fan_json(read_json_input(fan_path)), jobs);
        } else if (bnd->parsed()) {
            result = cmd_bound(n, k, a, rat_from_string(eps_str), rat_from_string(c_str));
        } else if (thr->parsed()) {
            result = cmd_threshold(n, a, rat_from_string(eps_str), rat_from_string(c_str), kmax);
        } else if (sub->parsed()) {
            result = cmd_sublemma(t_param, samples, seed);
        } else if (ver->parsed()) {
            result = cmd_verify(read_json_input(cert_path));
        } else {
            return 2;
        }
        write_output(result.cert, out_path);
        return result.code;
    } catch (const ToricError& e) {
        Json err = {{"tool", "toric3"}, {"error", e.what()}};
        std::cerr << err.dump(2) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
