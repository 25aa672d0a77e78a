// phors-lab: command-line front end.
#include "phorslab/parser.hpp"
#include "phorslab/pipeline.hpp"
#include "phorslab/transforms.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace phorslab;

namespace {

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw PipelineError("cli", "cannot write '" + path + "'", kExitInput);
    out << text;
}

void write_json(const std::string& path, const nlohmann::json& j)
{
    if (!path.empty()) write_text(path, j.dump(2) + "\n");
}

Scheme load(const std::string& path)
{
    return parse_file(path);
}

TypeSystem system_of(const std::string& s)
{
    return s == "inf" ? TypeSystem::Infinitary : TypeSystem::Finitary;
}

void print_typing(const std::string& file, const TypingReport& r)
{
    std::cout << file << ": " << (r.accepted ? "accepted" : "rejected") << " by the "
              << (r.system == TypeSystem::Finitary ? "finitary" : "infinitary") << " type system\n";
    for (const auto& [name, ty] : r.derived) std::cout << "  " << name << " : " << ty.str() << "\n";
    for (const auto& d : r.diagnostics) {
        std::cout << "  error";
        if (!d.rule.empty()) std::cout << " in " << d.rule;
        std::cout << " [" << d.constraint << "]: " << d.message << "\n";
        if (d.inferred) std::cout << "    inferred: " << d.inferred->str() << "\n";
        if (d.declared) std::cout << "    declared: " << d.declared->str() << "\n";
    }
}

int cmd_check(const std::string& file, const std::string& system, const std::string& json)
{
    Scheme s = load(file);
    TypingReport r = check(s, system_of(system));
    print_typing(file, r);
    if (r.accepted) std::cout << "  order " << s.order() << ", max grade " << s.max_grade() << "\n";
    nlohmann::json rep = report_header("check");
    rep["file"] = file;
    rep["typing"] = typing_to_json(r);
    if (r.accepted) rep["order"] = s.order();
    write_json(json, rep);
    return r.accepted ? kExitOk : kExitNegative;
}

int cmd_analyze(const std::string& file, const AnalyzeOptions& opt, const std::string& json)
{
    Analysis a = analyze(load(file), opt);
    a.report["file"] = file;
    std::cout << file << ": " << (a.prepared.reduced ? "infinitary, reduced to a finitary scheme" : "finitary")
              << "; " << a.fas.size() << " equation(s)\n";
    if (!a.series) {
        std::cout << "open scheme; coefficients depend on the parameters\n";
    } else {
        std::cout << "series:   " << render_series(*a.series) << "\n";
        const nlohmann::json& v = a.report["verdict"];
        std::cout << "p_term:   " << (v["p_term"].is_string() ? v["p_term"].get<std::string>() : v["p_term"].dump())
                  << " (~" << v["p_term_approx"].get<std::string>() << ")\n";
        std::cout << "ast:      " << v["ast"].get<std::string>() << "  ["
                  << to_string(a.verdict->ast_certificate.kind) << "]\n";
        std::cout << "past:     " << v["past"].get<std::string>() << "  ["
                  << to_string(a.verdict->past_certificate.kind) << "]\n";
        std::cout << "E[steps]: " << (v["expected_steps"].is_null() ? "unknown" : v["expected_steps"].get<std::string>())
                  << "\n";
        for (const auto& n : a.verdict->notes) std::cout << "note: " << n << "\n";
    }
    write_json(json, a.report);
    return a.exit_code;
}

int cmd_compile(const std::string& file, std::size_t var_cap, const std::string& json)
{
    Prepared p = prepare(load(file));
    CompileOptions copt;
    copt.var_cap = var_cap;
    Fas fas = compile(p.scheme, copt);
    std::cout << fas.render();
    if (!json.empty()) {
        nlohmann::json rep = report_header("compile");
        rep["file"] = file;
        rep["reduced"] = p.reduced;
        rep["fas"] = fas.to_json();
        write_json(json, rep);
    }
    return kExitOk;
}

int finish_transform(const Scheme& before, const Scheme& after, const SizeCheck& size, unsigned verify,
                     std::size_t var_cap, const std::string& out)
{
    write_text(out, print(after));
    std::cerr << size.str() << "\n";
    if (verify == 0) return kExitOk;
    Verification v = verify_same_series(before, after, verify, var_cap);
    std::cerr << v.message << "\n";
    return v.equal ? kExitOk : kExitNegative;
}

int cmd_simulate(const std::string& file, const MonteCarloOptions& opt, const std::string& csv,
                 const std::string& json)
{
    Scheme s = load(file);
    RunStats st = monte_carlo(s, opt);
    Interval w = st.p_term_interval();
    std::cout << file << ": " << st.terminated << "/" << st.trials << " terminated within " << st.choice_cap
              << " choices\n";
    std::cout << "p_term estimate " << st.p_term() << ", 99.7% Wilson interval [" << w.lower << ", " << w.upper
              << "]\n";
    std::cout << "diverged " << st.diverged << ", step budget exhausted " << st.exhausted << ", choice cap hit "
              << st.capped << "\n";
    std::cout << "mean steps among terminated " << st.mean_steps() << "\n";
    if (!csv.empty()) write_text(csv, st.histogram_csv());
    nlohmann::json rep = report_header("simulate");
    rep["file"] = file;
    rep["stats"] = st.to_json();
    write_json(json, rep);
    return kExitOk;
}

int cmd_enumerate(const std::string& file, unsigned max_choices, std::uint64_t budget, const std::string& json)
{
    Scheme s = load(file);
    Enumeration e = enumerate(s, max_choices, budget);
    for (unsigned i = 0; i <= max_choices; ++i) {
        auto it = e.terminating.find(i);
        std::cout << i << "\t" << (it == e.terminating.end() ? "0" : to_string(it->second)) << "\n";
    }
    std::cout << "diverged " << to_string(e.diverged) << ", cut " << to_string(e.cut) << ", exhausted "
              << to_string(e.exhausted) << (e.lower_bound() ? " (probabilities are lower bounds)" : "") << "\n";
    nlohmann::json rep = report_header("enumerate");
    rep["file"] = file;
    rep["enumeration"] = e.to_json();
    write_json(json, rep);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"phors-lab: termination analysis of probabilistic higher-order recursion schemes"};
    app.require_subcommand(1);
    std::string file, json, system = "fin", mode = "exact", out, csv;
    AnalyzeOptions aopt;
    std::size_t var_cap = kDefaultIndexCap;

    auto* check_cmd = app.add_subcommand("check", "type-check a scheme");
    check_cmd->add_option("file", file, "scheme file")->required();
    check_cmd->add_option("--system", system, "fin or inf")->check(CLI::IsMember({"fin", "inf"}));
    check_cmd->add_option("--json", json, "write a JSON report");

    auto* analyze_cmd = app.add_subcommand("analyze", "coefficients, termination probability, AST and PAST");
    analyze_cmd->add_option("file", file, "scheme file")->required();
    analyze_cmd->add_option("--degree", aopt.degree, "series truncation degree");
    analyze_cmd->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    analyze_cmd->add_option("--var-cap", aopt.var_cap, "index-set size cap");
    analyze_cmd->add_option("--json", json, "write a JSON report");

    auto* compile_cmd = app.add_subcommand("compile", "print the fixpoint equation system");
    compile_cmd->add_option("file", file, "scheme file")->required();
    compile_cmd->add_option("--var-cap", var_cap, "index-set size cap");
    compile_cmd->add_option("--json", json, "write the system as JSON");

    auto* transform_cmd = app.add_subcommand("transform", "rewrite a scheme");
    transform_cmd->require_subcommand(1);
    unsigned verify = 0;
    auto* lin_cmd = transform_cmd->add_subcommand("linearize", "make every argument affine");
    lin_cmd->add_option("file", file, "scheme file")->required();
    auto* red_cmd = transform_cmd->add_subcommand("reduce", "turn a closed infinitary scheme finitary");
    red_cmd->add_option("file", file, "scheme file")->required();
    auto* comp_cmd = transform_cmd->add_subcommand("compose", "fill a parameter with a non-terminal of another scheme");
    std::string inner_file, hole, plug;
    bool no_rename = false;
    comp_cmd->add_option("outer", file, "scheme with the parameter")->required();
    comp_cmd->add_option("inner", inner_file, "scheme supplying the non-terminal")->required();
    comp_cmd->add_option("--hole", hole, "parameter of the outer scheme")->required();
    comp_cmd->add_option("--plug", plug, "non-terminal of the inner scheme")->required();
    comp_cmd->add_flag("--no-rename", no_rename, "fail on name clashes instead of renaming");
    for (auto* c : {lin_cmd, red_cmd}) {
        c->add_option("--verify", verify, "check coefficient equality to this degree");
        c->add_option("--var-cap", var_cap, "index-set size cap for --verify");
    }
    for (auto* c : {lin_cmd, red_cmd, comp_cmd}) c->add_option("-o,--output", out, "output file (default stdout)");

    MonteCarloOptions mopt;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the termination probability");
    sim_cmd->add_option("file", file, "scheme file")->required();
    sim_cmd->add_option("--trials", mopt.trials, "number of runs")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", mopt.seed, "generator seed");
    sim_cmd->add_option("--cap", mopt.choice_cap, "probabilistic choices allowed per run");
    sim_cmd->add_option("--budget", mopt.step_budget, "deterministic steps allowed between choices");
    sim_cmd->add_option("--threads", mopt.threads, "worker threads (default PHORS_LAB_THREADS or all cores)");
    sim_cmd->add_option("--csv", csv, "write the histogram as CSV");
    sim_cmd->add_option("--json", json, "write a JSON report");

    unsigned max_choices = 7;
    std::uint64_t budget = kDefaultStepBudget;
    auto* enum_cmd = app.add_subcommand("enumerate", "exact probabilities of terminating after i choices");
    enum_cmd->add_option("file", file, "scheme file")->required();
    enum_cmd->add_option("--max-choices", max_choices, "largest number of choices explored");
    enum_cmd->add_option("--budget", budget, "deterministic steps allowed between choices");
    enum_cmd->add_option("--json", json, "write a JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check_cmd) return cmd_check(file, system, json);
        if (*analyze_cmd) {
            aopt.mode = mode == "float" ? Arithmetic::Float : Arithmetic::Exact;
            return cmd_analyze(file, aopt, json);
        }
        if (*compile_cmd) return cmd_compile(file, var_cap, json);
        if (*lin_cmd) {
            Scheme s = load(file);
            Scheme l = linearize(s);
            return finish_transform(s, l, linearize_size_check(s, l), verify, var_cap, out);
        }
        if (*red_cmd) {
            Scheme s = load(file);
            Scheme r = reduce_inf(s);
            return finish_transform(s, r, reduce_size_check(s, r), verify, var_cap, out);
        }
        if (*comp_cmd) {
            ComposeOptions copt;
            copt.auto_rename = !no_rename;
            write_text(out, print(compose(load(file), load(inner_file), hole, plug, copt)));
            return kExitOk;
        }
        if (*sim_cmd) return cmd_simulate(file, mopt, csv, json);
        if (*enum_cmd) return cmd_enumerate(file, max_choices, budget, json);
    } catch (...) {
        PipelineError e = tag_current_exception();
        std::cerr << "error: " << e.what() << "\n";
        if (!json.empty()) {
            nlohmann::json rep = report_header("error");
            rep["file"] = file;
            rep["module"] = e.module;
            rep["message"] = e.what();
            write_json(json, rep);
        }
        return e.exit_code;
    }
    return kExitInput;
}
