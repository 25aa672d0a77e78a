#include "phorslab/pipeline.hpp"

#include "phorslab/parser.hpp"
#include "phorslab/transforms.hpp"

#include <chrono>

namespace phorslab {

PipelineError tag_current_exception()
{
    try {
        throw;
    } catch (const PipelineError& e) {
        return e;
    } catch (const ParseError& e) {
        return {"syntax", e.what(), kExitInput};
    } catch (const TypeError& e) {
        return {"typesys", e.what(), kExitNegative};
    } catch (const ContextMismatch& e) {
        return {"typesys", e.what(), kExitNegative};
    } catch (const IndexCapExceeded& e) {
        return {"interp", e.what(), kExitInput};
    } catch (const CompileError& e) {
        return {"interp", e.what(), kExitInput};
    } catch (const BugCheckFailure& e) {
        return {"interp", std::string("internal invariant failed: ") + e.what(), kExitInput};
    } catch (const NonStationary& e) {
        return {"solver", e.what(), kExitInconclusive};
    } catch (const MonotonicityViolation& e) {
        return {"solver", std::string("internal invariant failed: ") + e.what(), kExitInput};
    } catch (const PreconditionViolated& e) {
        return {"solver", e.what(), kExitInput};
    } catch (const TransformError& e) {
        return {"transforms", e.what(), kExitInput};
    } catch (const StuckTerm& e) {
        return {"exec", e.what(), kExitInput};
    } catch (const std::exception& e) {
        return {"phors-lab", e.what(), kExitInput};
    }
}

nlohmann::json typing_to_json(const TypingReport& r)
{
    nlohmann::json derived = nlohmann::json::array();
    for (const auto& [name, ty] : r.derived) derived.push_back({{"name", name}, {"type", ty.str()}});
    nlohmann::json diags = nlohmann::json::array();
    for (const auto& d : r.diagnostics) {
        nlohmann::json j = {{"rule", d.rule}, {"constraint", d.constraint}, {"message", d.message}};
        if (d.inferred) j["inferred"] = d.inferred->str();
        if (d.declared) j["declared"] = d.declared->str();
        if (!d.witness.empty()) j["witness"] = d.witness;
        diags.push_back(std::move(j));
    }
    return {{"system", r.system == TypeSystem::Finitary ? "fin" : "inf"},
            {"accepted", r.accepted},
            {"derived", derived},
            {"diagnostics", diags}};
}

nlohmann::json report_header(const std::string& command)
{
    return {{"schema", kReportSchema}, {"version", kReportVersion}, {"command", command}};
}

namespace {

std::string first_diagnostic(const TypingReport& r)
{
    if (r.diagnostics.empty()) return "rejected";
    const auto& d = r.diagnostics.front();
    return (d.rule.empty() ? "" : d.rule + ": ") + d.constraint + ": " + d.message;
}

}  // namespace

Prepared prepare(const Scheme& s)
{
    Prepared p;
    p.fin = check_fin(s);
    if (p.fin.accepted) {
        p.scheme = s;
        return p;
    }
    p.inf = check_inf(s);
    if (!p.inf->accepted)
        throw PipelineError("typesys", "rejected by both type systems; fin: " + first_diagnostic(p.fin) +
                                           "; inf: " + first_diagnostic(*p.inf),
                            kExitNegative);
    if (!s.closed())
        throw PipelineError("transforms",
                            "infinitary scheme with open parameters; reduction covers closed schemes only",
                            kExitInput);
    p.scheme = reduce_inf(s);
    p.reduced = true;
    return p;
}

Analysis analyze(const Scheme& s, const AnalyzeOptions& opt)
{
    auto t0 = std::chrono::steady_clock::now();
    Analysis a;
    a.prepared = prepare(s);
    CompileOptions copt;
    copt.var_cap = opt.var_cap;
    a.fas = compile(a.prepared.scheme, copt);

    nlohmann::json rep = report_header("analyze");
    rep["typing"] = typing_to_json(a.prepared.fin);
    if (a.prepared.inf) rep["typing_inf"] = typing_to_json(*a.prepared.inf);
    rep["reduced"] = a.prepared.reduced;
    rep["mode"] = opt.mode == Arithmetic::Exact ? "exact" : "float";
    rep["fas"] = {{"variables", a.fas.size()}, {"start", var_name(a.fas.start)}};
    if (a.fas.closed()) {
        a.series = kleene_series(a.fas, opt.degree).at(a.fas.start);
        nlohmann::json coeffs = nlohmann::json::array();
        for (unsigned i = 0; i <= opt.degree; ++i) coeffs.push_back(to_string((*a.series)[i]));
        rep["degree"] = opt.degree;
        rep["coefficients"] = coeffs;
        rep["series"] = render_series(*a.series);

        SolveConfig cfg;
        cfg.degree = opt.degree;
        cfg.mode = opt.mode;
        a.verdict = decide(a.fas, cfg);
        rep["verdict"] = a.verdict->to_json();
        bool negative = a.verdict->ast == Answer::No || a.verdict->past == Answer::No;
        bool open = a.verdict->ast == Answer::Inconclusive || a.verdict->past == Answer::Inconclusive;
        a.exit_code = negative ? kExitNegative : open ? kExitInconclusive : kExitOk;
    } else {
        nlohmann::json params = nlohmann::json::array();
        for (VarId v : a.fas.params) params.push_back(var_name(v));
        rep["open_parameters"] = params;
        rep["note"] = "open scheme: coefficients and verdicts depend on the parameters";
    }
    auto m = monotonicity_stats();
    rep["monotonicity"] = {{"runs", m.runs}, {"comparisons", m.comparisons}, {"violations", m.violations}};
    rep["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    a.report = std::move(rep);
    return a;
}

TruncSeries start_series(const Scheme& s, unsigned n, std::size_t var_cap)
{
    CompileOptions copt;
    copt.var_cap = var_cap;
    Fas fas = compile(prepare(s).scheme, copt);
    return kleene_series(fas, n).at(fas.start);
}

Verification verify_same_series(const Scheme& before, const Scheme& after, unsigned n, std::size_t var_cap)
{
    Verification v;
    v.degree = n;
    std::vector<Rat> lhs(n + 1);
    if (check_fin(before).accepted) {
        TruncSeries a = start_series(before, n, var_cap);
        for (unsigned i = 0; i <= n; ++i) lhs[i] = a[i];
    } else {
        Enumeration e = enumerate(before, n);
        if (e.lower_bound()) {
            v.message = "step budget exhausted while enumerating the original scheme";
            return v;
        }
        for (const auto& [i, p] : e.terminating) lhs[i] = p;
    }
    TruncSeries b = start_series(after, n, var_cap);
    for (unsigned i = 0; i <= n; ++i) {
        if (lhs[i] != b[i]) {
            v.message = "coefficients differ at z^" + std::to_string(i) + ": " + to_string(lhs[i]) + " vs " +
                        to_string(b[i]);
            return v;
        }
    }
    v.equal = true;
    v.message = "coefficients equal to degree " + std::to_string(n);
    return v;
}

long double truncated_p_term(const Scheme& scheme, unsigned cap)
{
    Fas fas = reachable(compile(prepare(scheme).scheme));
    long double sum = 0;
    FloatSeries s = kleene_series_float(fas, cap);
    for (long double c : s.coefficients()) sum += c;
    return sum;
}

}  // namespace phorslab
