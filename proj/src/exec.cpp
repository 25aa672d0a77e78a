#include "phorslab/exec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace phorslab {

namespace {

Term substitute(const Rule& r, const std::vector<Term>& args)
{
    std::map<std::string, Term> env;
    for (std::size_t i = 0; i < r.params.size(); ++i) env.emplace(r.params[i], args[i]);
    return replace_leaves(r.body, [&](const Term& leaf) -> std::optional<Term> {
        if (leaf.kind() != TermKind::Var) return std::nullopt;
        auto it = env.find(leaf.name());
        if (it == env.end()) throw StuckTerm("unbound variable '" + leaf.name() + "' in the body of " + r.name);
        return it->second;
    });
}

Term reapply(Term head, const std::vector<Term>& args, std::size_t from)
{
    for (std::size_t i = from; i < args.size(); ++i) head = Term::app(std::move(head), args[i]);
    return head;
}

std::string describe(const Term& t)
{
    switch (t.kind()) {
    case TermKind::Var: return "variable '" + t.name() + "'";
    case TermKind::Param: return "parameter '" + t.name() + "'";
    case TermKind::NonTerm: return "non-terminal '" + t.name() + "'";
    case TermKind::Tuple: return "a tuple";
    case TermKind::Unit: return "e";
    default: return "a term";
    }
}

}  // namespace

Redex head_redex(const Scheme& s, const Term& t)
{
    const Term& h = t.head();
    std::vector<Term> args = t.kind() == TermKind::App ? t.spine_args() : std::vector<Term>{};
    Redex r;
    switch (h.kind()) {
    case TermKind::Unit:
        if (!args.empty()) break;
        r.kind = RedexKind::Value;
        return r;
    case TermKind::Omega:
        r.kind = RedexKind::Diverge;
        return r;
    case TermKind::NonTerm: {
        const Rule* rule = s.find(h.name());
        if (!rule) throw StuckTerm("undefined non-terminal '" + h.name() + "'");
        if (args.size() < rule->params.size()) break;
        r.kind = RedexKind::Unfold;
        r.next = reapply(substitute(*rule, args), args, rule->params.size());
        return r;
    }
    case TermKind::Choice:
        r.kind = RedexKind::Choice;
        r.left = reapply(h.left(), args, 0);
        r.right = reapply(h.right(), args, 0);
        r.bias = h.bias();
        return r;
    case TermKind::Proj: {
        const Term& body = h.body();
        if (body.kind() == TermKind::Tuple) {
            if (h.index() == 0 || h.index() > body.items().size()) break;
            r.kind = RedexKind::Unfold;
            r.next = reapply(body.items()[h.index() - 1], args, 0);
            return r;
        }
        Redex inner = head_redex(s, body);
        auto wrap = [&](const Term& u) { return reapply(Term::proj(h.index(), u), args, 0); };
        switch (inner.kind) {
        case RedexKind::Value:
            throw StuckTerm("projection of e");
        case RedexKind::Diverge:
            return inner;
        case RedexKind::Unfold:
            inner.next = wrap(inner.next);
            return inner;
        case RedexKind::Choice:
            inner.left = wrap(inner.left);
            inner.right = wrap(inner.right);
            return inner;
        }
        break;
    }
    default:
        break;
    }
    throw StuckTerm("stuck term headed by " + describe(h) + " with " + std::to_string(args.size()) + " argument(s)");
}

std::optional<std::pair<Term, std::optional<ChoiceMade>>> step(const Scheme& s, const Term& t,
                                                               const DirectionSampler& sample)
{
    Redex r = head_redex(s, t);
    switch (r.kind) {
    case RedexKind::Value:
    case RedexKind::Diverge:
        return std::nullopt;
    case RedexKind::Unfold:
        return std::make_pair(r.next, std::optional<ChoiceMade>{});
    case RedexKind::Choice: {
        bool left = sample(r.bias);
        ChoiceMade c{left, left ? r.bias : Rat(1) - r.bias};
        return std::make_pair(left ? r.left : r.right, std::optional<ChoiceMade>{c});
    }
    }
    return std::nullopt;
}

namespace {

Term start_term(const Scheme& s)
{
    if (!s.closed()) throw StuckTerm("execution needs a closed scheme");
    if (!s.find(s.start)) throw StuckTerm("undefined start symbol '" + s.start + "'");
    return Term::nonterm(s.start);
}

}  // namespace

Enumeration enumerate(const Scheme& s, unsigned max_choices, std::uint64_t step_budget)
{
    Enumeration out;
    out.max_choices = max_choices;
    out.step_budget = step_budget;
    struct Branch {
        Term t;
        Rat p;
        unsigned choices;
    };
    std::vector<Branch> todo{{start_term(s), Rat(1), 0}};
    while (!todo.empty()) {
        Branch b = std::move(todo.back());
        todo.pop_back();
        for (std::uint64_t n = 0;; ++n) {
            if (n == step_budget) {
                out.exhausted += b.p;
                break;
            }
            Redex r = head_redex(s, b.t);
            if (r.kind == RedexKind::Value) {
                out.terminating[b.choices] += b.p;
                break;
            }
            if (r.kind == RedexKind::Diverge) {
                out.diverged += b.p;
                break;
            }
            if (r.kind == RedexKind::Unfold) {
                b.t = std::move(r.next);
                continue;
            }
            if (b.choices == max_choices) {
                out.cut += b.p;
                break;
            }
            Rat q = Rat(1) - r.bias;
            if (q != 0) todo.push_back({std::move(r.right), b.p * q, b.choices + 1});
            if (r.bias != 0) todo.push_back({std::move(r.left), b.p * r.bias, b.choices + 1});
            break;
        }
    }
    return out;
}

nlohmann::json Enumeration::to_json() const
{
    nlohmann::json probs = nlohmann::json::object();
    for (const auto& [i, p] : terminating) probs[std::to_string(i)] = to_string(p);
    return {{"max_choices", max_choices},       {"step_budget", step_budget},
            {"terminating", probs},             {"diverged", to_string(diverged)},
            {"exhausted", to_string(exhausted)}, {"cut", to_string(cut)},
            {"lower_bound", lower_bound()}};
}

Interval wilson(std::uint64_t k, std::uint64_t n, double z)
{
    if (n == 0) return {0.0, 1.0};
    double nn = double(n), p = double(k) / nn, z2 = z * z;
    double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    // At the extremes the bound is exact; rounding would otherwise exclude it.
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

void RunStats::merge(const RunStats& o)
{
    trials += o.trials;
    terminated += o.terminated;
    diverged += o.diverged;
    exhausted += o.exhausted;
    capped += o.capped;
    steps_terminated += o.steps_terminated;
    for (const auto& [i, c] : o.histogram) histogram[i] += c;
}

nlohmann::json RunStats::to_json() const
{
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [i, c] : histogram) hist[std::to_string(i)] = double(c) / double(trials);
    Interval w = p_term_interval();
    return {{"generator", kGenerator},
            {"seed", seed},
            {"choice_cap", choice_cap},
            {"trials", trials},
            {"terminated", terminated},
            {"diverged", diverged},
            {"exhausted", exhausted},
            {"capped", capped},
            {"p_term", p_term()},
            {"p_term_wilson", {{"z", 3.0}, {"lower", w.lower}, {"upper", w.upper}}},
            {"mean_steps", mean_steps()},
            {"histogram", hist}};
}

std::string RunStats::histogram_csv() const
{
    std::string out = "choices,count,frequency,wilson_lower,wilson_upper\n";
    for (const auto& [i, c] : histogram) {
        Interval w = wilson(c, trials);
        out += std::to_string(i) + "," + std::to_string(c) + "," + std::to_string(double(c) / double(trials)) + "," +
               std::to_string(w.lower) + "," + std::to_string(w.upper) + "\n";
    }
    return out;
}

unsigned worker_count(unsigned requested)
{
    unsigned n = requested;
    if (n == 0) {
        if (const char* env = std::getenv("PHORS_LAB_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    if (n == 0) n = std::thread::hardware_concurrency();
    return std::max(1u, n);
}

namespace {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

constexpr std::uint64_t kChunk = 1000;

RunStats run_chunk(const Scheme& s, const Term& start, const MonteCarloOptions& opt, std::uint64_t chunk,
                   std::uint64_t trials)
{
    SplitMix64 seeder{opt.seed ^ (chunk * 0xd1b54a32d192ed03ULL)};
    SplitMix64 rng{seeder.next()};
    RunStats st;
    st.trials = trials;
    for (std::uint64_t k = 0; k < trials; ++k) {
        Term t = start;
        unsigned choices = 0;
        std::uint64_t steps = 0, since_choice = 0;
        for (;;) {
            if (since_choice == opt.step_budget) {
                ++st.exhausted;
                break;
            }
            Redex r = head_redex(s, t);
            if (r.kind == RedexKind::Value) {
                ++st.terminated;
                ++st.histogram[choices];
                st.steps_terminated += steps;
                break;
            }
            if (r.kind == RedexKind::Diverge) {
                ++st.diverged;
                break;
            }
            ++steps;
            if (r.kind == RedexKind::Unfold) {
                t = std::move(r.next);
                ++since_choice;
                continue;
            }
            if (choices == opt.choice_cap) {
                ++st.capped;
                break;
            }
            ++choices;
            since_choice = 0;
            t = rng.uniform() < to_long_double(r.bias) ? std::move(r.left) : std::move(r.right);
        }
    }
    return st;
}

}  // namespace

RunStats monte_carlo(const Scheme& s, const MonteCarloOptions& opt)
{
    Term start = start_term(s);
    std::uint64_t chunks = (opt.trials + kChunk - 1) / kChunk;
    std::vector<RunStats> parts(chunks);
    unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(opt.threads), std::max<std::uint64_t>(chunks, 1)));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::uint64_t c; (c = next++) < chunks;) {
            try {
                parts[c] = run_chunk(s, start, opt, c, std::min(kChunk, opt.trials - c * kChunk));
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    RunStats out;
    out.seed = opt.seed;
    out.choice_cap = opt.choice_cap;
    for (const auto& p : parts) out.merge(p);
    return out;
}

}  // namespace phorslab
