#include "phorslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>

namespace phorslab {

namespace {

std::atomic<std::uint64_t> g_runs{0}, g_comparisons{0}, g_violations{0};

std::string iterate_summary(const Fas& fas, const SeriesMap& s)
{
    auto it = s.find(fas.start);
    return it == s.end() ? std::string("-") : render_series(it->second);
}

}  // namespace

MonotonicityStats monotonicity_stats()
{
    return {g_runs.load(), g_comparisons.load(), g_violations.load()};
}

SeriesMap kleene_series(const Fas& fas, unsigned n, const SeriesMap& params, unsigned max_iterations)
{
    SeriesMap assign;
    assign[Fas::z()] = TruncSeries::z(n);
    for (VarId p : fas.params) {
        auto it = params.find(p);
        if (it == params.end())
            throw PreconditionViolated("parameter '" + var_name(p) + "' has no series assigned");
        assign[p] = it->second.truncated(std::min(n, it->second.degree_bound()));
        if (assign[p].degree_bound() < n) throw PreconditionViolated("parameter series '" + var_name(p) + "' is too short");
    }
    SeriesMap cur;
    for (VarId v : fas.vars) cur[v] = TruncSeries(n);
    unsigned guard = max_iterations ? max_iterations
                                    : static_cast<unsigned>((n + 2) * (fas.vars.size() + 2) + 1000);
    ++g_runs;
    for (unsigned it = 0; it < guard; ++it) {
        for (VarId v : fas.vars) assign[v] = cur[v];
        SeriesMap next;
        bool same = true;
        std::uint64_t cmp = 0;
        for (VarId v : fas.vars) {
            TruncSeries s = eval_series(fas.rhs(v), assign, n);
            const TruncSeries& old = cur[v];
            for (unsigned i = 0; i <= n; ++i) {
                ++cmp;
                if (s[i] < old[i]) {
                    ++g_violations;
                    throw MonotonicityViolation("Kleene iterate decreased at " + var_name(v) + ", coefficient " +
                                                std::to_string(i) + ": " + to_string(old[i]) + " -> " +
                                                to_string(s[i]));
                }
                if (s[i] != old[i]) same = false;
            }
            s.set_polynomial(false);
            next[v] = std::move(s);
        }
        g_comparisons += cmp;
        if (same) return cur;
        if (it + 1 == guard)
            throw NonStationary("Kleene iteration not stationary after " + std::to_string(guard) +
                                " iterations; last two start iterates: " + iterate_summary(fas, cur) + " | " +
                                iterate_summary(fas, next));
        cur = std::move(next);
    }
    throw NonStationary("Kleene iteration guard is zero");
}

FloatSeries kleene_series_float(const Fas& fas, unsigned n)
{
    if (!fas.closed()) throw PreconditionViolated("float series need a closed system");
    std::map<VarId, FloatSeries> cur;
    for (VarId v : fas.vars) cur[v] = FloatSeries(n);
    cur[Fas::z()] = FloatSeries::z(n);
    unsigned guard = static_cast<unsigned>((n + 2) * (fas.vars.size() + 2) + 1000);
    for (unsigned it = 0; it < guard; ++it) {
        std::map<VarId, FloatSeries> next;
        bool same = true;
        for (VarId v : fas.vars) {
            FloatSeries s = evaluate<FloatSeries>(
                fas.rhs(v), [&](VarId u) -> const FloatSeries& { return cur.at(u); },
                [n](const Rat& c) { return FloatSeries::constant(to_long_double(c), n); });
            s.set_polynomial(false);
            if (s.coefficients() != cur[v].coefficients()) same = false;
            next[v] = std::move(s);
        }
        if (same) return cur.at(fas.start);
        next[Fas::z()] = cur[Fas::z()];
        cur = std::move(next);
    }
    throw NonStationary("float Kleene iteration not stationary after " + std::to_string(guard) + " iterations");
}

std::vector<std::vector<VarId>> scc_bottom_up(const Fas& fas)
{
    // Iterative Tarjan; components are emitted dependencies first.
    std::map<VarId, unsigned> index, low;
    std::set<VarId> on_stack;
    std::vector<VarId> stack;
    std::vector<std::vector<VarId>> out;
    unsigned counter = 0;
    std::map<VarId, std::vector<VarId>> succ;
    for (VarId v : fas.vars) {
        auto d = fas.dependencies(v);
        succ[v] = {d.begin(), d.end()};
    }
    for (VarId root : fas.vars) {
        if (index.count(root)) continue;
        std::vector<std::pair<VarId, std::size_t>> work{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack.insert(root);
        while (!work.empty()) {
            auto& [v, next] = work.back();
            if (next < succ[v].size()) {
                VarId w = succ[v][next++];
                if (!index.count(w)) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack.insert(w);
                    work.emplace_back(w, 0);
                } else if (on_stack.count(w)) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<VarId> comp;
                VarId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    comp.push_back(w);
                } while (w != v);
                std::map<VarId, std::size_t> pos;
                for (std::size_t i = 0; i < fas.vars.size(); ++i) pos[fas.vars[i]] = i;
                std::sort(comp.begin(), comp.end(), [&](VarId a, VarId b) { return pos[a] < pos[b]; });
                out.push_back(std::move(comp));
            }
            VarId done = v;
            work.pop_back();
            if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
        }
    }
    return out;
}

std::map<VarId, Poly> at_z_one(const Fas& fas)
{
    std::map<VarId, Poly> out;
    std::map<VarId, Poly> one{{Fas::z(), Poly::constant(Rat(1))}};
    for (VarId v : fas.vars) out[v] = fas.rhs(v).substitute(one);
    return out;
}

RatMatrix jacobian(const std::map<VarId, Poly>& rhs, const std::vector<VarId>& rows, const std::vector<VarId>& cols,
                   const std::map<VarId, Rat>& at)
{
    RatMatrix j(rows.size(), RatVector(cols.size(), Rat(0)));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Poly& p = rhs.at(rows[r]);
        auto vars = p.variables();
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (vars.count(cols[c])) j[r][c] = eval(p.derivative(cols[c]), at);
    }
    return j;
}

std::string to_string(LeastWitness w)
{
    switch (w) {
    case LeastWitness::None: return "none";
    case LeastWitness::Acyclic: return "acyclic";
    case LeastWitness::Contracting: return "contracting";
    case LeastWitness::Critical: return "critical";
    }
    return "?";
}

bool MinSolution::exact() const
{
    for (const auto& [v, lo] : lower) {
        auto it = upper.find(v);
        if (it == upper.end() || !it->second || *it->second != lo) return false;
    }
    return true;
}

std::optional<Rat> MinSolution::value(VarId v) const
{
    auto lo = lower.find(v);
    auto hi = upper.find(v);
    if (lo == lower.end() || hi == upper.end() || !hi->second || *hi->second != lo->second) return std::nullopt;
    return lo->second;
}

std::map<VarId, Rat> MinSolution::exact_values() const
{
    if (!exact()) throw PreconditionViolated("solution is not exact");
    return lower;
}

namespace {

// One strongly connected component with everything outside it fixed.
class Component {
public:
    Component(const std::map<VarId, Poly>& rhs, const std::vector<VarId>& vars) : rhs_(rhs), vars_(vars)
    {
        std::set<VarId> in(vars.begin(), vars.end());
        for (VarId v : vars) {
            if (rhs.at(v).degree_in(in) > 1) linear_ = false;
            std::vector<Poly> row;
            auto used = rhs.at(v).variables();
            for (VarId u : vars) row.push_back(used.count(u) ? rhs.at(v).derivative(u) : Poly());
            deriv_.push_back(std::move(row));
        }
    }

    std::size_t size() const { return vars_.size(); }
    bool linear() const { return linear_; }

    template <class V, class Env>
    std::vector<V> apply(Env& env, const std::vector<V>& x) const
    {
        load(env, x);
        std::vector<V> out;
        for (VarId v : vars_) out.push_back(value(rhs_.at(v), env));
        return out;
    }

    template <class V, class Env>
    std::vector<std::vector<V>> jac(Env& env, const std::vector<V>& x) const
    {
        load(env, x);
        std::vector<std::vector<V>> j(size(), std::vector<V>(size(), V(0)));
        for (std::size_t r = 0; r < size(); ++r)
            for (std::size_t c = 0; c < size(); ++c)
                if (!deriv_[r][c].is_zero()) j[r][c] = value(deriv_[r][c], env);
        return j;
    }

private:
    template <class V, class Env>
    void load(Env& env, const std::vector<V>& x) const
    {
        for (std::size_t i = 0; i < size(); ++i) env[vars_[i]] = x[i];
    }
    static Rat value(const Poly& p, const std::map<VarId, Rat>& env) { return eval(p, env); }
    static long double value(const Poly& p, const std::map<VarId, long double>& env) { return eval_approx(p, env); }

    const std::map<VarId, Poly>& rhs_;
    std::vector<VarId> vars_;
    std::vector<std::vector<Poly>> deriv_;
    bool linear_ = true;
};

template <class V>
std::vector<std::vector<V>> i_minus(const std::vector<std::vector<V>>& j)
{
    auto a = j;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (auto& x : a[r]) x = -x;
        a[r][r] += V(1);
    }
    return a;
}

bool all_positive(const RatVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x > 0; });
}

// Newton from below, seeded by Kleene steps.
LdVector float_solve(const Component& c, std::map<VarId, long double>& env, unsigned& newton_steps)
{
    LdVector x(c.size(), 0.0L);
    for (int k = 0; k < 30; ++k) x = c.apply(env, x);
    newton_steps = 0;
    for (int k = 0; k < 400; ++k) {
        auto q = c.apply(env, x);
        auto j = c.jac(env, x);
        LdVector r(c.size());
        long double scale = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = q[i] - x[i];
            scale = std::max(scale, std::fabs(x[i]));
        }
        auto delta = solve_ld(i_minus(j), r, 1e-18L);
        if (!delta) {
            for (int m = 0; m < 100; ++m) x = c.apply(env, x);
            continue;
        }
        ++newton_steps;
        long double step = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            long double nx = x[i] + (*delta)[i];
            step = std::max(step, std::fabs(nx - x[i]));
            x[i] = std::max(x[i], nx);
        }
        if (step <= 1e-18L * (1 + scale)) break;
    }
    return x;
}

std::optional<LeastWitness> leastness(const Component& c, std::map<VarId, Rat>& env, const RatVector& v,
                                      RatVector& witness)
{
    auto a = i_minus(c.jac(env, v));
    if (auto y = solve(a, RatVector(c.size(), Rat(1))); y && all_positive(*y)) {
        witness = *y;
        return LeastWitness::Contracting;
    }
    if (c.linear()) return std::nullopt;
    auto ns = nullspace(a);
    if (ns.size() != 1) return std::nullopt;
    RatVector u = ns[0];
    if (u[0] < 0)
        for (auto& x : u) x = -x;
    if (!all_positive(u)) return std::nullopt;
    witness = u;
    return LeastWitness::Critical;
}

}  // namespace

MinSolution solve_at_one(const Fas& fas, const SolveConfig& cfg)
{
    if (!fas.closed()) throw PreconditionViolated("system has free parameters");
    if (cfg.tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
    MinSolution sol;
    sol.system = reachable(fas);
    std::set<VarId> dead = eliminate_unproductive(sol.system);
    auto P = at_z_one(sol.system);
    const unsigned bits = cfg.mode == Arithmetic::Exact ? 96 : 48;
    const unsigned lower_steps = cfg.max_iterations ? cfg.max_iterations : 200;

    std::map<VarId, Rat> lo;
    std::map<VarId, std::optional<Rat>> hi;
    std::map<VarId, long double> ap;
    for (VarId v : sol.system.vars)
        if (dead.count(v)) {
            lo[v] = 0;
            hi[v] = Rat(0);
            ap[v] = 0;
            sol.zero.push_back(v);
        }

    for (const auto& comp : scc_bottom_up(sol.system)) {
        if (comp.size() == 1 && dead.count(comp[0])) continue;
        SccReport rep;
        rep.vars = comp;
        Component c(P, comp);
        rep.linear = c.linear();
        std::set<VarId> in(comp.begin(), comp.end());
        bool deps_exact = true, deps_bounded = true;
        for (VarId v : comp)
            for (VarId u : P.at(v).variables()) {
                if (in.count(u)) continue;
                if (!hi.at(u)) deps_bounded = false;
                if (!hi.at(u) || *hi.at(u) != lo.at(u)) deps_exact = false;
            }
        std::map<VarId, Rat> env_lo = lo, env_hi;
        if (deps_bounded)
            for (const auto& [u, h] : hi)
                if (h) env_hi[u] = *h;
        std::map<VarId, long double> env_ap = ap;

        bool acyclic = comp.size() == 1 && !P.at(comp[0]).variables().count(comp[0]);
        if (acyclic) {
            VarId v = comp[0];
            lo[v] = eval(P.at(v), env_lo);
            hi[v] = deps_bounded ? std::optional<Rat>(eval(P.at(v), env_hi)) : std::nullopt;
            ap[v] = eval_approx(P.at(v), env_ap);
            rep.exact = deps_exact;
            rep.witness = LeastWitness::Acyclic;
            sol.sccs.push_back(std::move(rep));
            continue;
        }

        LdVector x = float_solve(c, env_ap, rep.newton_iterations);
        std::optional<RatVector> exact;
        if (deps_exact) {
            std::set<RatVector> tried;
            for (long double tol : {1e-6L, 1e-9L, 1e-12L, 1e-15L}) {
                RatVector v;
                for (long double xi : x) v.push_back(rationalize(xi, tol, 1000000000000ULL));
                if (!tried.insert(v).second) continue;
                if (!all_positive(v) || c.apply(env_lo, v) != v) continue;
                RatVector w;
                auto kind = leastness(c, env_lo, v, w);
                if (!kind) continue;
                exact = v;
                rep.witness = *kind;
                rep.witness_vector = w;
                break;
            }
        }
        if (exact) {
            for (std::size_t i = 0; i < comp.size(); ++i) {
                lo[comp[i]] = (*exact)[i];
                hi[comp[i]] = (*exact)[i];
                ap[comp[i]] = to_long_double((*exact)[i]);
            }
            rep.exact = true;
            sol.sccs.push_back(std::move(rep));
            continue;
        }

        // Certified lower bound: Kleene and Newton steps from 0, rounded down.
        RatVector l(comp.size(), Rat(0));
        RatVector ones(comp.size(), Rat(1));
        for (unsigned it = 0; it < lower_steps; ++it) {
            RatVector q = c.apply(env_lo, l);
            RatVector next(comp.size());
            for (std::size_t i = 0; i < q.size(); ++i) next[i] = round_down_dyadic(q[i], bits);
            auto a = i_minus(c.jac(env_lo, l));
            if (auto w = solve(a, ones); w && all_positive(*w)) {
                RatVector r(comp.size());
                for (std::size_t i = 0; i < r.size(); ++i) r[i] = q[i] - l[i];
                auto delta = solve(a, r);
                for (std::size_t i = 0; i < r.size(); ++i)
                    next[i] = std::max(next[i], round_down_dyadic(l[i] + (*delta)[i], bits));
            }
            bool moved = false;
            long double gap = 0;
            for (std::size_t i = 0; i < next.size(); ++i) {
                if (next[i] > l[i]) {
                    l[i] = next[i];
                    moved = true;
                }
                gap = std::max(gap, x[i] - to_long_double(l[i]));
            }
            if (!moved || gap < to_long_double(cfg.tolerance) / 4) break;
        }

        // Certified upper bound: a rational pre-fixpoint.
        std::optional<RatVector> u;
        if (deps_bounded) {
            std::vector<RatVector> cands;
            LdVector w(comp.size(), 1.0L);
            if (auto y = solve_ld(i_minus(c.jac(env_ap, x)), LdVector(comp.size(), 1.0L))) {
                bool pos = std::all_of(y->begin(), y->end(), [](long double t) { return t > 0; });
                if (pos) w = *y;
            }
            for (long double d : {1e-15L, 1e-12L, 1e-9L, 1e-6L, 1e-3L}) {
                RatVector a(comp.size()), b(comp.size());
                for (std::size_t i = 0; i < comp.size(); ++i) {
                    a[i] = round_up_dyadic(from_long_double(x[i] + d * w[i]), bits);
                    b[i] = round_up_dyadic(from_long_double(x[i] + d), bits);
                }
                cands.push_back(a);
                cands.push_back(b);
            }
            cands.push_back(ones);
            for (const auto& cand : cands) {
                auto q = c.apply(env_hi, cand);
                bool pre = true;
                for (std::size_t i = 0; i < q.size() && pre; ++i) pre = q[i] <= cand[i];
                if (pre) {
                    u = cand;
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < comp.size(); ++i) {
            lo[comp[i]] = l[i];
            hi[comp[i]] = u ? std::optional<Rat>((*u)[i]) : std::nullopt;
            ap[comp[i]] = x[i];
        }
        rep.note = u ? "bounded" : "no upper bound found";
        sol.sccs.push_back(std::move(rep));
    }

    for (VarId v : sol.system.vars) {
        sol.lower[v] = lo.at(v);
        sol.upper[v] = hi.at(v);
        sol.approx[v] = ap.at(v);
        if (!hi.at(v) || *hi.at(v) - lo.at(v) > cfg.tolerance) sol.inconclusive_width = true;
    }
    return sol;
}

ExpectedSteps expected_steps(const MinSolution& sol, const SolveConfig& cfg)
{
    (void)cfg;
    const Fas& sys = sol.system;
    ExpectedSteps out;
    auto P = at_z_one(sys);
    if (!sol.exact()) {
        // Uncertified estimate only.
        std::map<VarId, long double> env = sol.approx;
        env[Fas::z()] = 1;
        std::size_t n = sys.vars.size();
        LdMatrix a(n, LdVector(n, 0));
        LdVector g(n);
        for (std::size_t r = 0; r < n; ++r) {
            const Poly& p = sys.rhs(sys.vars[r]);
            g[r] = eval_approx(p.derivative(Fas::z()), env);
            for (std::size_t c = 0; c < n; ++c) a[r][c] = (r == c ? 1 : 0) - eval_approx(p.derivative(sys.vars[c]), env);
        }
        if (auto d = solve_ld(a, g, 1e-9L)) {
            auto it = std::find(sys.vars.begin(), sys.vars.end(), sys.start);
            out.approx = (*d)[it - sys.vars.begin()];
            out.note = "solution not exact; estimate only";
        } else {
            out.note = "solution not exact and Jacobian near-singular";
        }
        return out;
    }
    auto v = sol.exact_values();
    if (v.at(sys.start) != 1) throw PreconditionViolated("start value is not 1; expected steps require AST");
    std::map<VarId, Rat> env = v;
    env[Fas::z()] = 1;
    std::map<VarId, Rat> g;
    for (VarId x : sys.vars) g[x] = eval(sys.rhs(x).derivative(Fas::z()), env);

    std::map<VarId, Rat> d;
    std::set<VarId> infinite;
    for (VarId z : sol.zero) d[z] = 0;
    bool have_critical = false;
    for (const auto& rep : sol.sccs) {
        const auto& comp = rep.vars;
        std::set<VarId> in(comp.begin(), comp.end());
        RatVector r(comp.size());
        bool r_inf = false;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            r[i] = g.at(comp[i]);
            for (VarId u : sys.dependencies(comp[i])) {
                if (in.count(u)) continue;
                Rat j = eval(P.at(comp[i]).derivative(u), v);
                if (j == 0) continue;
                if (infinite.count(u)) r_inf = true;
                else r[i] += j * d.at(u);
            }
        }
        if (r_inf) {
            infinite.insert(comp.begin(), comp.end());
            continue;
        }
        auto a = i_minus(jacobian(P, comp, comp, v));
        if (auto x = solve(a, r)) {
            for (std::size_t i = 0; i < comp.size(); ++i) {
                if ((*x)[i] < 0) {
                    out.note = "negative derivative at " + var_name(comp[i]);
                    return out;
                }
                d[comp[i]] = (*x)[i];
            }
            continue;
        }
        if (std::all_of(r.begin(), r.end(), [](const Rat& t) { return t == 0; })) {
            for (VarId x : comp) d[x] = 0;
            continue;
        }
        infinite.insert(comp.begin(), comp.end());
        if (!have_critical) {
            auto ns = nullspace(a);
            if (ns.size() == 1) {
                RatVector u = ns[0];
                if (u[0] < 0)
                    for (auto& t : u) t = -t;
                if (all_positive(u)) {
                    have_critical = true;
                    out.critical_vars = comp;
                    out.eigenvector = u;
                    out.critical_rank = rank(a);
                }
            }
        }
    }

    if (!infinite.count(sys.start)) {
        out.kind = ExpectedSteps::Kind::Finite;
        out.value = d.at(sys.start);
        out.d = d;
        out.approx = to_long_double(out.value);
        return out;
    }
    if (!have_critical) {
        out.note = "infinite expectation without a positive critical eigenvector";
        return out;
    }
    // start -> critical component -> a variable with nonzero z-derivative.
    auto bfs = [&](VarId from, const std::function<bool(VarId)>& goal) {
        std::map<VarId, VarId> parent;
        std::deque<VarId> q{from};
        parent[from] = from;
        while (!q.empty()) {
            VarId a = q.front();
            q.pop_front();
            if (goal(a)) {
                std::vector<VarId> path{a};
                while (path.back() != from) path.push_back(parent[path.back()]);
                std::reverse(path.begin(), path.end());
                return path;
            }
            for (VarId b : sys.dependencies(a))
                if (!parent.count(b)) {
                    parent[b] = a;
                    q.push_back(b);
                }
        }
        return std::vector<VarId>{};
    };
    std::set<VarId> crit(out.critical_vars.begin(), out.critical_vars.end());
    auto first = bfs(sys.start, [&](VarId a) { return crit.count(a) != 0; });
    auto second = bfs(first.back(), [&](VarId a) { return g.at(a) > 0; });
    if (first.empty() || second.empty()) {
        out.note = "no witness path through the critical component";
        return out;
    }
    out.path = first;
    out.path.insert(out.path.end(), second.begin() + 1, second.end());
    out.kind = ExpectedSteps::Kind::Infinite;
    return out;
}

}  // namespace phorslab
