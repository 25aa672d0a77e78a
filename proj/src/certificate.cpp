#include "phorslab/certificate.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace phorslab {

std::string to_string(Certificate::Kind k)
{
    switch (k) {
    case Certificate::Kind::None: return "None";
    case Certificate::Kind::FixpointAtOne: return "FixpointAtOne";
    case Certificate::Kind::PreFixpointBelowOne: return "PreFixpointBelowOne";
    case Certificate::Kind::CriticalJacobian: return "CriticalJacobian";
    case Certificate::Kind::NonsingularLinearSolve: return "NonsingularLinearSolve";
    }
    return "?";
}

namespace {

nlohmann::json rat_map(const std::map<VarId, Rat>& m)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [v, q] : m) j[var_name(v)] = to_string(q);
    return j;
}

std::map<VarId, Rat> rat_map(const nlohmann::json& j)
{
    std::map<VarId, Rat> m;
    for (const auto& [k, q] : j.items()) m[var_id(k)] = parse_rat(q.get<std::string>());
    return m;
}

nlohmann::json rat_vec(const RatVector& v)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& q : v) j.push_back(to_string(q));
    return j;
}

RatVector rat_vec(const nlohmann::json& j)
{
    RatVector v;
    for (const auto& q : j) v.push_back(parse_rat(q.get<std::string>()));
    return v;
}

nlohmann::json var_list(const std::vector<VarId>& vs)
{
    nlohmann::json j = nlohmann::json::array();
    for (VarId v : vs) j.push_back(var_name(v));
    return j;
}

std::vector<VarId> var_list(const nlohmann::json& j)
{
    std::vector<VarId> vs;
    for (const auto& s : j) vs.push_back(var_id(s.get<std::string>()));
    return vs;
}

Certificate::Kind kind_from(const std::string& s)
{
    for (auto k : {Certificate::Kind::None, Certificate::Kind::FixpointAtOne, Certificate::Kind::PreFixpointBelowOne,
                   Certificate::Kind::CriticalJacobian, Certificate::Kind::NonsingularLinearSolve})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown certificate kind '" + s + "'");
}

}  // namespace

nlohmann::json Certificate::to_json() const
{
    nlohmann::json j;
    j["kind"] = to_string(kind);
    if (kind == Kind::None) return j;
    j["values"] = rat_map(values);
    j["components"] = nlohmann::json::array();
    for (const auto& c : components)
        j["components"].push_back({{"vars", var_list(c.vars)}, {"witness", c.witness}, {"vector", rat_vec(c.vector)}});
    if (kind == Kind::CriticalJacobian) {
        j["critical_vars"] = var_list(critical_vars);
        j["eigenvector"] = rat_vec(eigenvector);
        j["rank"] = critical_rank;
        j["path"] = var_list(path);
    }
    if (kind == Kind::NonsingularLinearSolve) j["derivative"] = rat_map(derivative);
    return j;
}

Certificate Certificate::from_json(const nlohmann::json& j)
{
    Certificate c;
    c.kind = kind_from(j.at("kind").get<std::string>());
    if (c.kind == Kind::None) return c;
    c.values = rat_map(j.at("values"));
    for (const auto& k : j.at("components"))
        c.components.push_back(
            {var_list(k.at("vars")), k.at("witness").get<std::string>(), rat_vec(k.at("vector"))});
    if (c.kind == Kind::CriticalJacobian) {
        c.critical_vars = var_list(j.at("critical_vars"));
        c.eigenvector = rat_vec(j.at("eigenvector"));
        c.critical_rank = j.at("rank").get<std::size_t>();
        c.path = var_list(j.at("path"));
    }
    if (c.kind == Kind::NonsingularLinearSolve) c.derivative = rat_map(j.at("derivative"));
    return c;
}

namespace {

// The system restricted to variables reachable from start, at z = 1.
struct View {
    VarId start;
    std::vector<VarId> vars;
    std::map<VarId, Poly> at_one;  // z = 1
    std::map<VarId, Poly> full;    // z kept
};

View make_view(const Fas& fas)
{
    View w;
    w.start = fas.start;
    std::set<VarId> seen{fas.start};
    std::deque<VarId> todo{fas.start};
    while (!todo.empty()) {
        VarId v = todo.front();
        todo.pop_front();
        if (!fas.has(v)) continue;
        for (VarId u : fas.rhs(v).variables())
            if (fas.has(u) && seen.insert(u).second) todo.push_back(u);
    }
    Poly one = Poly::constant(Rat(1));
    for (VarId v : fas.vars) {
        if (!seen.count(v)) continue;
        w.vars.push_back(v);
        w.full[v] = fas.rhs(v);
        w.at_one[v] = fas.rhs(v).substitute({{Fas::z(), one}});
    }
    return w;
}

// Kosaraju over `vars` with edges v -> u for u occurring in rhs(v).
std::vector<std::vector<VarId>> components_of(const std::vector<VarId>& vars, const std::map<VarId, Poly>& rhs)
{
    std::set<VarId> in(vars.begin(), vars.end());
    std::map<VarId, std::vector<VarId>> fwd, bwd;
    for (VarId v : vars)
        for (VarId u : rhs.at(v).variables())
            if (in.count(u)) {
                fwd[v].push_back(u);
                bwd[u].push_back(v);
            }
    std::vector<VarId> order;
    std::set<VarId> seen;
    for (VarId root : vars) {
        if (seen.count(root)) continue;
        std::vector<std::pair<VarId, std::size_t>> st{{root, 0}};
        seen.insert(root);
        while (!st.empty()) {
            auto& [v, i] = st.back();
            if (i < fwd[v].size()) {
                VarId u = fwd[v][i++];
                if (seen.insert(u).second) st.emplace_back(u, 0);
            } else {
                order.push_back(v);
                st.pop_back();
            }
        }
    }
    std::vector<std::vector<VarId>> out;
    std::set<VarId> assigned;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (assigned.count(*it)) continue;
        std::vector<VarId> comp;
        std::vector<VarId> st{*it};
        assigned.insert(*it);
        while (!st.empty()) {
            VarId v = st.back();
            st.pop_back();
            comp.push_back(v);
            for (VarId u : bwd[v])
                if (assigned.insert(u).second) st.push_back(u);
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

Rat partial(const Poly& p, VarId u, const std::map<VarId, Rat>& at) { return eval(p.derivative(u), at); }

CertificateCheck fail(std::string why)
{
    CertificateCheck c;
    c.reason = std::move(why);
    return c;
}

// Checks that `values` covers the reachable system, is nonnegative, and
// satisfies P(v) <= v (or = when `fixpoint`); then checks leastness evidence.
CertificateCheck check_values(const View& w, const Certificate& c, bool fixpoint)
{
    for (VarId v : w.vars) {
        auto it = c.values.find(v);
        if (it == c.values.end()) return fail("no value for reachable variable " + var_name(v));
        if (it->second < 0) return fail("negative value for " + var_name(v));
        for (const auto& [m, q] : w.full.at(v).terms())
            if (q < 0) return fail("negative coefficient in the equation of " + var_name(v));
    }
    bool is_fix = true;
    for (VarId v : w.vars) {
        Rat pv = eval(w.at_one.at(v), c.values);
        if (pv > c.values.at(v)) return fail("P(v) > v at " + var_name(v));
        if (pv != c.values.at(v)) is_fix = false;
    }
    if (fixpoint && !is_fix) return fail("P(v) != v");
    CertificateCheck out;
    out.ok = true;
    if (!is_fix) return out;

    // Leastness on the positive part, component by component.
    std::vector<VarId> pos;
    std::set<VarId> zeros;
    for (VarId v : w.vars) {
        if (c.values.at(v) > 0)
            pos.push_back(v);
        else
            zeros.insert(v);
    }
    std::map<VarId, Poly> rhs;
    for (VarId v : pos) rhs[v] = w.at_one.at(v).kill(zeros);
    for (const auto& comp : components_of(pos, rhs)) {
        std::set<VarId> in(comp.begin(), comp.end());
        bool self = comp.size() > 1 || rhs.at(comp[0]).variables().count(comp[0]);
        if (!self) continue;
        const Certificate::Component* ev = nullptr;
        for (const auto& k : c.components) {
            std::vector<VarId> kv = k.vars;
            std::sort(kv.begin(), kv.end());
            if (kv == comp) ev = &k;
        }
        if (!ev) {
            out.reason = "no leastness evidence for component of " + var_name(comp[0]);
            return out;
        }
        if (ev->vector.size() != comp.size()) return fail("evidence vector has the wrong length");
        // Align the evidence vector with the sorted component.
        std::map<VarId, Rat> vec;
        for (std::size_t i = 0; i < ev->vars.size(); ++i) vec[ev->vars[i]] = ev->vector[i];
        for (const auto& [v, q] : vec)
            if (q <= 0) return fail("evidence vector is not positive");
        for (VarId r : comp) {
            Rat jy = 0;
            for (VarId col : comp)
                if (rhs.at(r).variables().count(col)) jy += partial(rhs.at(r), col, c.values) * vec.at(col);
            if (ev->witness == "contracting") {
                if (vec.at(r) - jy != 1) return fail("(I - J) y != 1 at " + var_name(r));
            } else if (ev->witness == "critical") {
                if (jy != vec.at(r)) return fail("J u != u at " + var_name(r));
            } else {
                return fail("unknown evidence kind '" + ev->witness + "'");
            }
        }
        if (ev->witness == "critical") {
            bool nonlinear = false;
            for (VarId r : comp)
                if (rhs.at(r).degree_in(in) >= 2) nonlinear = true;
            if (!nonlinear) return fail("critical evidence on a linear component");
        }
    }
    out.least = true;
    return out;
}

}  // namespace

CertificateCheck check_certificate(const Fas& fas, const Certificate& c)
{
    if (!fas.closed()) return fail("system has free parameters");
    View w = make_view(fas);
    switch (c.kind) {
    case Certificate::Kind::None:
        return fail("no certificate");
    case Certificate::Kind::FixpointAtOne: {
        auto r = check_values(w, c, true);
        if (!r.ok) return r;
        if (!r.least) return fail("leastness not established: " + r.reason);
        if (c.values.at(w.start) != 1) return fail("start value is not 1");
        return r;
    }
    case Certificate::Kind::PreFixpointBelowOne: {
        auto r = check_values(w, c, false);
        if (!r.ok) return r;
        if (c.values.at(w.start) >= 1) return fail("start value is not below 1");
        return r;
    }
    case Certificate::Kind::CriticalJacobian:
    case Certificate::Kind::NonsingularLinearSolve:
        break;
    }
    // Both expectation certificates sit on top of an AST certificate.
    Certificate ast = c;
    ast.kind = Certificate::Kind::FixpointAtOne;
    auto base = check_certificate(fas, ast);
    if (!base.ok) return fail("AST part: " + base.reason);
    std::map<VarId, Rat> env = c.values;
    env[Fas::z()] = 1;
    std::vector<VarId> pos;
    std::set<VarId> zeros;
    for (VarId v : w.vars) (c.values.at(v) > 0 ? pos.push_back(v) : (void)zeros.insert(v));
    std::map<VarId, Poly> full;
    for (VarId v : pos) full[v] = w.full.at(v).kill(zeros);
    auto dz = [&](VarId v) { return eval(full.at(v).derivative(Fas::z()), env); };

    if (c.kind == Certificate::Kind::NonsingularLinearSolve) {
        std::size_t n = pos.size();
        RatMatrix a(n, RatVector(n, Rat(0)));
        for (std::size_t r = 0; r < n; ++r) {
            auto used = full.at(pos[r]).variables();
            Rat lhs = c.derivative.count(pos[r]) ? c.derivative.at(pos[r]) : Rat(-1);
            if (lhs < 0) return fail("missing or negative derivative at " + var_name(pos[r]));
            Rat rhs = dz(pos[r]);
            for (std::size_t k = 0; k < n; ++k) {
                Rat j = used.count(pos[k]) ? partial(full.at(pos[r]), pos[k], env) : Rat(0);
                a[r][k] = (r == k ? 1 : 0) - j;
                if (j != 0) {
                    if (!c.derivative.count(pos[k])) return fail("missing derivative at " + var_name(pos[k]));
                    rhs += j * c.derivative.at(pos[k]);
                }
            }
            if (rhs != lhs) return fail("d != J d + g at " + var_name(pos[r]));
        }
        if (rank(a) != n) return fail("I - J is singular");
        CertificateCheck ok;
        ok.ok = ok.least = true;
        return ok;
    }

    // CriticalJacobian.
    const auto& cv = c.critical_vars;
    if (cv.empty() || cv.size() != c.eigenvector.size()) return fail("malformed critical component");
    std::set<VarId> in(cv.begin(), cv.end());
    for (VarId v : cv)
        if (!full.count(v)) return fail("critical variable " + var_name(v) + " is not positive and reachable");
    auto edge = [&](VarId a, VarId b) { return full.at(a).variables().count(b) && partial(full.at(a), b, env) > 0; };
    // Strongly connected through positive Jacobian entries.
    for (bool forward : {true, false}) {
        std::set<VarId> seen{cv[0]};
        std::vector<VarId> st{cv[0]};
        while (!st.empty()) {
            VarId a = st.back();
            st.pop_back();
            for (VarId b : cv)
                if (!seen.count(b) && (forward ? edge(a, b) : edge(b, a))) {
                    seen.insert(b);
                    st.push_back(b);
                }
        }
        if (seen.size() != cv.size()) return fail("critical component is not strongly connected");
    }
    for (std::size_t r = 0; r < cv.size(); ++r) {
        if (c.eigenvector[r] <= 0) return fail("eigenvector is not positive");
        Rat ju = 0;
        for (std::size_t k = 0; k < cv.size(); ++k)
            if (full.at(cv[r]).variables().count(cv[k])) ju += partial(full.at(cv[r]), cv[k], env) * c.eigenvector[k];
        if (ju != c.eigenvector[r]) return fail("J u != u at " + var_name(cv[r]));
    }
    if (c.path.empty() || c.path.front() != w.start) return fail("path does not begin at the start variable");
    bool through = false;
    for (std::size_t i = 0; i < c.path.size(); ++i) {
        if (!full.count(c.path[i])) return fail("path leaves the positive system");
        if (in.count(c.path[i])) through = true;
        if (i + 1 < c.path.size() && !edge(c.path[i], c.path[i + 1])) return fail("path step is not a dependency");
    }
    if (!through) return fail("path misses the critical component");
    if (dz(c.path.back()) <= 0) return fail("path does not end at a variable depending on z");
    CertificateCheck ok;
    ok.ok = ok.least = true;
    return ok;
}

}  // namespace phorslab
