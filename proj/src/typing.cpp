#include "phorslab/typing.hpp"
#include "phorslab/parser.hpp"

#include <algorithm>

namespace phorslab {

// ---- GradedCtx

GradedCtx GradedCtx::single(const std::string& x, unsigned grade, const Type& type)
{
    GradedCtx c;
    c.bindings_[x] = Binding{grade, type};
    return c;
}

unsigned GradedCtx::grade_of(const std::string& x) const
{
    auto it = bindings_.find(x);
    return it == bindings_.end() ? 0 : it->second.grade;
}

void GradedCtx::check_agree(const GradedCtx& o) const
{
    for (const auto& [x, b] : o.bindings_) {
        auto it = bindings_.find(x);
        if (it != bindings_.end() && !(it->second.type == b.type))
            throw ContextMismatch("contexts disagree on the type of '" + x + "': " + it->second.type.str() +
                                  " vs " + b.type.str());
    }
}

GradedCtx GradedCtx::operator+(const GradedCtx& o) const
{
    check_agree(o);
    GradedCtx r = *this;
    for (const auto& [x, b] : o.bindings_) {
        auto [it, fresh] = r.bindings_.emplace(x, b);
        if (!fresh) it->second.grade += b.grade;
    }
    return r;
}

GradedCtx GradedCtx::scaled(unsigned k) const
{
    GradedCtx r = *this;
    for (auto& [x, b] : r.bindings_) b.grade *= k;
    return r;
}

GradedCtx GradedCtx::join(const GradedCtx& o) const
{
    check_agree(o);
    GradedCtx r = *this;
    for (const auto& [x, b] : o.bindings_) {
        auto [it, fresh] = r.bindings_.emplace(x, b);
        if (!fresh) it->second.grade = std::max(it->second.grade, b.grade);
    }
    return r;
}

bool operator==(const GradedCtx& a, const GradedCtx& b)
{
    auto covered = [](const GradedCtx& x, const GradedCtx& y) {
        for (const auto& [n, bind] : x.bindings_) {
            if (bind.grade == 0) continue;
            auto it = y.bindings_.find(n);
            if (it == y.bindings_.end() || !(it->second == bind)) return false;
        }
        return true;
    };
    return covered(a, b) && covered(b, a);
}

// ---- subtyping

bool subtype(const Type& a, const Type& b)
{
    if (a.is_ground() || b.is_ground()) return a.is_ground() && b.is_ground() && a.width() == b.width();
    return a.grade() <= b.grade() && subtype(a.arg(), b.arg()) && subtype(a.result(), b.result());
}

// ---- checking

namespace {

struct Synth {
    Type type;
    GradedCtx ctx;
};

class RuleError : public std::runtime_error {
public:
    RuleError(std::string constraint, const std::string& msg)
        : std::runtime_error(msg), constraint(std::move(constraint))
    {
    }
    std::string constraint;
};

class Checker {
public:
    Checker(const Scheme& s, TypeSystem sys) : s_(s), sys_(sys) {}

    TypingReport run();

private:
    void check_declared(const std::string& owner, const Type& t, bool spine);
    void check_rule(const Rule& r, TypingReport& rep);
    Synth synth(const Term& t);
    Type name_type(const Term& t) const;
    // Occurrence paths of x with their multiplicity factor.
    void occurrences(const Term& t, const std::string& x, const std::string& path, unsigned factor,
                     std::vector<std::string>& out) const;

    const Scheme& s_;
    TypeSystem sys_;
    std::map<std::string, Type> finite_vars_;
    std::map<std::string, Type> inf_vars_;
};

void Checker::check_declared(const std::string& owner, const Type& t, bool spine)
{
    if (t.is_ground()) return;
    if (!t.grade().finite()) {
        if (sys_ == TypeSystem::Finitary)
            throw RuleError("infinite-grade", "'" + owner + "' has an infinite grade in " + t.str() +
                                                  "; the finitary system admits only finite grades");
        if (!spine)
            throw RuleError("infinite-grade", "'" + owner + "': infinite grades may only occur on the spine of a "
                                              "non-terminal's type, not inside " + t.str());
    }
    check_declared(owner, t.arg(), false);
    check_declared(owner, t.result(), spine);
}

Type Checker::name_type(const Term& t) const
{
    switch (t.kind()) {
    case TermKind::Var: {
        if (auto it = finite_vars_.find(t.name()); it != finite_vars_.end()) return it->second;
        if (auto it = inf_vars_.find(t.name()); it != inf_vars_.end()) return it->second;
        throw RuleError("unknown-name", "unbound variable '" + t.name() + "'");
    }
    case TermKind::NonTerm: {
        const Rule* r = s_.find(t.name());
        if (!r) throw RuleError("unknown-name", "unknown non-terminal '" + t.name() + "'");
        return r->type;
    }
    case TermKind::Param: {
        auto pt = s_.param_type(t.name());
        if (!pt) throw RuleError("unknown-name", "unknown parameter '" + t.name() + "'");
        return *pt;
    }
    default:
        throw std::logic_error("name_type on a non-name");
    }
}

Synth Checker::synth(const Term& t)
{
    switch (t.kind()) {
    case TermKind::Var: {
        Type ty = name_type(t);
        if (finite_vars_.count(t.name())) return {ty, GradedCtx::single(t.name(), 1, ty)};
        return {ty, {}};
    }
    case TermKind::NonTerm:
    case TermKind::Param:
        return {name_type(t), {}};
    case TermKind::Unit:
    case TermKind::Omega:
        return {Type::ground(1), {}};
    case TermKind::App: {
        Synth f = synth(t.fun());
        if (!f.type.is_arrow())
            throw RuleError("type-mismatch", "'" + print_term(t.fun()) + "' of type " + f.type.str() +
                                                 " is applied to an argument");
        const Type& want = f.type.arg();
        Grade g = f.type.grade();
        if (!g.finite()) {
            if (sys_ == TypeSystem::Finitary)
                throw RuleError("infinite-grade", "application through an infinite grade in the finitary system");
            const Term& u = t.arg();
            bool bare = u.kind() == TermKind::NonTerm || u.kind() == TermKind::Param ||
                        (u.kind() == TermKind::Var && inf_vars_.count(u.name()));
            if (!bare)
                throw RuleError("infinitary-argument",
                                "argument '" + print_term(u) + "' passed through grade inf to '" + print_term(t.fun()) +
                                    "' is neither a parameter nor a non-terminal");
            Type ut = name_type(u);
            if (!(ut == want))
                throw RuleError("type-mismatch", "argument '" + print_term(u) + "' has type " + ut.str() +
                                                     " but " + want.str() + " is expected");
            if (!ut.finitary())
                throw RuleError("infinitary-argument",
                                "argument '" + print_term(u) + "' of infinitary type " + ut.str() +
                                    " cannot be passed through grade inf");
            return {f.type.result(), f.ctx};
        }
        Synth a = synth(t.arg());
        if (!(a.type == want))
            throw RuleError("type-mismatch", "argument '" + print_term(t.arg()) + "' has type " + a.type.str() +
                                                 " but '" + print_term(t.fun()) + "' expects " + want.str());
        try {
            return {f.type.result(), f.ctx + a.ctx.scaled(g.value())};
        } catch (const ContextMismatch& e) {
            throw RuleError("type-mismatch", e.what());
        }
    }
    case TermKind::Choice: {
        Synth l = synth(t.left());
        Synth r = synth(t.right());
        if (!(l.type == Type::ground(1)) || !(r.type == Type::ground(1)))
            throw RuleError("choice-not-ground", "probabilistic choice at type " +
                                                     (l.type == Type::ground(1) ? r.type : l.type).str() +
                                                     "; choice is only allowed at type o");
        return {Type::ground(1), l.ctx.join(r.ctx)};
    }
    case TermKind::Tuple: {
        GradedCtx ctx;
        for (const auto& it : t.items()) {
            Synth s = synth(it);
            if (!(s.type == Type::ground(1)))
                throw RuleError("type-mismatch", "tuple component '" + print_term(it) + "' has type " +
                                                     s.type.str() + " instead of o");
            ctx = ctx.join(s.ctx);
        }
        return {Type::ground(static_cast<unsigned>(t.items().size())), ctx};
    }
    case TermKind::Proj: {
        Synth b = synth(t.body());
        if (!b.type.is_ground() || t.index() > b.type.width())
            throw RuleError("type-mismatch", "projection pi_" + std::to_string(t.index()) + " of '" +
                                                 print_term(t.body()) + "' of type " + b.type.str());
        return {Type::ground(1), b.ctx};
    }
    }
    throw std::logic_error("unreachable");
}

void Checker::occurrences(const Term& t, const std::string& x, const std::string& path, unsigned factor,
                          std::vector<std::string>& out) const
{
    auto sub = [&](const std::string& step) { return path.empty() ? step : path + "/" + step; };
    switch (t.kind()) {
    case TermKind::Var:
        if (t.name() == x)
            out.push_back((path.empty() ? std::string("body") : path) + " counts " + std::to_string(factor));
        return;
    case TermKind::App: {
        occurrences(t.fun(), x, sub("fun"), factor, out);
        unsigned k = 1;
        try {
            std::map<std::string, Type> locals = finite_vars_;
            locals.insert(inf_vars_.begin(), inf_vars_.end());
            Type ft = term_type(s_, locals, t.fun());
            if (ft.is_arrow() && ft.grade().finite()) k = ft.grade().value();
        } catch (const std::exception&) {
        }
        occurrences(t.arg(), x, sub("arg(x" + std::to_string(k) + ")"), factor * k, out);
        return;
    }
    case TermKind::Choice:
        occurrences(t.left(), x, sub("left"), factor, out);
        occurrences(t.right(), x, sub("right"), factor, out);
        return;
    case TermKind::Tuple:
        for (std::size_t i = 0; i < t.items().size(); ++i)
            occurrences(t.items()[i], x, sub("item" + std::to_string(i + 1)), factor, out);
        return;
    case TermKind::Proj:
        occurrences(t.body(), x, sub("pi_" + std::to_string(t.index())), factor, out);
        return;
    default:
        return;
    }
}

void Checker::check_rule(const Rule& r, TypingReport& rep)
{
    finite_vars_.clear();
    inf_vars_.clear();
    Type declared = r.type;
    std::optional<Type> inferred;
    try {
        check_declared(r.name, r.type, true);
        if (r.params.size() > r.type.arity())
            throw RuleError("arity", "rule '" + r.name + "' takes " + std::to_string(r.params.size()) +
                                         " parameters but its type " + r.type.str() + " has only " +
                                         std::to_string(r.type.arity()) + " arguments");
        const Type& residual = r.type.residual(static_cast<unsigned>(r.params.size()));
        if (!residual.is_ground())
            throw RuleError("arity", "rule '" + r.name + "' must bind every argument of " + r.type.str() +
                                         " (eta-expand the definition)");
        const Type* t = &r.type;
        bool seen_finite = false;
        for (const auto& p : r.params) {
            if (!t->grade().finite()) {
                if (seen_finite)
                    throw RuleError("infinitary-binder", "rule '" + r.name + "': parameter '" + p +
                                                             "' with grade inf follows a finitely graded parameter");
                inf_vars_[p] = t->arg();
            } else {
                seen_finite = true;
                finite_vars_[p] = t->arg();
            }
            t = &t->result();
        }
        Synth body = synth(r.body);
        if (!(body.type == residual))
            throw RuleError("type-mismatch", "body of '" + r.name + "' has type " + body.type.str() + " but " +
                                                 residual.str() + " is declared");
        // Rebuild the derived type with inferred usage grades.
        std::vector<std::pair<Grade, Type>> args;
        t = &r.type;
        for (const auto& p : r.params) {
            Grade g = t->grade().finite() ? Grade(body.ctx.grade_of(p)) : Grade::inf();
            args.emplace_back(g, t->arg());
            t = &t->result();
        }
        Type derived = residual;
        for (auto it = args.rbegin(); it != args.rend(); ++it) derived = Type::arrow(it->first, it->second, derived);
        inferred = derived;
        t = &r.type;
        for (const auto& p : r.params) {
            if (t->grade().finite() && body.ctx.grade_of(p) > t->grade().value()) {
                Diagnostic d{r.name, "grade-overflow",
                             "'" + p + "' is used " + std::to_string(body.ctx.grade_of(p)) +
                                 " times but declared with grade " + t->grade().str() + "; inferred type " +
                                 derived.str() + " is not a subtype of the declared " + r.type.str(),
                             derived, r.type, {}};
                occurrences(r.body, p, "", 1, d.witness);
                rep.diagnostics.push_back(std::move(d));
                return;
            }
            t = &t->result();
        }
        if (!subtype(derived, r.type))
            throw RuleError("subtype", "derived type " + derived.str() + " is not a subtype of " + r.type.str());
        rep.derived.emplace_back(r.name, derived);
    } catch (const RuleError& e) {
        rep.diagnostics.push_back(Diagnostic{r.name, e.constraint, e.what(), inferred, declared, {}});
    }
}

TypingReport Checker::run()
{
    TypingReport rep;
    rep.system = sys_;
    for (const auto& [name, ty] : s_.params) {
        if (!ty.finitary())
            rep.diagnostics.push_back(Diagnostic{name, "infinite-grade",
                                                 "parameter '" + name + "' must have a finitary type, got " + ty.str(),
                                                 std::nullopt, ty, {}});
    }
    for (const auto& r : s_.rules) check_rule(r, rep);
    rep.accepted = rep.diagnostics.empty();
    return rep;
}

}  // namespace

TypingReport check_fin(const Scheme& s)
{
    return Checker(s, TypeSystem::Finitary).run();
}

TypingReport check_inf(const Scheme& s)
{
    return Checker(s, TypeSystem::Infinitary).run();
}

TypingReport check(const Scheme& s, TypeSystem sys)
{
    return sys == TypeSystem::Finitary ? check_fin(s) : check_inf(s);
}

std::map<std::string, Type> rule_locals(const Rule& r)
{
    std::map<std::string, Type> locals;
    const Type* t = &r.type;
    for (const auto& p : r.params) {
        if (!t->is_arrow()) throw TypeError("rule '" + r.name + "' has more parameters than arrows in its type");
        locals[p] = t->arg();
        t = &t->result();
    }
    return locals;
}

Type term_type(const Scheme& s, const std::map<std::string, Type>& locals, const Term& t)
{
    switch (t.kind()) {
    case TermKind::Var: {
        auto it = locals.find(t.name());
        if (it == locals.end()) throw TypeError("unbound variable '" + t.name() + "'");
        return it->second;
    }
    case TermKind::NonTerm: {
        const Rule* r = s.find(t.name());
        if (!r) throw TypeError("unknown non-terminal '" + t.name() + "'");
        return r->type;
    }
    case TermKind::Param: {
        auto pt = s.param_type(t.name());
        if (!pt) throw TypeError("unknown parameter '" + t.name() + "'");
        return *pt;
    }
    case TermKind::Unit:
    case TermKind::Omega:
    case TermKind::Choice:
    case TermKind::Proj:
        return Type::ground(1);
    case TermKind::Tuple:
        return Type::ground(static_cast<unsigned>(t.items().size()));
    case TermKind::App: {
        Type f = term_type(s, locals, t.fun());
        if (!f.is_arrow()) throw TypeError("application of a non-function '" + print_term(t.fun()) + "'");
        return f.result();
    }
    }
    throw std::logic_error("unreachable");
}

}  // namespace phorslab
