#include "phorslab/term.hpp"

#include <stdexcept>

namespace phorslab {

namespace {

std::shared_ptr<const Term::Node> unit_node()
{
    static const auto n = [] {
        auto p = std::make_shared<Term::Node>();
        p->kind = TermKind::Unit;
        return std::shared_ptr<const Term::Node>(p);
    }();
    return n;
}

}  // namespace

Term::Node::~Node()
{
    std::vector<std::shared_ptr<const Node>> doomed;
    for (auto& k : kids)
        if (k.node_.use_count() == 1) doomed.push_back(std::move(k.node_));
    while (!doomed.empty()) {
        std::shared_ptr<const Node> n = std::move(doomed.back());
        doomed.pop_back();
        if (n.use_count() != 1) continue;
        for (auto& k : const_cast<Node&>(*n).kids)
            if (k.node_.use_count() == 1) doomed.push_back(std::move(k.node_));
    }
}

Term::Term() : node_(unit_node()) {}

Term Term::var(std::string name)
{
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Var;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::nonterm(std::string name)
{
    auto n = std::make_shared<Node>();
    n->kind = TermKind::NonTerm;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::param(std::string name)
{
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Param;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::unit()
{
    return Term();
}

Term Term::omega()
{
    static const auto n = [] {
        auto p = std::make_shared<Node>();
        p->kind = TermKind::Omega;
        return std::shared_ptr<const Node>(p);
    }();
    return Term(n);
}

Term Term::app(Term fun, Term arg)
{
    auto n = std::make_shared<Node>();
    n->kind = TermKind::App;
    n->kids = {std::move(fun), std::move(arg)};
    return Term(std::move(n));
}

Term Term::apply(Term head, const std::vector<Term>& args)
{
    for (const auto& a : args) head = app(std::move(head), a);
    return head;
}

Term Term::choice(Term left, Rat bias, Term right)
{
    if (bias < 0 || bias > 1) throw std::invalid_argument("choice bias outside [0,1]: " + to_string(bias));
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Choice;
    n->bias = std::move(bias);
    n->kids = {std::move(left), std::move(right)};
    return Term(std::move(n));
}

Term Term::tuple(std::vector<Term> items)
{
    if (items.empty()) throw std::invalid_argument("empty tuple");
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Tuple;
    n->kids = std::move(items);
    return Term(std::move(n));
}

Term Term::proj(unsigned index, Term body)
{
    if (index == 0) throw std::invalid_argument("projection index starts at 1");
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Proj;
    n->index = index;
    n->kids = {std::move(body)};
    return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::fun() const { return node_->kids.at(0); }
const Term& Term::arg() const { return node_->kids.at(1); }
const Term& Term::left() const { return node_->kids.at(0); }
const Term& Term::right() const { return node_->kids.at(1); }
const Rat& Term::bias() const { return node_->bias; }
const std::vector<Term>& Term::items() const { return node_->kids; }
unsigned Term::index() const { return node_->index; }
const Term& Term::body() const { return node_->kids.at(0); }

const Term& Term::head() const
{
    const Term* t = this;
    while (t->kind() == TermKind::App) t = &t->fun();
    return *t;
}

std::vector<Term> Term::spine_args() const
{
    std::vector<Term> args;
    const Term* t = this;
    while (t->kind() == TermKind::App) {
        args.push_back(t->arg());
        t = &t->fun();
    }
    return {args.rbegin(), args.rend()};
}

std::size_t Term::size() const
{
    std::size_t s = 1;
    for (const auto& k : node_->kids) s += k.size();
    return s;
}

bool operator==(const Term& a, const Term& b)
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.name == y.name && x.bias == y.bias && x.index == y.index && x.kids == y.kids;
}

Term replace_leaves(const Term& t, const std::function<std::optional<Term>(const Term&)>& f)
{
    switch (t.kind()) {
    case TermKind::Var:
    case TermKind::NonTerm:
    case TermKind::Param: {
        auto r = f(t);
        return r ? *r : t;
    }
    case TermKind::Unit:
    case TermKind::Omega:
        return t;
    case TermKind::App: {
        Term a = replace_leaves(t.fun(), f), b = replace_leaves(t.arg(), f);
        if (a.same_node(t.fun()) && b.same_node(t.arg())) return t;
        return Term::app(a, b);
    }
    case TermKind::Choice: {
        Term a = replace_leaves(t.left(), f), b = replace_leaves(t.right(), f);
        if (a.same_node(t.left()) && b.same_node(t.right())) return t;
        return Term::choice(a, t.bias(), b);
    }
    case TermKind::Tuple: {
        std::vector<Term> items;
        bool same = true;
        for (const auto& u : t.items()) {
            items.push_back(replace_leaves(u, f));
            same = same && items.back().same_node(u);
        }
        return same ? t : Term::tuple(std::move(items));
    }
    case TermKind::Proj: {
        Term b = replace_leaves(t.body(), f);
        return b.same_node(t.body()) ? t : Term::proj(t.index(), b);
    }
    }
    return t;
}

}  // namespace phorslab
