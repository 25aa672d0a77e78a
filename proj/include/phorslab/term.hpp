#pragma once

#include "phorslab/rational.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace phorslab {

enum class TermKind { Var, NonTerm, Param, Unit, Omega, App, Choice, Tuple, Proj };

// Immutable term tree with structural sharing.
class Term {
public:
    Term();  // e
    static Term var(std::string name);
    static Term nonterm(std::string name);
    static Term param(std::string name);
    static Term unit();
    static Term omega();
    static Term app(Term fun, Term arg);
    static Term apply(Term head, const std::vector<Term>& args);
    static Term choice(Term left, Rat bias, Term right);
    static Term tuple(std::vector<Term> items);
    static Term proj(unsigned index, Term body);

    TermKind kind() const;
    const std::string& name() const;
    const Term& fun() const;
    const Term& arg() const;
    const Term& left() const;
    const Term& right() const;
    const Rat& bias() const;
    const std::vector<Term>& items() const;
    unsigned index() const;
    const Term& body() const;

    bool is_name() const
    {
        auto k = kind();
        return k == TermKind::Var || k == TermKind::NonTerm || k == TermKind::Param;
    }

    // Head and arguments of an application spine.
    const Term& head() const;
    std::vector<Term> spine_args() const;

    // Number of nodes.
    std::size_t size() const;

    bool same_node(const Term& o) const { return node_ == o.node_; }
    const void* identity() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b);

    struct Node;

private:
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Term::Node {
    TermKind kind = TermKind::Unit;
    std::string name;
    Rat bias;
    unsigned index = 0;
    std::vector<Term> kids;

    Node() = default;
    Node(const Node&) = default;
    // Iterative, so that very deep terms do not exhaust the stack.
    ~Node();
};

// Rebuilds t with every name leaf (variable, non-terminal, parameter) for
// which `f` returns a term replaced by it. Unchanged subterms stay shared.
Term replace_leaves(const Term& t, const std::function<std::optional<Term>(const Term&)>& f);

}  // namespace phorslab
