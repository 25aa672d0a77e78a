#include "phorslab/parser.hpp"

namespace phorslab {

namespace {

// Precedence levels: 0 choice, 1 application, 2 atom.
void emit(const Term& t, int level, std::string& out)
{
    switch (t.kind()) {
    case TermKind::Var:
    case TermKind::NonTerm:
    case TermKind::Param:
        out += t.name();
        return;
    case TermKind::Unit:
        out += "e";
        return;
    case TermKind::Omega:
        out += "Omega";
        return;
    case TermKind::Tuple: {
        out += "<";
        bool first = true;
        for (const auto& it : t.items()) {
            if (!first) out += ", ";
            first = false;
            emit(it, 0, out);
        }
        out += ">";
        return;
    }
    case TermKind::App: {
        if (level > 1) out += "(";
        emit(t.fun(), 1, out);
        out += " ";
        emit(t.arg(), 2, out);
        if (level > 1) out += ")";
        return;
    }
    case TermKind::Proj: {
        if (level > 1) out += "(";
        out += "pi_" + std::to_string(t.index()) + " ";
        emit(t.body(), 2, out);
        if (level > 1) out += ")";
        return;
    }
    case TermKind::Choice: {
        if (level > 0) out += "(";
        emit(t.left(), 0, out);
        out += " [" + to_string(t.bias()) + "] ";
        emit(t.right(), 1, out);
        if (level > 0) out += ")";
        return;
    }
    }
}

}  // namespace

std::string print_term(const Term& t)
{
    std::string out;
    emit(t, 0, out);
    return out;
}

std::string print(const Scheme& s)
{
    std::string out;
    for (const auto& [name, type] : s.params) out += "param " + name + " : " + type.str() + " ;\n";
    if (s.start != "S") out += "start " + s.start + " ;\n";
    if (!out.empty()) out += "\n";
    for (const auto& r : s.rules) {
        out += r.name + " : " + r.type.str() + " ;\n";
        out += r.name;
        for (const auto& p : r.params) out += " " + p;
        out += " = " + print_term(r.body) + " ;\n";
    }
    return out;
}

}  // namespace phorslab
