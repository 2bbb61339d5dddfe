#pragma once

// Reference type inference, deliberately written differently from the
// library: recursive descent, pointer-built types, eager occurs check at
// binding time, and substitution maps instead of a union-find arena.

#include "lambdagen/term.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace type_oracle {

struct Ty;
using TyPtr = std::shared_ptr<Ty>;

struct Ty {
    int var = -1;  // >= 0: variable; -1: arrow
    TyPtr l, r;
};

inline TyPtr mkvar(int v) {
    auto t = std::make_shared<Ty>();
    t->var = v;
    return t;
}

inline TyPtr mkarrow(TyPtr l, TyPtr r) {
    auto t = std::make_shared<Ty>();
    t->l = std::move(l);
    t->r = std::move(r);
    return t;
}

using Subst = std::map<int, TyPtr>;

inline TyPtr walk(TyPtr t, const Subst& s) {
    while (t->var >= 0) {
        auto it = s.find(t->var);
        if (it == s.end()) break;
        t = it->second;
    }
    return t;
}

inline bool occurs(int v, const TyPtr& t, const Subst& s) {
    const TyPtr w = walk(t, s);
    if (w->var >= 0) return w->var == v;
    return occurs(v, w->l, s) || occurs(v, w->r, s);
}

inline bool unify(const TyPtr& a, const TyPtr& b, Subst& s) {
    const TyPtr wa = walk(a, s), wb = walk(b, s);
    if (wa->var >= 0 && wb->var >= 0 && wa->var == wb->var) return true;
    if (wa->var >= 0) {
        if (occurs(wa->var, wb, s)) return false;
        s[wa->var] = wb;
        return true;
    }
    if (wb->var >= 0) {
        if (occurs(wb->var, wa, s)) return false;
        s[wb->var] = wa;
        return true;
    }
    return unify(wa->l, wb->l, s) && unify(wa->r, wb->r, s);
}

inline std::optional<TyPtr> infer_rec(const lambdagen::Term& t, std::vector<TyPtr>& env, int& next,
                                      Subst& s) {
    using lambdagen::TermKind;
    switch (t.kind()) {
        case TermKind::Index: {
            const std::size_t k = t.index_value();
            if (k >= env.size()) return std::nullopt;  // free index: untyped here
            return env[env.size() - 1 - k];
        }
        case TermKind::Abs: {
            TyPtr a = mkvar(next++);
            env.push_back(a);
            auto body = infer_rec(t.body(), env, next, s);
            env.pop_back();
            if (!body) return std::nullopt;
            return mkarrow(a, *body);
        }
        case TermKind::App: {
            auto f = infer_rec(t.left(), env, next, s);
            if (!f) return std::nullopt;
            auto x = infer_rec(t.right(), env, next, s);
            if (!x) return std::nullopt;
            TyPtr res = mkvar(next++);
            if (!unify(*f, mkarrow(*x, res), s)) return std::nullopt;
            return res;
        }
    }
    return std::nullopt;
}

inline std::string bij26(int ordinal) {
    std::string out;
    long i = ordinal + 1;
    while (i > 0) {
        --i;
        out.push_back(static_cast<char>('a' + i % 26));
        i /= 26;
    }
    return {out.rbegin(), out.rend()};
}

inline void render_rec(const TyPtr& t, const Subst& s, std::map<int, int>& names, std::string& out,
                       bool parens) {
    const TyPtr w = walk(t, s);
    if (w->var >= 0) {
        auto [it, fresh] = names.try_emplace(w->var, static_cast<int>(names.size()));
        out += bij26(it->second);
        return;
    }
    if (parens) out += "(";
    const TyPtr wl = walk(w->l, s);
    render_rec(w->l, s, names, out, wl->var < 0);
    out += " -> ";
    render_rec(w->r, s, names, out, false);
    if (parens) out += ")";
}

// Principal type rendered canonically, or nullopt for untypeable terms.
inline std::optional<std::string> principal(const lambdagen::Term& t) {
    std::vector<TyPtr> env;
    Subst s;
    int next = 0;
    auto ty = infer_rec(t, env, next, s);
    if (!ty) return std::nullopt;
    std::map<int, int> names;
    std::string out;
    render_rec(*ty, s, names, out, false);
    return out;
}

}  // namespace type_oracle
