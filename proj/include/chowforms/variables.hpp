#pragma once
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace chowforms {

// Variable kinds.
//   U(i,j)  block coefficient variables of a Chow form, i-th block, j in [0,n]
//   T(i)    shift variables of characteristic polynomials
//   X(k)    affine coordinates (X(0) is the homogenization variable)
//   L(i,j)  projection coefficients, j in [1,n]
//   THom    homogenization variable for the T-direction
//   Coef(k) generic coefficient variables, flat-indexed
enum class VarKind : std::uint8_t { U = 0, T = 1, X = 2, L = 3, THom = 4, Coef = 5 };

struct Variable {
    VarKind kind;
    std::int16_t a = 0, b = 0;

    friend bool operator==(const Variable& x, const Variable& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
    friend bool operator<(const Variable& x, const Variable& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }

    std::string name() const {
        switch (kind) {
            case VarKind::U: return "U" + std::to_string(a) + "_" + std::to_string(b);
            case VarKind::T: return "T" + std::to_string(a);
            case VarKind::X: return "X" + std::to_string(a);
            case VarKind::L: return "L" + std::to_string(a) + "_" + std::to_string(b);
            case VarKind::THom: return "Tp";
            case VarKind::Coef: return "V" + std::to_string(a);
        }
        return "?";
    }
};

inline Variable var_u(int i, int j) { return {VarKind::U, static_cast<std::int16_t>(i), static_cast<std::int16_t>(j)}; }
inline Variable var_t(int i) { return {VarKind::T, static_cast<std::int16_t>(i), 0}; }
inline Variable var_x(int k) { return {VarKind::X, static_cast<std::int16_t>(k), 0}; }
inline Variable var_l(int i, int j) { return {VarKind::L, static_cast<std::int16_t>(i), static_cast<std::int16_t>(j)}; }
inline Variable var_thom() { return {VarKind::THom, 0, 0}; }
inline Variable var_coef(int k) { return {VarKind::Coef, static_cast<std::int16_t>(k), 0}; }

inline std::optional<Variable> parse_variable_name(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "Tp") return var_thom();
    auto read_index = [](const std::string& t, std::size_t from, std::size_t to) -> std::optional<int> {
        if (from >= to) return std::nullopt;
        int v = 0;
        for (std::size_t i = from; i < to; ++i) {
            if (t[i] < '0' || t[i] > '9') return std::nullopt;
            v = v * 10 + (t[i] - '0');
            if (v > 30000) return std::nullopt;
        }
        return v;
    };
    const char head = s[0];
    const auto under = s.find('_');
    if (head == 'U' || head == 'L') {
        if (under == std::string::npos) return std::nullopt;
        auto i = read_index(s, 1, under);
        auto j = read_index(s, under + 1, s.size());
        if (!i || !j) return std::nullopt;
        return head == 'U' ? var_u(*i, *j) : var_l(*i, *j);
    }
    if (under != std::string::npos) return std::nullopt;
    auto k = read_index(s, 1, s.size());
    if (!k) return std::nullopt;
    switch (head) {
        case 'T': return var_t(*k);
        case 'X': return var_x(*k);
        case 'V': return var_coef(*k);
        default: return std::nullopt;
    }
}

// An ordered list of variables, most significant first.  Monomials store one
// exponent per position; the induced monomial order is graded lexicographic.
class VariableOrder {
    std::vector<Variable> vars_;
    std::map<Variable, int> index_;

public:
    explicit VariableOrder(std::vector<Variable> vars) : vars_(std::move(vars)) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto [it, fresh] = index_.emplace(vars_[i], static_cast<int>(i));
            if (!fresh) throw Error("variable listed twice in an order: " + vars_[i].name());
        }
    }

    std::size_t size() const { return vars_.size(); }
    const Variable& at(std::size_t i) const { return vars_[i]; }
    const std::vector<Variable>& vars() const { return vars_; }

    int index_of(const Variable& v) const {
        auto it = index_.find(v);
        return it == index_.end() ? -1 : it->second;
    }
    bool contains(const Variable& v) const { return index_.count(v) != 0; }

    friend bool operator==(const VariableOrder& a, const VariableOrder& b) {
        return a.vars_ == b.vars_;
    }
};

using OrderPtr = std::shared_ptr<const VariableOrder>;

inline OrderPtr make_order(std::vector<Variable> vars) {
    return std::make_shared<const VariableOrder>(std::move(vars));
}

// U-blocks 0..r, each U(i,0) > ... > U(i,n); r = -1 gives the empty order.
inline OrderPtr chow_ring(int n, int r) {
    std::vector<Variable> v;
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j <= n; ++j) v.push_back(var_u(i, j));
    return make_order(std::move(v));
}

// Interleaved order for characteristic polynomials:
// T0 > U(0,0) > ... > U(0,n) > T1 > U(1,0) > ... > U(r,n).
inline OrderPtr char_ring(int n, int r) {
    std::vector<Variable> v;
    for (int i = 0; i <= r; ++i) {
        v.push_back(var_t(i));
        for (int j = 0; j <= n; ++j) v.push_back(var_u(i, j));
    }
    return make_order(std::move(v));
}

inline OrderPtr x_ring(int n) {
    std::vector<Variable> v;
    for (int k = 1; k <= n; ++k) v.push_back(var_x(k));
    return make_order(std::move(v));
}

// Base order with extra variables appended below everything already present.
inline OrderPtr extend_order(const OrderPtr& base, const std::vector<Variable>& extra) {
    std::vector<Variable> v = base->vars();
    v.insert(v.end(), extra.begin(), extra.end());
    return make_order(std::move(v));
}

inline std::vector<Variable> l_block_vars(int n, int wdim) {
    std::vector<Variable> v;
    for (int i = 0; i <= wdim; ++i)
        for (int j = 1; j <= n; ++j) v.push_back(var_l(i, j));
    return v;
}

}  // namespace chowforms
