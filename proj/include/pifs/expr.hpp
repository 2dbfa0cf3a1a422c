/*
   Copyright 2026 The pifs-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pifs {

/// Maximum parameter dimension d supported by expressions and families.
inline constexpr std::size_t kMaxParamDim = 8;

/// Variable bindings for expression evaluation: x, the symbol index i and t1..t8.
struct ExprEnv {
    double x = 0.0;
    double i = 0.0;
    std::array<double, kMaxParamDim> t{};
};

class ExprError : public std::runtime_error {
public:
    ExprError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}
    /// 1-based column within the expression source.
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// A compiled arithmetic expression over x, i, t1..t8.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numeric
/// literals, constants pi and e, and the functions exp, log, sqrt, abs, sin,
/// cos, pow(a, b), min(a, b), max(a, b).
class Expr {
public:
    Expr() = default;
    static Expr compile(std::string_view source);
    static Expr constant(double value);

    double eval(const ExprEnv& env) const;

    const std::string& source() const { return source_; }
    bool uses_x() const { return uses_x_; }
    bool uses_index() const { return uses_i_; }
    /// Highest t-axis referenced (0 when the expression is free of t).
    std::size_t max_param() const { return max_t_; }
    bool empty() const { return code_.empty(); }

    enum class Op : unsigned char {
        Const, X, I, T, Add, Sub, Mul, Div, Pow, Neg,
        Exp, Log, Sqrt, Abs, Sin, Cos, Min, Max
    };
    struct Instr {
        Op op;
        double value = 0.0;  // literal for Const, axis for T
    };

private:
    std::vector<Instr> code_;
    std::string source_;
    std::size_t stack_depth_ = 0;
    bool uses_x_ = false;
    bool uses_i_ = false;
    std::size_t max_t_ = 0;

    friend class ExprParser;
};

} // namespace pifs
