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

#include "pifs/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace pifs {

namespace {

constexpr std::size_t kMaxStack = 64;

struct FunctionEntry {
    std::string_view name;
    Expr::Op op;
    int arity;
};

constexpr std::array<FunctionEntry, 9> kFunctions = {{
    {"exp", Expr::Op::Exp, 1},
    {"log", Expr::Op::Log, 1},
    {"sqrt", Expr::Op::Sqrt, 1},
    {"abs", Expr::Op::Abs, 1},
    {"sin", Expr::Op::Sin, 1},
    {"cos", Expr::Op::Cos, 1},
    {"pow", Expr::Op::Pow, 2},
    {"min", Expr::Op::Min, 2},
    {"max", Expr::Op::Max, 2},
}};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

// Recursive-descent parser emitting postfix code.
class ExprParser {
public:
    ExprParser(std::string_view src, Expr& out) : src_(src), out_(out) {}

    void parse() {
        expression();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    }

private:
    std::string_view src_;
    Expr& out_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ExprError("expression '" + std::string(src_) + "': " + msg, pos_ + 1);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void emit(Expr::Op op, double value = 0.0) {
        out_.code_.push_back({op, value});
        switch (op) {
            case Expr::Op::Const:
            case Expr::Op::X:
            case Expr::Op::I:
            case Expr::Op::T:
                ++depth_;
                break;
            case Expr::Op::Add:
            case Expr::Op::Sub:
            case Expr::Op::Mul:
            case Expr::Op::Div:
            case Expr::Op::Pow:
            case Expr::Op::Min:
            case Expr::Op::Max:
                --depth_;
                break;
            default:
                break;
        }
        out_.stack_depth_ = std::max(out_.stack_depth_, depth_);
        if (depth_ > kMaxStack) fail("expression too deeply nested");
    }

    void expression() {
        term();
        for (;;) {
            if (accept('+')) {
                term();
                emit(Expr::Op::Add);
            } else if (accept('-')) {
                term();
                emit(Expr::Op::Sub);
            } else {
                return;
            }
        }
    }

    void term() {
        unary();
        for (;;) {
            if (accept('*')) {
                unary();
                emit(Expr::Op::Mul);
            } else if (accept('/')) {
                unary();
                emit(Expr::Op::Div);
            } else {
                return;
            }
        }
    }

    void unary() {
        if (accept('-')) {
            unary();
            emit(Expr::Op::Neg);
        } else if (accept('+')) {
            unary();
        } else {
            power();
        }
    }

    void power() {
        primary();
        if (accept('^')) {
            unary();
            emit(Expr::Op::Pow);
        }
    }

    void primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            expression();
            if (!accept(')')) fail("expected ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
            return;
        }
        if (is_ident_start(c)) {
            identifier();
            return;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    void number() {
        double value = 0.0;
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        emit(Expr::Op::Const, value);
    }

    void identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        skip_space();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            for (const auto& fn : kFunctions) {
                if (fn.name != name) continue;
                ++pos_;
                expression();
                for (int a = 1; a < fn.arity; ++a) {
                    if (!accept(',')) fail("function '" + std::string(name) + "' expects " +
                                           std::to_string(fn.arity) + " arguments");
                    expression();
                }
                if (!accept(')')) fail("expected ')' after arguments");
                emit(fn.op);
                return;
            }
            pos_ = start;
            fail("unknown function '" + std::string(name) + "'");
        }

        if (name == "x") {
            out_.uses_x_ = true;
            emit(Expr::Op::X);
        } else if (name == "i") {
            out_.uses_i_ = true;
            emit(Expr::Op::I);
        } else if (name == "pi") {
            emit(Expr::Op::Const, std::numbers::pi);
        } else if (name == "e") {
            emit(Expr::Op::Const, std::numbers::e);
        } else if (name.size() >= 2 && name[0] == 't') {
            std::size_t axis = 0;
            const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), axis);
            if (ec != std::errc() || ptr != name.data() + name.size() || axis < 1 ||
                axis > kMaxParamDim) {
                pos_ = start;
                fail("unknown variable '" + std::string(name) + "'");
            }
            out_.max_t_ = std::max(out_.max_t_, axis);
            emit(Expr::Op::T, static_cast<double>(axis - 1));
        } else {
            pos_ = start;
            fail("unknown variable '" + std::string(name) + "'");
        }
    }
};

Expr Expr::compile(std::string_view source) {
    Expr e;
    e.source_ = std::string(source);
    ExprParser(source, e).parse();
    return e;
}

Expr Expr::constant(double value) {
    Expr e;
    e.code_.push_back({Op::Const, value});
    e.stack_depth_ = 1;
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    e.source_.assign(buf, ec == std::errc() ? ptr : buf);
    return e;
}

double Expr::eval(const ExprEnv& env) const {
    if (code_.empty()) throw std::logic_error("Expr::eval on an empty expression");
    std::array<double, kMaxStack> stack;
    std::size_t top = 0;
    for (const Instr& ins : code_) {
        switch (ins.op) {
            case Op::Const: stack[top++] = ins.value; break;
            case Op::X: stack[top++] = env.x; break;
            case Op::I: stack[top++] = env.i; break;
            case Op::T: stack[top++] = env.t[static_cast<std::size_t>(ins.value)]; break;
            case Op::Add: --top; stack[top - 1] += stack[top]; break;
            case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
            case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
            case Op::Div: --top; stack[top - 1] /= stack[top]; break;
            case Op::Pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
            case Op::Min: --top; stack[top - 1] = std::min(stack[top - 1], stack[top]); break;
            case Op::Max: --top; stack[top - 1] = std::max(stack[top - 1], stack[top]); break;
            case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
            case Op::Log: stack[top - 1] = std::log(stack[top - 1]); break;
            case Op::Sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
            case Op::Abs: stack[top - 1] = std::abs(stack[top - 1]); break;
            case Op::Sin: stack[top - 1] = std::sin(stack[top - 1]); break;
            case Op::Cos: stack[top - 1] = std::cos(stack[top - 1]); break;
        }
    }
    return stack[0];
}

} // namespace pifs
