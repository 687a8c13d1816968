#include "qsynth/gatelist.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <vector>

namespace qsynth {

namespace {

constexpr std::string_view kOpenTag = "<python>";
constexpr std::string_view kCloseTag = "</python>";

// Keeps the text between the first <python> and the first </python> after it.
std::string extract_tagged(std::string text) {
    const auto open = text.find(kOpenTag);
    if (open == std::string::npos) return text;
    const auto start = open + kOpenTag.size();
    const auto close = text.find(kCloseTag, start);
    if (close == std::string::npos) return text;
    return text.substr(start, close - start);
}

std::string drop_fence_lines(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        const bool last = eol == std::string::npos;
        if (last) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        const auto first = line.find_first_not_of(" \t\r");
        const bool fence = first != std::string_view::npos && line.substr(first).starts_with("```");
        if (!fence) {
            out.append(line);
            if (!last) out.push_back('\n');
        }
        if (last) break;
        pos = eol + 1;
    }
    return out;
}

std::string drop_non_ascii(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (static_cast<unsigned char>(c) < 0x80) out.push_back(c);
    }
    return out;
}

class Parser {
public:
    Parser(std::string_view text, int num_qubits) : text_(text), num_qubits_(num_qubits) {}

    Expected<Circuit, ParseError> run() {
        Circuit circuit;
        circuit.num_qubits = num_qubits_;
        skip_ws();
        if (!consume('[')) return fail(ParseError::Kind::NoListFound, "expected '[' opening the gate list");
        skip_ws();
        if (consume(']')) return finish(std::move(circuit));
        while (true) {
            auto gate = entry();
            if (!gate) return *error_;
            circuit.gates.push_back(*gate);
            skip_ws();
            if (consume(']')) break;
            if (!consume(',')) return fail(ParseError::Kind::MalformedEntry, "expected ',' or ']' after entry");
            skip_ws();
            // tolerate a trailing comma before the closing bracket
            if (consume(']')) break;
        }
        return finish(std::move(circuit));
    }

private:
    Expected<Circuit, ParseError> finish(Circuit circuit) {
        skip_ws();
        if (pos_ != text_.size()) return fail(ParseError::Kind::MalformedEntry, "unexpected text after the gate list");
        return circuit;
    }

    std::optional<Gate> entry() {
        const char open = peek();
        if (open != '(' && open != '[') return error(ParseError::Kind::MalformedEntry, "expected '(' or '[' opening an entry");
        ++pos_;
        const char close = open == '(' ? ')' : ']';
        skip_ws();

        const std::size_t name_pos = pos_;
        const char quote = peek();
        if (quote != '\'' && quote != '"') return error(ParseError::Kind::MalformedEntry, "expected quoted gate name");
        ++pos_;
        std::string name;
        while (pos_ < text_.size() && text_[pos_] != quote) {
            name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_]))));
            ++pos_;
        }
        if (!consume(quote)) return error(ParseError::Kind::MalformedEntry, "unterminated gate name");

        GateKind kind;
        std::size_t arity;
        if (name == "H") {
            kind = GateKind::H;
            arity = 1;
        } else if (name == "RY") {
            kind = GateKind::RY;
            arity = 2;
        } else if (name == "CNOT") {
            kind = GateKind::CNOT;
            arity = 2;
        } else {
            pos_ = name_pos;
            return error(ParseError::Kind::UnknownGate, "unknown gate '" + name + "'");
        }

        skip_ws();
        if (!consume(',')) return error(ParseError::Kind::MalformedEntry, "expected ',' after gate name");
        skip_ws();
        const std::size_t args_pos = pos_;
        if (!consume('[')) return error(ParseError::Kind::MalformedEntry, "expected '[' opening the argument list");

        std::vector<std::string_view> args;
        std::vector<std::size_t> arg_pos;
        skip_ws();
        if (!consume(']')) {
            while (true) {
                skip_ws();
                const std::size_t start = pos_;
                while (pos_ < text_.size() && is_number_char(text_[pos_])) ++pos_;
                if (start == pos_) return error(ParseError::Kind::BadNumber, "expected a number");
                args.push_back(text_.substr(start, pos_ - start));
                arg_pos.push_back(start);
                skip_ws();
                if (consume(']')) break;
                if (!consume(',')) return error(ParseError::Kind::MalformedEntry, "expected ',' or ']' in argument list");
            }
        }
        if (args.size() != arity) {
            pos_ = args_pos;
            return error(ParseError::Kind::BadArity, std::string(gate_name(kind)) + " takes " + std::to_string(arity) +
                                                         " arguments, got " + std::to_string(args.size()));
        }
        skip_ws();
        if (!consume(close)) return error(ParseError::Kind::MalformedEntry, std::string("expected '") + close + "' closing the entry");

        switch (kind) {
            case GateKind::H: {
                auto w = to_int(args[0], arg_pos[0]);
                if (!w) return std::nullopt;
                return Gate::h(*w);
            }
            case GateKind::RY: {
                auto a = to_double(args[0], arg_pos[0]);
                if (!a) return std::nullopt;
                auto w = to_int(args[1], arg_pos[1]);
                if (!w) return std::nullopt;
                return Gate::ry(*a, *w);
            }
            case GateKind::CNOT: {
                auto c = to_int(args[0], arg_pos[0]);
                if (!c) return std::nullopt;
                auto t = to_int(args[1], arg_pos[1]);
                if (!t) return std::nullopt;
                return Gate::cnot(*c, *t);
            }
        }
        return std::nullopt;
    }

    std::optional<int> to_int(std::string_view token, std::size_t at) {
        std::string_view digits = token;
        if (digits.starts_with('+')) digits.remove_prefix(1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
            pos_ = at;
            error(ParseError::Kind::BadNumber, "wire '" + std::string(token) + "' is not an integer");
            return std::nullopt;
        }
        return value;
    }

    std::optional<double> to_double(std::string_view token, std::size_t at) {
        std::string_view digits = token;
        if (digits.starts_with('+')) digits.remove_prefix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(value)) {
            pos_ = at;
            error(ParseError::Kind::BadNumber, "angle '" + std::string(token) + "' is not a decimal number");
            return std::nullopt;
        }
        return value;
    }

    static bool is_number_char(char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E';
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool consume(char c) {
        if (peek() == c && pos_ < text_.size()) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::nullopt_t error(ParseError::Kind kind, std::string detail) {
        error_ = ParseError{kind, std::min(pos_, text_.size()), std::move(detail)};
        return std::nullopt;
    }

    Expected<Circuit, ParseError> fail(ParseError::Kind kind, std::string detail) {
        error(kind, std::move(detail));
        return *error_;
    }

    std::string_view text_;
    int num_qubits_;
    std::size_t pos_ = 0;
    std::optional<ParseError> error_;
};

}  // namespace

const char* to_string(ParseError::Kind kind) {
    switch (kind) {
        case ParseError::Kind::NoListFound: return "no-list-found";
        case ParseError::Kind::MalformedEntry: return "malformed-entry";
        case ParseError::Kind::UnknownGate: return "unknown-gate";
        case ParseError::Kind::BadArity: return "bad-arity";
        case ParseError::Kind::BadNumber: return "bad-number";
    }
    return "?";
}

std::string ParseError::describe() const {
    return std::string(to_string(kind)) + " at offset " + std::to_string(position) + ": " + detail;
}

Expected<std::string, ParseError> curate(std::string_view raw) {
    // Tag extraction, fence removal and byte filtering can expose new tags or
    // fences, so run them to a fixpoint before trimming to the list.
    std::string text(raw);
    while (true) {
        std::string next = drop_non_ascii(drop_fence_lines(extract_tagged(text)));
        if (next == text) break;
        text = std::move(next);
    }

    const auto open = text.find('[');
    if (open == std::string::npos) {
        return ParseError{ParseError::Kind::NoListFound, 0, "no '[' in proposal"};
    }
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
        if (text[i] == '[') {
            ++depth;
        } else if (text[i] == ']') {
            if (--depth == 0) return text.substr(open, i - open + 1);
        }
    }
    return ParseError{ParseError::Kind::NoListFound, open, "'[' at offset " + std::to_string(open) + " is never closed"};
}

Expected<Circuit, ParseError> parse(std::string_view text, int num_qubits) {
    return Parser(text, num_qubits).run();
}

Expected<Circuit, ParseError> parse_proposal(std::string_view raw, int num_qubits) {
    auto curated = curate(raw);
    if (!curated) return curated.error();
    return parse(curated.value(), num_qubits);
}

std::string format_angle(double angle) {
    if (std::isfinite(angle) && angle == std::trunc(angle) && std::fabs(angle) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", angle);
        return buf;
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, angle);
    (void)ec;
    return std::string(buf, ptr);
}

std::string serialize(const Circuit& circuit) {
    std::string out = "[";
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (i) out += ", ";
        out += "('";
        out += gate_name(g.kind);
        out += "', [";
        switch (g.kind) {
            case GateKind::H:
                out += std::to_string(g.target);
                break;
            case GateKind::RY:
                out += format_angle(g.angle) + ", " + std::to_string(g.target);
                break;
            case GateKind::CNOT:
                out += std::to_string(g.control) + ", " + std::to_string(g.target);
                break;
        }
        out += "])";
    }
    out += "]";
    return out;
}

}  // namespace qsynth
