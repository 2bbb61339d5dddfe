#include "lambdagen/serialize.hpp"

#include "lambdagen/errors.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lambdagen {

namespace {

// ---------------------------------------------------------------------------
// Rendering: explicit work stack of (subterm | literal) items
// ---------------------------------------------------------------------------

struct RenderItem {
    const Term* node = nullptr;
    const char* literal = nullptr;
};

std::string render_with(const Term& t, TermFormat format) {
    std::string out;
    std::vector<RenderItem> stack{{&t, nullptr}};
    while (!stack.empty()) {
        RenderItem item = stack.back();
        stack.pop_back();
        if (item.literal) {
            out += item.literal;
            continue;
        }
        const Term* n = item.node;
        switch (n->kind()) {
            case TermKind::Index:
                switch (format) {
                    case TermFormat::DeBruijn:
                    case TermFormat::Sexp:
                        out += std::to_string(n->index_value());
                        break;
                    case TermFormat::Json:
                        out += "{\"idx\":";
                        out += std::to_string(n->index_value());
                        out += '}';
                        break;
                }
                break;
            case TermKind::Abs:
                switch (format) {
                    case TermFormat::DeBruijn:
                        stack.push_back({&n->body(), nullptr});
                        stack.push_back({nullptr, "\\ "});
                        break;
                    case TermFormat::Sexp:
                        stack.push_back({nullptr, ")"});
                        stack.push_back({&n->body(), nullptr});
                        stack.push_back({nullptr, "(lam "});
                        break;
                    case TermFormat::Json:
                        stack.push_back({nullptr, "}"});
                        stack.push_back({&n->body(), nullptr});
                        stack.push_back({nullptr, "{\"abs\":"});
                        break;
                }
                break;
            case TermKind::App:
                switch (format) {
                    case TermFormat::DeBruijn:
                        stack.push_back({nullptr, ")"});
                        stack.push_back({&n->right(), nullptr});
                        stack.push_back({nullptr, " "});
                        stack.push_back({&n->left(), nullptr});
                        stack.push_back({nullptr, "("});
                        break;
                    case TermFormat::Sexp:
                        stack.push_back({nullptr, ")"});
                        stack.push_back({&n->right(), nullptr});
                        stack.push_back({nullptr, " "});
                        stack.push_back({&n->left(), nullptr});
                        stack.push_back({nullptr, "(app "});
                        break;
                    case TermFormat::Json:
                        stack.push_back({nullptr, "]}"});
                        stack.push_back({&n->right(), nullptr});
                        stack.push_back({nullptr, ","});
                        stack.push_back({&n->left(), nullptr});
                        stack.push_back({nullptr, "{\"app\":["});
                        break;
                }
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing: pushdown machines emitting preorder constructor streams
// ---------------------------------------------------------------------------

struct Reader {
    const std::string& text;
    std::size_t pos = 0;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws() {
        while (!eof()) {
            const char c = text[pos];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') ++pos;
            else break;
        }
    }

    void expect(char c, const char* what) {
        if (eof() || text[pos] != c) throw ParseError(what, pos);
        ++pos;
    }

    std::uint64_t read_nat() {
        const char* begin = text.data() + pos;
        const char* end = text.data() + text.size();
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec == std::errc::result_out_of_range) throw ParseError("index literal too large", pos);
        if (ptr == begin) throw ParseError("expected a number", pos);
        pos += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    void finish() {
        skip_ws();
        if (!eof()) throw ParseError("trailing input after term", pos);
    }
};

enum class Cont : std::uint8_t {
    AppFirstDone,   // debruijn/sexp: first operand read, second follows
    AppSecondDone,  // debruijn/sexp: both operands read, ')' follows
    LamClose,       // sexp: body read, ')' follows
    JsonAbsClose,   // json: body read, '}' follows
    JsonAppComma,   // json: first element read, ',' follows
    JsonAppClose,   // json: second element read, ']}' follows
};

Term parse_debruijn(const std::string& text) {
    Reader r{text};
    std::vector<PrefixOp> ops;
    std::vector<Cont> conts;
    bool done = false;
    while (!done) {
        // Descend through prefix constructors until a leaf completes a term.
        for (;;) {
            r.skip_ws();
            if (r.eof()) throw ParseError("expected a term", r.pos);
            const char c = r.peek();
            if (c == '\\') {
                ++r.pos;
                ops.push_back({TermKind::Abs, 0});
            } else if (c == '(') {
                ++r.pos;
                ops.push_back({TermKind::App, 0});
                conts.push_back(Cont::AppFirstDone);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                ops.push_back({TermKind::Index, r.read_nat()});
                break;
            } else {
                throw ParseError("expected a number, '\\' or '('", r.pos);
            }
        }
        // Unwind completed constructors.
        for (;;) {
            if (conts.empty()) {
                done = true;
                break;
            }
            if (conts.back() == Cont::AppFirstDone) {
                conts.back() = Cont::AppSecondDone;
                break;
            }
            r.skip_ws();
            r.expect(')', "expected ')'");
            conts.pop_back();
        }
    }
    r.finish();
    return build_term(ops);
}

Term parse_sexp(const std::string& text) {
    Reader r{text};
    std::vector<PrefixOp> ops;
    std::vector<Cont> conts;
    bool done = false;
    while (!done) {
        for (;;) {
            r.skip_ws();
            if (r.eof()) throw ParseError("expected a term", r.pos);
            const char c = r.peek();
            if (c == '(') {
                ++r.pos;
                r.skip_ws();
                if (text.compare(r.pos, 3, "lam") == 0) {
                    r.pos += 3;
                    ops.push_back({TermKind::Abs, 0});
                    conts.push_back(Cont::LamClose);
                } else if (text.compare(r.pos, 3, "app") == 0) {
                    r.pos += 3;
                    ops.push_back({TermKind::App, 0});
                    conts.push_back(Cont::AppFirstDone);
                } else {
                    throw ParseError("expected 'lam' or 'app'", r.pos);
                }
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                ops.push_back({TermKind::Index, r.read_nat()});
                break;
            } else {
                throw ParseError("expected a number or '('", r.pos);
            }
        }
        for (;;) {
            if (conts.empty()) {
                done = true;
                break;
            }
            if (conts.back() == Cont::AppFirstDone) {
                conts.back() = Cont::AppSecondDone;
                break;
            }
            // AppSecondDone and LamClose both just need the ')'.
            r.skip_ws();
            r.expect(')', "expected ')'");
            conts.pop_back();
        }
    }
    r.finish();
    return build_term(ops);
}

Term parse_json(const std::string& text) {
    Reader r{text};
    std::vector<PrefixOp> ops;
    std::vector<Cont> conts;
    auto read_key = [&r, &text]() -> std::string {
        r.expect('"', "expected '\"'");
        const std::size_t start = r.pos;
        while (!r.eof() && r.peek() != '"') ++r.pos;
        if (r.eof()) throw ParseError("unterminated key", r.pos);
        std::string key = text.substr(start, r.pos - start);
        ++r.pos;
        return key;
    };
    bool done = false;
    while (!done) {
        for (;;) {
            r.skip_ws();
            r.expect('{', "expected '{'");
            r.skip_ws();
            const std::size_t key_at = r.pos;
            const std::string key = read_key();
            r.skip_ws();
            r.expect(':', "expected ':'");
            r.skip_ws();
            if (key == "idx") {
                ops.push_back({TermKind::Index, r.read_nat()});
                r.skip_ws();
                r.expect('}', "expected '}'");
                break;
            } else if (key == "abs") {
                ops.push_back({TermKind::Abs, 0});
                conts.push_back(Cont::JsonAbsClose);
            } else if (key == "app") {
                r.expect('[', "expected '['");
                ops.push_back({TermKind::App, 0});
                conts.push_back(Cont::JsonAppComma);
            } else {
                throw ParseError("expected key 'idx', 'abs' or 'app'", key_at);
            }
        }
        for (;;) {
            if (conts.empty()) {
                done = true;
                break;
            }
            const Cont top = conts.back();
            if (top == Cont::JsonAppComma) {
                r.skip_ws();
                r.expect(',', "expected ','");
                conts.back() = Cont::JsonAppClose;
                break;
            }
            r.skip_ws();
            if (top == Cont::JsonAppClose) {
                r.expect(']', "expected ']'");
                r.skip_ws();
            }
            r.expect('}', "expected '}'");
            conts.pop_back();
        }
    }
    r.finish();
    return build_term(ops);
}

}  // namespace

std::string render(const Term& t, TermFormat format) { return render_with(t, format); }

Term parse(const std::string& text, TermFormat format) {
    switch (format) {
        case TermFormat::DeBruijn: return parse_debruijn(text);
        case TermFormat::Sexp: return parse_sexp(text);
        case TermFormat::Json: return parse_json(text);
    }
    throw std::invalid_argument("unknown term format");
}

TermFormat term_format_from_name(const std::string& name) {
    if (name == "debruijn") return TermFormat::DeBruijn;
    if (name == "sexp") return TermFormat::Sexp;
    if (name == "json") return TermFormat::Json;
    throw std::invalid_argument("unknown format name: " + name);
}

const char* term_format_name(TermFormat format) {
    switch (format) {
        case TermFormat::DeBruijn: return "debruijn";
        case TermFormat::Sexp: return "sexp";
        case TermFormat::Json: return "json";
    }
    return "?";
}

}  // namespace lambdagen
