#pragma once

#include "lambdagen/term.hpp"

#include <string>

namespace lambdagen {

/// Text encodings of a Term. All renderers and parsers run with explicit
/// stacks, so arbitrarily deep terms round-trip safely.
///
///   DeBruijn:  0       \ 0        (0 1)
///   Sexp:      0       (lam 0)    (app 0 1)
///   Json:      {"idx":0}  {"abs":{"idx":0}}  {"app":[{"idx":0},{"idx":1}]}
enum class TermFormat { DeBruijn, Sexp, Json };

std::string render(const Term& t, TermFormat format = TermFormat::DeBruijn);

/// Inverse of render; the whole input must be one term (surrounding
/// whitespace allowed). Throws ParseError carrying the byte offset.
Term parse(const std::string& text, TermFormat format = TermFormat::DeBruijn);

/// Maps "debruijn" / "sexp" / "json" to the enum; throws
/// std::invalid_argument otherwise.
TermFormat term_format_from_name(const std::string& name);
const char* term_format_name(TermFormat format);

}  // namespace lambdagen
