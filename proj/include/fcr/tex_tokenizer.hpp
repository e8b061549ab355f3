#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fcr/corpus_model.hpp"

namespace fcr {

/// Which LaTeX commands (and single characters) are operators, identifiers, or
/// structure that is consumed without emitting a token.
///
/// Plain-text format, one entry per line under a section heading:
///
///     [operators]
///     \partial
///     =
///     [identifiers]
///     \hbar
///     [structural]
///     \left
///
/// Blank lines and lines starting with '#' are ignored.
struct TokenClassTable {
    std::set<std::string> operator_commands;
    std::set<std::string> identifier_commands;
    std::set<std::string> structural_commands;

    /// The embedded default table.
    static const TokenClassTable& builtin();
    static std::string_view builtin_text();

    /// Throws InvalidConfig on unknown sections, entries outside a section,
    /// or an entry listed in two sections.
    static TokenClassTable parse(std::string_view text);

    std::optional<TokenKind> classify(std::string_view command) const;
    bool is_structural(std::string_view command) const;
};

struct TokenizeOptions {
    std::size_t max_length = 10000;
};

/// Splits a LaTeX math string into operators, identifiers and numbers.
///
/// Decorations (`\vec`, `\hat`, `\dot`, font switches, sub/superscript
/// markers) are stripped, so `\vec{E}` yields identifier `E` and `m_0` yields
/// identifier `m` plus number `0`. `\frac{A}{B}` and `\over` emit one "/"
/// operator. A multi-letter word inside `\text`, `\mathrm`, `\operatorname` or
/// after `\rm` becomes one operator token ("div", "rot"). Unknown commands are
/// kept as identifiers and reported through `warnings`.
///
/// Throws EmptyFormula for blank input and OversizeFormula past the length cap.
ConstituentSet tokenize_latex(std::string_view latex, const TokenClassTable& table = TokenClassTable::builtin(),
                              std::vector<std::string>* warnings = nullptr, const TokenizeOptions& options = {});

/// LaTeX spelling of a Unicode math symbol ("ψ" -> "\psi", "−" -> "-"), used
/// to bring MathML text content into the same vocabulary as LaTeX input.
std::optional<std::string> latex_name_for_symbol(std::string_view utf8);

/// True for invisible operators (function application, invisible times, ...).
bool is_invisible_operator(std::string_view utf8);

} // namespace fcr
