#pragma once

#include <string_view>

#include "fcr/corpus_model.hpp"
#include "fcr/tex_tokenizer.hpp"
#include "fcr/xml.hpp"

namespace fcr {

/// Constituents of the first `<math>` element in `mathml`: `<mo>` text becomes
/// operators, `<mi>` identifiers, `<mn>` numbers, in document order.
///
/// Unicode symbols are mapped to their LaTeX spelling ("ψ" -> "\psi") so
/// results are comparable with `tokenize_latex`; delimiters the table marks as
/// structural and invisible operators are dropped. `<annotation>` and
/// `<annotation-xml>` subtrees are ignored.
///
/// Throws ParseError (with byte offset) for malformed XML and NotMathML when no
/// `<math>` element exists.
ConstituentSet extract_mathml(std::string_view mathml, const TokenClassTable& table = TokenClassTable::builtin());

/// Same, for an already parsed `<math>` element.
ConstituentSet extract_mathml(const xml::Node& math, const TokenClassTable& table = TokenClassTable::builtin());

} // namespace fcr
