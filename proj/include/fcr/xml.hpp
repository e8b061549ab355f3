#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fcr::xml {

/// Minimal XML tree: elements and text, no namespaces (prefixes are dropped
/// from names), entities decoded. Enough for MathML fragments and XHTML
/// documents.
struct Node {
    enum class Kind { Element, Text };

    Kind kind = Kind::Element;
    std::string name; // local name for elements
    std::string text; // decoded character data for text nodes
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Node> children;
    std::size_t offset = 0; // byte offset of the start tag / text run in the source

    bool is_element(std::string_view local_name) const {
        return kind == Kind::Element && name == local_name;
    }
    std::optional<std::string> attribute(std::string_view key) const;
    /// Concatenated text of this node and all descendants.
    std::string text_content() const;
};

/// Parses a document (or fragment with a single root element). Comments,
/// processing instructions and DOCTYPE are skipped.
///
/// Throws fcr::Error(ParseError) naming the byte offset of the defect.
Node parse(std::string_view source);

/// Depth-first pre-order search for the first element with `local_name`.
const Node* find_first(const Node& root, std::string_view local_name);

} // namespace fcr::xml
