#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcr/corpus_model.hpp"

namespace fcr {

// ---------------------------------------------------------------------------
// Corpus files: JSONL, one formula per line
//   {"id", "latex", "label"?, "concept_qid"?, "doc_id"?, "context"?,
//    "context_offset"?, "constituents"?}
// ---------------------------------------------------------------------------

/// All-or-nothing: the first bad line raises CorpusFormatError naming the
/// line number; duplicate ids raise CorpusFormatError naming the id.
std::vector<Formula> parse_corpus(std::string_view jsonl);
std::vector<Formula> load_corpus(const std::filesystem::path& path);

/// Canonical emission: compact JSON, keys sorted, one line per formula.
std::string emit_corpus(std::span<const Formula> corpus);
void save_corpus(const std::filesystem::path& path, std::span<const Formula> corpus);

// ---------------------------------------------------------------------------
// Annotation files: TSV with columns formula_id, token, name, qid. An optional
// header row starting with "formula_id" is skipped.
// ---------------------------------------------------------------------------

AnnotationMap parse_annotations(std::string_view tsv);
AnnotationMap load_annotations(const std::filesystem::path& path);
std::string emit_annotations(const AnnotationMap& annotations);

// ---------------------------------------------------------------------------
// NTCIR-style XHTML ingestion
// ---------------------------------------------------------------------------

struct IngestOptions {
    std::size_t context_window = 500; // characters of prose kept on each side
};

/// Every `<math>` element of every `*.xhtml`/`*.html`/`*.xml` file under
/// `directory` (sorted by path) becomes a Formula: id `<stem>#<byte offset>`,
/// doc_id the file stem, latex from the `alttext` attribute (falling back to the
/// element text), constituents from the MathML markup, context the surrounding
/// prose. Unreadable or malformed files are skipped with a warning.
///
/// Throws IngestEmpty when nothing was extracted.
std::vector<Formula> ingest_ntcir(const std::filesystem::path& directory, const IngestOptions& options = {},
                                  std::vector<std::string>* warnings = nullptr);

/// Formulas of one XHTML document (exposed for tests).
std::vector<Formula> ingest_document(std::string_view xhtml, const std::string& doc_id,
                                     const IngestOptions& options = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace fcr
