#pragma once

#include <string>
#include <vector>

#include "fcr/corpus_model.hpp"
#include "fcr/io.hpp"

namespace test_support {

inline std::string data_path(const std::string& name) { return std::string(FCR_DATA_DIR) + "/" + name; }

inline const std::vector<fcr::Formula>& bundled_corpus() {
    static const auto corpus = fcr::load_corpus(data_path("corpus.jsonl"));
    return corpus;
}

inline const fcr::AnnotationMap& bundled_annotations() {
    static const auto annotations = fcr::load_annotations(data_path("annotations.tsv"));
    return annotations;
}

/// The KGE, EFE and ME rows: the first thirty formulas.
inline std::vector<fcr::Formula> subset30() {
    std::vector<fcr::Formula> out;
    for (const auto& f : bundled_corpus()) {
        if (f.label == "KGE" || f.label == "EFE" || f.label == "ME") out.push_back(f);
    }
    return out;
}

inline std::vector<std::string> labels_of(const std::vector<fcr::Formula>& corpus) {
    std::vector<std::string> out;
    for (const auto& f : corpus) out.push_back(f.label.value_or(""));
    return out;
}

} // namespace test_support
