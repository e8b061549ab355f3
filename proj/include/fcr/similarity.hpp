#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcr/corpus_model.hpp"
#include "fcr/encoding.hpp"

namespace fcr {

/// dot(a, b) / (|a| |b|); 0 when either side is the zero vector.
/// Throws DimensionMismatch.
double cosine(std::span<const double> a, std::span<const double> b);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Best round(100 * (1 - lev(s, w) / |s|)) over the windows w of the longer
/// string that have the length of the shorter string s. Two empty strings score
/// 100; one empty string scores 0. Strings are compared byte-wise.
int partial_ratio(std::string_view a, std::string_view b);

/// Size of the intersection of the two formulas' resolved QID sets.
/// Throws MissingAnnotation when either formula has no resolved QID.
std::size_t qid_overlap(const Formula& a, const Formula& b, const AnnotationMap& annotations);

struct SimilarityInputs {
    const AnnotationMap* annotations = nullptr; // required for QidOverlap
    const EncodingSpace* space = nullptr;       // required for the cosine measures
};

/// Rows and columns follow corpus order. Fuzzy compares canonical LaTeX.
/// Throws InvalidConfig when the measure's input is missing.
SimilarityMatrix similarity_matrix(std::span<const Formula> corpus, Measure measure,
                                   const SimilarityInputs& inputs = {});

/// Mean pooling per class pair, classes in order of first appearance in
/// `labels` (aligned with the matrix rows). Same-class pairs skip i == j; a
/// singleton class keeps its member's diagonal value.
SimilarityMatrix class_pooled_matrix(const SimilarityMatrix& m, std::span<const std::string> labels);

/// Rows and columns reordered by descending row mean (stable on ties).
/// `permutation[i]` is the input row shown at position i.
SimilarityMatrix sort_matrix(const SimilarityMatrix& m);

/// Mean of the entries with i != j; 0 for matrices smaller than 2x2.
double off_diagonal_mean(const SimilarityMatrix& m);

/// For each row, the label whose members (other than the row itself) have the
/// largest summed similarity to it. Ties go to the label seen first.
std::vector<std::string> assign_by_similarity(const SimilarityMatrix& m, std::span<const std::string> labels);

/// CSV with a header row and a leading label column.
std::string matrix_to_csv(const SimilarityMatrix& m);

} // namespace fcr
