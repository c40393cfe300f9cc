#pragma once

#include <optional>
#include <span>
#include <vector>

#include "prodexp/gf.hpp"

namespace prodexp {

using Word = std::vector<Elem>;
// Row-major list of equal-length rows.
using Matrix = std::vector<Word>;

struct RowEchelon {
  Matrix rows;              // nonzero rows in reduced echelon form, pivots normalized to 1
  std::vector<int> pivots;  // pivot column of each row
};

RowEchelon row_reduce(Matrix rows, const Field& field);
int rank(const Matrix& rows, const Field& field);

// Basis of { v : <row, v> = 0 for every row } for rows of length `cols`.
Matrix null_space(const Matrix& rows, int cols, const Field& field);

// One solution x of A x = b (A given by rows), or nullopt when inconsistent.
std::optional<Word> solve(const Matrix& a, const Word& b, int cols, const Field& field);

Elem dot(std::span<const Elem> a, std::span<const Elem> b, const Field& field);

// Hamming weight / distance of plain vectors.
int weight(std::span<const Elem> v);
int hamming_distance(std::span<const Elem> a, std::span<const Elem> b);

}  // namespace prodexp
